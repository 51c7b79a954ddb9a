//! Finite-dimensional real Lie algebras given by structure constants.
//!
//! Basis indices are zero-based throughout the crate: index `0` is the first
//! basis vector (`X₁` / `Y₁` in the usual one-based notation).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Residual below which the Jacobi identity or unimodularity is treated as holding.
pub const HOLDS_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis change is not lower unitriangular (entry ({row}, {col}) = {value})")]
    NotUnitriangular { row: usize, col: usize, value: f64 },
    #[error("basis change matrix is singular")]
    Singular,
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// Dense structure constants `c[i][j][k]`: the coefficient of basis vector `k`
/// in `[e_i, e_j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<f64>,
}

impl StructureConstants {
    /// The abelian algebra of the given dimension (all brackets zero).
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            c: vec![0.0; dim * dim * dim],
        }
    }

    /// Builds structure constants from the brackets `[e_i, e_j] = Σ_k v_k e_k`
    /// for `i < j`; the antisymmetric completion is filled in.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, &[(usize, f64)])]) -> Result<Self, LieError> {
        let mut sc = Self::zeros(dim);
        for &(i, j, terms) in brackets {
            for &(k, v) in terms {
                sc.add_bracket_term(i, j, k, v)?;
            }
        }
        Ok(sc)
    }

    /// Adds `v·e_k` to `[e_i, e_j]` (and `−v·e_k` to `[e_j, e_i]`).
    pub fn add_bracket_term(&mut self, i: usize, j: usize, k: usize, v: f64) -> Result<(), LieError> {
        for index in [i, j, k] {
            if index >= self.dim {
                return Err(LieError::IndexOutOfRange { index, dim: self.dim });
            }
        }
        if i == j {
            return Ok(());
        }
        let ij = self.idx(i, j, k);
        let ji = self.idx(j, i, k);
        self.c[ij] += v;
        self.c[ji] -= v;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[self.idx(i, j, k)]
    }

    /// Flat row-major view, index `(i·dim + j)·dim + k`.
    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }

    /// Returns a copy with every constant transformed by `f(i, j, k, c_ijk)`.
    pub fn map(&self, mut f: impl FnMut(usize, usize, usize, f64) -> f64) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let idx = self.idx(i, j, k);
                    out.c[idx] = f(i, j, k, self.c[idx]);
                }
            }
        }
        out
    }

    /// Largest `|c[i][j][k] + c[j][i][k]|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, LieError> {
        if self.dim != other.dim {
            return Err(LieError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Nonzero brackets `[e_i, e_j]` with `i < j`, as `(i, j, coefficients)`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<f64>)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let v: Vec<f64> = (0..n).map(|k| self.get(i, j, k)).collect();
                if v.iter().any(|x| *x != 0.0) {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

/// `[u, v]` for coefficient vectors `u`, `v`.
pub fn bracket_apply(sc: &StructureConstants, u: &[f64], v: &[f64]) -> Result<Vec<f64>, LieError> {
    let n = sc.dim;
    for len in [u.len(), v.len()] {
        if len != n {
            return Err(LieError::DimensionMismatch { expected: n, found: len });
        }
    }
    let mut w = vec![0.0; n];
    for i in 0..n {
        if u[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            let uv = u[i] * v[j];
            if uv == 0.0 {
                continue;
            }
            for (k, wk) in w.iter_mut().enumerate() {
                *wk += uv * sc.get(i, j, k);
            }
        }
    }
    Ok(w)
}

/// Maximum absolute component of the cyclic Jacobi sum
/// `[[e_i,e_j],e_l] + [[e_j,e_l],e_i] + [[e_l,e_i],e_j]` over all index triples.
pub fn jacobi_residual(sc: &StructureConstants) -> f64 {
    let n = sc.dim;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for k in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += sc.get(i, j, m) * sc.get(m, l, k)
                            + sc.get(j, l, m) * sc.get(m, i, k)
                            + sc.get(l, i, m) * sc.get(m, j, k);
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// `max_j |tr ad(e_j)|`; zero iff the algebra is unimodular.
pub fn unimodularity_defect(sc: &StructureConstants) -> f64 {
    let n = sc.dim;
    (0..n)
        .map(|j| (0..n).map(|i| sc.get(j, i, i)).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

/// Lower-unitriangular change of basis `Y_i = Σ_k Λ[i][k] X_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisChange {
    dim: usize,
    lambda: Vec<f64>,
}

impl BasisChange {
    pub fn identity(dim: usize) -> Self {
        let mut lambda = vec![0.0; dim * dim];
        for i in 0..dim {
            lambda[i * dim + i] = 1.0;
        }
        Self { dim, lambda }
    }

    /// Validates a full square matrix (given by rows).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LieError> {
        let dim = rows.len();
        let mut lambda = Vec::with_capacity(dim * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(LieError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            for (c, &value) in row.iter().enumerate() {
                let ok = match c.cmp(&r) {
                    std::cmp::Ordering::Equal => value == 1.0,
                    std::cmp::Ordering::Greater => value == 0.0,
                    std::cmp::Ordering::Less => value.is_finite(),
                };
                if !ok {
                    return Err(LieError::NotUnitriangular { row: r, col: c, value });
                }
                lambda.push(value);
            }
        }
        Ok(Self { dim, lambda })
    }

    /// The five-dimensional layout with strictly-lower entries `a₁…a₁₀`
    /// filled column by column:
    ///
    /// ```text
    /// 1
    /// a1 1
    /// a2 a5 1
    /// a3 a6 a8  1
    /// a4 a7 a9 a10 1
    /// ```
    pub fn from_entries(a: [f64; 10]) -> Self {
        let [a1, a2, a3, a4, a5, a6, a7, a8, a9, a10] = a;
        let rows = vec![
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![a1, 1.0, 0.0, 0.0, 0.0],
            vec![a2, a5, 1.0, 0.0, 0.0],
            vec![a3, a6, a8, 1.0, 0.0],
            vec![a4, a7, a9, a10, 1.0],
        ];
        Self::from_rows(&rows).expect("layout is unitriangular by construction")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.lambda[row * self.dim + col]
    }

    /// Inverse by forward substitution; the result is again lower unitriangular.
    pub fn inverse(&self) -> Result<Self, LieError> {
        let n = self.dim;
        let mut inv = vec![0.0; n * n];
        // Solve Λ·Z = I column by column.
        for col in 0..n {
            for row in 0..n {
                let rhs = if row == col { 1.0 } else { 0.0 };
                let mut s = rhs;
                for k in 0..row {
                    s -= self.get(row, k) * inv[k * n + col];
                }
                let pivot = self.get(row, row);
                if pivot == 0.0 {
                    return Err(LieError::Singular);
                }
                inv[row * n + col] = s / pivot;
            }
        }
        Ok(Self { dim: n, lambda: inv })
    }
}

/// Structure constants of the same algebra in the basis `Y_i = Σ_k Λ[i][k] X_k`.
pub fn change_basis(sc: &StructureConstants, t: &BasisChange) -> Result<StructureConstants, LieError> {
    let n = sc.dim;
    if t.dim != n {
        return Err(LieError::DimensionMismatch {
            expected: n,
            found: t.dim,
        });
    }
    let inv = t.inverse()?;
    // Brackets of Y_i, Y_j in X coordinates first, then map back to Y.
    let mut out = StructureConstants::zeros(n);
    let mut in_x = vec![0.0; n];
    for i in 0..n {
        for j in (i + 1)..n {
            in_x.iter_mut().for_each(|x| *x = 0.0);
            for a in 0..n {
                let la = t.get(i, a);
                if la == 0.0 {
                    continue;
                }
                for b in 0..n {
                    let lab = la * t.get(j, b);
                    if lab == 0.0 {
                        continue;
                    }
                    for (m, x) in in_x.iter_mut().enumerate() {
                        *x += lab * sc.get(a, b, m);
                    }
                }
            }
            for k in 0..n {
                let v: f64 = (0..n).map(|m| in_x[m] * inv.get(m, k)).sum();
                if v != 0.0 {
                    out.add_bracket_term(i, j, k, v)?;
                }
            }
        }
    }
    Ok(out)
}
