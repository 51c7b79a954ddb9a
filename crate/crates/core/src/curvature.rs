//! Ricci curvature of diagonal left-invariant metrics and the resulting
//! Ricci-flow vector field.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lie::{bracket_apply, LieError, StructureConstants};

pub const N: usize = 5;
pub const DEFAULT_OFFDIAG_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("metric coefficient {index} is not positive ({value})")]
    NonpositiveMetric { index: usize, value: f64 },
    #[error("structure constants have dimension {0}, metrics here have dimension 5")]
    Dimension(usize),
    #[error("off-diagonal Ricci component R[{i}][{j}] = {value:e} exceeds {tol:e}")]
    DiagonalityViolation { i: usize, j: usize, value: f64, tol: f64 },
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// `g = A θ₁² + B θ₂² + C θ₃² + D θ₄² + E θ₅²` with every coefficient positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagonalMetric([f64; N]);

impl DiagonalMetric {
    pub fn new(coeffs: [f64; N]) -> Result<Self, CurvatureError> {
        for (index, &value) in coeffs.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(CurvatureError::NonpositiveMetric { index, value });
            }
        }
        Ok(Self(coeffs))
    }

    pub fn unit() -> Self {
        Self([1.0; N])
    }

    pub fn coeffs(&self) -> &[f64; N] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }
}

/// Symmetric matrix of `Ric(Ŷᵢ, Ŷⱼ)` in the orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicciForm {
    pub entries: [[f64; N]; N],
}

impl RicciForm {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn diagonal(&self) -> [f64; N] {
        std::array::from_fn(|i| self.entries[i][i])
    }

    /// Largest off-diagonal magnitude and where it sits.
    pub fn max_offdiag(&self) -> (f64, usize, usize) {
        let mut best = (0.0, 0, 1);
        for i in 0..N {
            for j in (i + 1)..N {
                let v = self.entries[i][j].abs();
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        best
    }

    /// `Σ wᵢ wⱼ Rᵢⱼ`.
    pub fn quadratic(&self, w: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                s += w[i] * w[j] * self.entries[i][j];
            }
        }
        s
    }
}

/// `d/dt (A, B, C, D, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowRhs(pub [f64; N]);

fn check_dim(sc: &StructureConstants) -> Result<(), CurvatureError> {
    if sc.dim() == N {
        Ok(())
    } else {
        Err(CurvatureError::Dimension(sc.dim()))
    }
}

/// Structure constants of the orthonormal frame `Ŷᵢ = Yᵢ/√gᵢ`.
pub fn unit_frame_brackets(sc: &StructureConstants, g: &DiagonalMetric) -> Result<StructureConstants, CurvatureError> {
    check_dim(sc)?;
    let g = DiagonalMetric::new(g.0)?;
    let s: [f64; N] = g.0.map(f64::sqrt);
    Ok(sc.map(|i, j, k, c| if c == 0.0 { 0.0 } else { c * s[k] / (s[i] * s[j]) }))
}

/// `Ric(W, W)` for `W = Σ wᵢ Ŷᵢ`, evaluated term by term:
/// `−½Σ|[W,Ŷᵢ]|² − ½Σ⟨[W,[W,Ŷᵢ]],Ŷᵢ⟩ + ½Σ_{i<j}⟨[Ŷᵢ,Ŷⱼ],W⟩²`.
pub fn ricci_quadratic(sc: &StructureConstants, g: &DiagonalMetric, w: &[f64]) -> Result<f64, CurvatureError> {
    let hat = unit_frame_brackets(sc, g)?;
    if w.len() != N {
        return Err(LieError::DimensionMismatch { expected: N, found: w.len() }.into());
    }
    let mut e = [0.0; N];
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    for i in 0..N {
        e.fill(0.0);
        e[i] = 1.0;
        let wy = bracket_apply(&hat, w, &e)?;
        t1 += wy.iter().map(|x| x * x).sum::<f64>();
        let wwy = bracket_apply(&hat, w, &wy)?;
        t2 += wwy[i];
    }
    let mut t3 = 0.0;
    for i in 0..N {
        for j in (i + 1)..N {
            let p: f64 = (0..N).map(|k| hat.get(i, j, k) * w[k]).sum();
            t3 += p * p;
        }
    }
    Ok(-0.5 * t1 - 0.5 * t2 + 0.5 * t3)
}

/// Full Ricci tensor in the orthonormal frame.
///
/// Entries come from the symmetric bilinear form whose diagonal is
/// [`ricci_quadratic`], so `R[i][j]` equals the polarization
/// `½(Q(Ŷᵢ+Ŷⱼ) − Q(Ŷᵢ) − Q(Ŷⱼ))`.
pub fn ricci_tensor(sc: &StructureConstants, g: &DiagonalMetric) -> Result<RicciForm, CurvatureError> {
    let h = unit_frame_brackets(sc, g)?;
    let c = |i, j, k| h.get(i, j, k);
    let mut r = [[0.0; N]; N];
    for u in 0..N {
        for v in u..N {
            let mut m1 = 0.0;
            let mut kill = 0.0;
            for i in 0..N {
                for k in 0..N {
                    m1 += c(u, i, k) * c(v, i, k);
                    kill += c(u, k, i) * c(v, i, k);
                }
            }
            let mut n3 = 0.0;
            for i in 0..N {
                for j in (i + 1)..N {
                    n3 += c(i, j, u) * c(i, j, v);
                }
            }
            let val = -0.5 * m1 - 0.5 * kill + 0.5 * n3;
            r[u][v] = val;
            r[v][u] = val;
        }
    }
    Ok(RicciForm { entries: r })
}

/// Ricci-flow right-hand side together with the largest off-diagonal Ricci
/// magnitude, without enforcing diagonality.
pub fn flow_rhs_unchecked(sc: &StructureConstants, g: &DiagonalMetric) -> Result<(FlowRhs, f64), CurvatureError> {
    let ric = ricci_tensor(sc, g)?;
    let rhs = std::array::from_fn(|i| -2.0 * g.0[i] * ric.entries[i][i]);
    Ok((FlowRhs(rhs), ric.max_offdiag().0))
}

/// `dgᵢ/dt = −2 gᵢ R[i][i]`, refusing metrics whose Ricci tensor leaves the
/// diagonal ansatz.
pub fn flow_rhs(sc: &StructureConstants, g: &DiagonalMetric, offdiag_tol: f64) -> Result<FlowRhs, CurvatureError> {
    let ric = ricci_tensor(sc, g)?;
    let (value, i, j) = ric.max_offdiag();
    if value > offdiag_tol {
        return Err(CurvatureError::DiagonalityViolation {
            i,
            j,
            value: ric.entries[i][j],
            tol: offdiag_tol,
        });
    }
    Ok(FlowRhs(std::array::from_fn(|i| -2.0 * g.0[i] * ric.entries[i][i])))
}
