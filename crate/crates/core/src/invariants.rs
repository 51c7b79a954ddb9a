//! Conserved monomials of the diagonal flow, drift monitoring along
//! trajectories, and the per-model ratio diagnostics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{build_model, model_invariants, CatalogError, ModelId, ModelParams};
use crate::curvature::{flow_rhs, CurvatureError, DiagonalMetric, DEFAULT_OFFDIAG_TOL};
use crate::flow::Trajectory;
use crate::lie::StructureConstants;

pub const DETECT_POINTS: usize = 25;
pub const DETECT_TOL: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 0x5eed_f10e;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("the zero exponent vector is not an invariant")]
    ZeroVector,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exponent vector `e` over `(A, B, C, D, E)` standing for `Π gᵢ^{eᵢ}`.
///
/// Stored primitive with its first nonzero entry positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantMonomial {
    e: [i32; 5],
}

impl InvariantMonomial {
    /// Canonicalizes `e` by dividing out the gcd and fixing the sign.
    pub fn new(e: [i32; 5]) -> Result<Self, InvariantError> {
        let g = e.iter().fold(0i64, |acc, &x| gcd(acc, x as i64));
        if g == 0 {
            return Err(InvariantError::ZeroVector);
        }
        let lead = e.iter().find(|&&x| x != 0).copied().unwrap_or(1);
        let s = if lead < 0 { -g } else { g };
        Ok(Self {
            e: e.map(|x| (x as i64 / s) as i32),
        })
    }

    pub fn exponents(&self) -> [i32; 5] {
        self.e
    }

    pub fn ln_eval(&self, g: &[f64; 5]) -> f64 {
        self.e.iter().zip(g).map(|(&e, x)| e as f64 * x.ln()).sum()
    }

    pub fn eval(&self, g: &[f64; 5]) -> f64 {
        self.ln_eval(g).exp()
    }

    pub fn dot(&self, p: &[f64; 5]) -> f64 {
        self.e.iter().zip(p).map(|(&e, x)| e as f64 * x).sum()
    }
}

impl std::fmt::Display for InvariantMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let letters = ["A", "B", "C", "D", "E"];
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (l, &e) in letters.iter().zip(&self.e) {
            let part = |k: i32| if k == 1 { l.to_string() } else { format!("{l}^{k}") };
            match e.cmp(&0) {
                std::cmp::Ordering::Greater => num.push(part(e)),
                std::cmp::Ordering::Less => den.push(part(-e)),
                std::cmp::Ordering::Equal => {}
            }
        }
        let num = if num.is_empty() { "1".to_string() } else { num.join(" ") };
        match den.len() {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num} / {}", den[0]),
            _ => write!(f, "{num} / ({})", den.join(" ")),
        }
    }
}

/// Conserved quantities of D11 that are not monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialInvariant {
    /// `A²E²(B² − C²)`
    RotationEnergy,
    /// `(B + C)D² / ((B − C)E²)`, only defined while `B ≠ C`.
    SplittingRatio,
}

impl SpecialInvariant {
    pub fn label(self) -> &'static str {
        match self {
            SpecialInvariant::RotationEnergy => "A^2 E^2 (B^2 - C^2)",
            SpecialInvariant::SplittingRatio => "(B + C) D^2 / ((B - C) E^2)",
        }
    }

    pub fn eval(self, g: &[f64; 5]) -> f64 {
        let [a, b, c, d, e] = *g;
        match self {
            SpecialInvariant::RotationEnergy => a * a * e * e * (b - c) * (b + c),
            SpecialInvariant::SplittingRatio => (b + c) * d * d / ((b - c) * e * e),
        }
    }
}

/// Integer row reduction to Hermite normal form. Returns the nonzero rows.
pub fn lattice_basis(vectors: &[[i64; 5]]) -> Vec<[i64; 5]> {
    let mut rows = vectors.to_vec();
    let mut r = 0;
    for col in 0..5 {
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| rows[i][col] != 0)
                .min_by_key(|&i| rows[i][col].abs());
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut clean = true;
            for i in (r + 1)..rows.len() {
                let q = rows[i][col] / rows[r][col];
                if q != 0 {
                    let pr = rows[r];
                    for (x, y) in rows[i].iter_mut().zip(pr) {
                        *x -= q * y;
                    }
                }
                clean &= rows[i][col] == 0;
            }
            if clean {
                break;
            }
        }
        if r < rows.len() && rows[r][col] != 0 {
            if rows[r][col] < 0 {
                rows[r] = rows[r].map(|x| -x);
            }
            let pr = rows[r];
            for i in 0..r {
                let q = rows[i][col].div_euclid(pr[col]);
                for (x, y) in rows[i].iter_mut().zip(pr) {
                    *x -= q * y;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// Whether `v` lies in the integer span of an HNF basis.
pub fn in_lattice(basis: &[[i64; 5]], v: [i64; 5]) -> bool {
    let mut v = v;
    for row in basis {
        let Some(col) = row.iter().position(|&x| x != 0) else { continue };
        if v[col] % row[col] != 0 {
            return false;
        }
        let q = v[col] / row[col];
        for (x, y) in v.iter_mut().zip(row) {
            *x -= q * y;
        }
    }
    v.iter().all(|&x| x == 0)
}

fn log_uniform_metric(rng: &mut ChaCha8Rng) -> [f64; 5] {
    std::array::from_fn(|_| 10f64.powf(rng.gen_range(-1.0..1.0)))
}

/// Evaluates `rhsᵢ/gᵢ` at `points` seeded random metrics.
fn log_rates(sc: &StructureConstants, points: usize, seed: u64) -> Result<Vec<[f64; 5]>, InvariantError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..points)
        .map(|_| {
            let g = DiagonalMetric::new(log_uniform_metric(&mut rng))?;
            let rhs = flow_rhs(sc, &g, DEFAULT_OFFDIAG_TOL)?.0;
            Ok(std::array::from_fn(|i| rhs[i] / g.get(i)))
        })
        .collect()
}

fn passes(e: &[i64; 5], rates: &[[f64; 5]]) -> bool {
    rates.iter().all(|v| {
        let s: f64 = e.iter().zip(v).map(|(&x, y)| x as f64 * y).sum();
        let scale: f64 = e.iter().zip(v).map(|(&x, y)| (x as f64 * y).abs()).sum();
        s.abs() <= DETECT_TOL * scale.max(f64::MIN_POSITIVE)
    })
}

/// Checks that `Σ eᵢ ġᵢ/gᵢ` vanishes at fresh random metrics.
pub fn verify_monomial(sc: &StructureConstants, inv: &InvariantMonomial, seed: u64) -> Result<bool, InvariantError> {
    let rates = log_rates(sc, DETECT_POINTS, seed)?;
    Ok(passes(&inv.exponents().map(i64::from), &rates))
}

/// Detects conserved monomials of the flow generated by `sc` with exponents in
/// `[-max_exp, max_exp]`, returned as an HNF lattice basis.
pub fn detect_for_brackets(sc: &StructureConstants, max_exp: u32, seed: u64) -> Result<Vec<InvariantMonomial>, InvariantError> {
    let rates = log_rates(sc, DETECT_POINTS, seed)?;
    let m = max_exp as i64;
    let side = (2 * m + 1) as usize;
    let mut found = Vec::new();
    for idx in 0..side.pow(5) {
        let mut rest = idx;
        let e: [i64; 5] = std::array::from_fn(|_| {
            let d = (rest % side) as i64 - m;
            rest /= side;
            d
        });
        if e.iter().all(|&x| x == 0) || e.iter().fold(0, |a, &x| gcd(a, x)) != 1 {
            continue;
        }
        if e.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            continue;
        }
        if passes(&e, &rates) {
            found.push(e);
        }
    }
    lattice_basis(&found)
        .into_iter()
        .map(|row| InvariantMonomial::new(row.map(|x| x as i32)))
        .collect()
}

/// Monomial invariants of a catalog model: the detected lattice basis followed
/// by any of the catalog's named invariants that lie in that lattice.
pub fn detect_monomials(model: ModelId, params: &ModelParams, max_exp: u32) -> Result<Vec<InvariantMonomial>, InvariantError> {
    detect_monomials_seeded(model, params, max_exp, DEFAULT_SEED)
}

pub fn detect_monomials_seeded(
    model: ModelId,
    params: &ModelParams,
    max_exp: u32,
    seed: u64,
) -> Result<Vec<InvariantMonomial>, InvariantError> {
    let sc = build_model(model, params)?;
    let mut out = detect_for_brackets(&sc, max_exp, seed)?;
    let basis: Vec<[i64; 5]> = out.iter().map(|m| m.exponents().map(i64::from)).collect();
    for named in model_invariants(model).monomials {
        let in_box = named.exponents().iter().all(|x| x.unsigned_abs() <= max_exp);
        if in_box && !out.contains(&named) && in_lattice(&basis, named.exponents().map(i64::from)) {
            out.push(named);
        }
    }
    Ok(out)
}

/// Max relative deviation of `Π gᵢ^{eᵢ}` from its value at the first sample.
pub fn drift_report(traj: &Trajectory, inv: &InvariantMonomial) -> f64 {
    let Some(first) = traj.samples.first() else { return 0.0 };
    let l0 = inv.ln_eval(first.g.coeffs());
    traj.samples
        .iter()
        .map(|s| (inv.ln_eval(s.g.coeffs()) - l0).exp_m1().abs())
        .fold(0.0, f64::max)
}

/// Drift of a special invariant: relative to its initial value, or the max
/// absolute value when it starts at zero. `None` where the quantity is
/// undefined along the trajectory.
pub fn special_drift(traj: &Trajectory, inv: SpecialInvariant) -> Option<f64> {
    let first = traj.samples.first()?;
    let v0 = inv.eval(first.g.coeffs());
    if !v0.is_finite() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for s in &traj.samples {
        let v = inv.eval(s.g.coeffs());
        if !v.is_finite() {
            return None;
        }
        let d = if v0 == 0.0 { v.abs() } else { ((v - v0) / v0).abs() };
        worst = worst.max(d);
    }
    Some(worst)
}

/// A derived scalar series with the value it is expected to approach.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioDiagnostic {
    pub name: String,
    pub series: Vec<(f64, f64)>,
    pub target: f64,
    /// Slope of `ln value` against `ln t` over the last decade, when available.
    pub tail_log_slope: Option<f64>,
}

impl RatioDiagnostic {
    fn new(name: &str, traj: &Trajectory, target: Option<f64>, f: impl Fn(&[f64; 5]) -> f64) -> Self {
        let series: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.t, f(s.g.coeffs()))).collect();
        let target = target.unwrap_or_else(|| series.last().map_or(f64::NAN, |p| p.1));
        let tail_log_slope = tail_slope(&series);
        Self {
            name: name.to_string(),
            series,
            target,
            tail_log_slope,
        }
    }

    pub fn final_value(&self) -> f64 {
        self.series.last().map_or(f64::NAN, |p| p.1)
    }

    pub fn final_deviation(&self) -> f64 {
        (self.final_value() - self.target).abs()
    }

    /// Max of `|value − target|` over samples with `t` in `[lo, hi]`.
    pub fn max_deviation_in(&self, lo: f64, hi: f64) -> Option<f64> {
        self.series
            .iter()
            .filter(|(t, _)| *t >= lo && *t <= hi)
            .map(|(_, v)| (v - self.target).abs())
            .reduce(f64::max)
    }
}

fn tail_slope(series: &[(f64, f64)]) -> Option<f64> {
    let t_end = series.last()?.0;
    if t_end < 10.0 {
        return None;
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, v)| *t >= t_end / 10.0 && *v > 0.0)
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    crate::asymptotics::least_squares(&pts).map(|f| f.0)
}

/// The convergence ratios tracked for each model.
pub fn ratio_diagnostics(model: ModelId, traj: &Trajectory) -> Vec<RatioDiagnostic> {
    let x = |g: &[f64; 5]| g[0] / (g[1] * g[4]);
    let y = |g: &[f64; 5]| g[0] / (g[2] * g[3]);
    let z = |g: &[f64; 5]| g[1] / (g[2] * g[4]);
    let w = |g: &[f64; 5]| g[2] / (g[3] * g[4]);
    match model {
        ModelId::D2 => vec![RatioDiagnostic::new("AC/B^2", traj, Some(1.0), |g| {
            g[0] * g[2] / (g[1] * g[1])
        })],
        ModelId::D3 => vec![
            RatioDiagnostic::new("x/y", traj, Some(1.0), |g| x(g) / y(g)),
            RatioDiagnostic::new("z/w", traj, Some(1.0), |g| z(g) / w(g)),
            RatioDiagnostic::new("x/z", traj, Some(2.0 / 3.0), |g| x(g) / z(g)),
            RatioDiagnostic::new("y/w", traj, Some(2.0 / 3.0), |g| y(g) / w(g)),
        ],
        ModelId::D11 => vec![
            RatioDiagnostic::new("B/C", traj, Some(1.0), |g| g[1] / g[2]),
            RatioDiagnostic::new("D", traj, None, |g| g[3]),
        ],
        ModelId::D1 | ModelId::D5 => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::constrained_params;
    use crate::flow::{Sample, Trajectory};

    fn exps(v: &[InvariantMonomial]) -> Vec<[i32; 5]> {
        v.iter().map(|m| m.exponents()).collect()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(InvariantMonomial::new([-2, 0, 4, 0, 0]).unwrap().exponents(), [1, 0, -2, 0, 0]);
        assert_eq!(InvariantMonomial::new([0; 5]), Err(InvariantError::ZeroVector));
        assert_eq!(InvariantMonomial::new([2, 1, 0, 2, 1]).unwrap().to_string(), "A^2 B D^2 E");
    }

    #[test]
    fn hnf_of_d2_pair() {
        let b = lattice_basis(&[[2, 1, 0, 2, 1], [1, 1, 1, 0, 0]]);
        assert_eq!(b, vec![[1, 0, -1, 2, 1], [0, 1, 2, -2, -1]]);
        assert!(in_lattice(&b, [2, 1, 0, 2, 1]));
        assert!(in_lattice(&b, [3, 2, 1, 2, 1]));
        assert!(!in_lattice(&b, [1, 0, 0, 0, 0]));
    }

    #[test]
    fn detect_d3() {
        let got = detect_monomials(ModelId::D3, &constrained_params(ModelId::D3), 5).unwrap();
        assert_eq!(exps(&got), vec![[5, 4, 3, 2, 1]]);
    }

    #[test]
    fn detect_d2() {
        let got = detect_monomials(ModelId::D2, &constrained_params(ModelId::D2), 2).unwrap();
        let e = exps(&got);
        assert!(e.contains(&[1, 1, 1, 0, 0]));
        assert!(e.contains(&[2, 1, 0, 2, 1]));
    }

    #[test]
    fn detect_abelian() {
        let got = detect_for_brackets(&StructureConstants::zeros(5), 1, 7).unwrap();
        let mut want = Vec::new();
        for i in 0..5 {
            let mut e = [0; 5];
            e[i] = 1;
            want.push(e);
        }
        assert_eq!(exps(&got), want);
    }

    fn traj_from(points: &[[f64; 5]]) -> Trajectory {
        Trajectory::from_metrics(
            None,
            points
                .iter()
                .enumerate()
                .map(|(i, g)| (i as f64, DiagonalMetric::new(*g).unwrap()))
                .collect(),
        )
    }

    #[test]
    fn drift_of_constant_and_corrupted() {
        let inv = InvariantMonomial::new([1, 1, 1, 0, 0]).unwrap();
        let t = traj_from(&[[1.0, 2.0, 3.0, 4.0, 5.0]; 4]);
        assert_eq!(drift_report(&t, &inv), 0.0);
        let t = traj_from(&[[1.0, 2.0, 3.0, 4.0, 5.0], [2.0, 4.0, 6.0, 8.0, 10.0]]);
        assert!(drift_report(&t, &inv) >= 1.0);
        let _ = Sample::at(0.0, DiagonalMetric::unit());
    }

    #[test]
    fn special_values() {
        let g = [1.0, 2.0, 1.0, 1.0, 1.0];
        assert_eq!(SpecialInvariant::RotationEnergy.eval(&g), 3.0);
        assert_eq!(SpecialInvariant::SplittingRatio.eval(&g), 3.0);
        let t = traj_from(&[[1.0; 5]]);
        assert_eq!(special_drift(&t, SpecialInvariant::RotationEnergy), Some(0.0));
        assert_eq!(special_drift(&t, SpecialInvariant::SplittingRatio), None);
    }

    #[test]
    fn ratios_present_per_model() {
        let t = traj_from(&[[1.0; 5]]);
        assert!(ratio_diagnostics(ModelId::D1, &t).is_empty());
        assert_eq!(ratio_diagnostics(ModelId::D3, &t).len(), 4);
        assert_eq!(ratio_diagnostics(ModelId::D2, &t)[0].final_value(), 1.0);
    }
}
