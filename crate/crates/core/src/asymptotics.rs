//! Closed-form solutions, implicit solution relations and power-law fits.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{d3_self_similar, CaseLabel, InitialData, ModelId, CASE_TOL};
use crate::curvature::{CurvatureError, DiagonalMetric};
use crate::flow::Trajectory;
use crate::invariants::{special_drift, SpecialInvariant};

pub const MIN_FIT_SAMPLES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("initial data {lambda:?} violate the {model} {case} requirement: {what}")]
    PreconditionViolation {
        model: ModelId,
        case: CaseLabel,
        lambda: [f64; 5],
        what: &'static str,
    },
    #[error("no closed form is available for {model} {case}")]
    NoClosedForm { model: ModelId, case: CaseLabel },
    #[error("{model} {case} is known only through a relation, not an explicit time law")]
    NoExplicitTimeLaw { model: ModelId, case: CaseLabel },
    #[error("fit window [{lo}, {hi}] is invalid (need 1 <= lo < hi)")]
    BadWindow { lo: f64, hi: f64 },
    #[error("component index {0} out of range (expected 0..5)")]
    BadComponent(usize),
    #[error("only {found} samples in the fit window, need at least {MIN_FIT_SAMPLES}")]
    TooFewSamples { found: usize },
    #[error("trajectory belongs to {found:?}, expected {expected}")]
    ModelMismatch { expected: ModelId, found: Option<ModelId> },
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

fn rel_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= CASE_TOL * a.abs().max(b.abs())
}

/// Constants of the two quadratic relations `B² = ωC² + k`, `D² = εE² + ℓ`
/// that hold along every D1 flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct D1Constants {
    pub omega: f64,
    pub eps: f64,
    pub k: f64,
    pub ell: f64,
}

impl D1Constants {
    pub fn new(lambda: &InitialData) -> Self {
        let [_, l2, l3, l4, l5] = lambda.0;
        Self {
            omega: l2 * l5 / (l3 * l4),
            eps: l3 * l4 / (l2 * l5),
            k: l2 / l4 * (l2 * l4 - l3 * l5),
            ell: l4 / l2 * (l2 * l4 - l3 * l5),
        }
    }
}

/// Bernoulli-reduction constants of D2 Case 1: `1/A = (ℓ/2) D³ + K D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct D2Bernoulli {
    pub ell: f64,
    pub k: f64,
    /// Limit value of `B`, `(λ₁λ₂λ₃)^{1/3}`.
    pub b_limit: f64,
}

impl D2Bernoulli {
    pub fn new(lambda: &InitialData) -> Self {
        let [l1, l2, l3, l4, l5] = lambda.0;
        let b = (l1 * l2 * l3).cbrt();
        let ell = b * b / (l1 * l1 * l2 * l4 * l4 * l5);
        let k = (1.0 / l1 - 0.5 * ell * l4.powi(3)) / l4;
        Self { ell, k, b_limit: b }
    }

    pub fn residual(&self, g: &[f64; 5]) -> f64 {
        let (a, d) = (g[0], g[3]);
        let lhs = 1.0 / a;
        (lhs - 0.5 * self.ell * d.powi(3) - self.k * d).abs() / lhs
    }
}

/// An exact solution family evaluated from its initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub model: ModelId,
    pub case: CaseLabel,
    pub lambda: InitialData,
}

impl ClosedFormSolution {
    /// Checks the case's algebraic requirements on `lambda`.
    pub fn new(model: ModelId, case: CaseLabel, lambda: InitialData) -> Result<Self, AsymptoticsError> {
        let [l1, l2, l3, l4, l5] = lambda.0;
        let fail = |what| AsymptoticsError::PreconditionViolation {
            model,
            case,
            lambda: lambda.0,
            what,
        };
        match (model, case) {
            (ModelId::D1, CaseLabel::Case1) => {
                if !rel_eq(l2 * l4, l3 * l5) {
                    return Err(fail("l2 l4 = l3 l5"));
                }
            }
            (ModelId::D2, CaseLabel::Case1) => {
                if !rel_eq(l2 * l2, l1 * l3) {
                    return Err(fail("l2^2 = l1 l3"));
                }
            }
            (ModelId::D3, CaseLabel::SelfSimilar) => {
                if !d3_self_similar(&lambda) {
                    return Err(fail("l2 l5 = l3 l4, l2 l4 = l3^2, 3 l1 l5 = 2 l3^2"));
                }
            }
            (ModelId::D5, CaseLabel::Exact) => {}
            _ => return Err(AsymptoticsError::NoClosedForm { model, case }),
        }
        Ok(Self { model, case, lambda })
    }

    /// The constant `c` of the D3 self-similar solution, `(2/11) λ₂λ₅/λ₁`.
    pub fn d3_shift(&self) -> f64 {
        let [l1, l2, _, _, l5] = self.lambda.0;
        2.0 / 11.0 * l2 * l5 / l1
    }

    pub fn eval(&self, t: f64) -> Result<DiagonalMetric, AsymptoticsError> {
        let [l1, l2, l3, l4, l5] = self.lambda.0;
        let g = match (self.model, self.case) {
            (ModelId::D1, CaseLabel::Case1) => {
                let c = D1Constants::new(&self.lambda);
                let so = c.omega.sqrt();
                let se = c.eps.sqrt();
                let fb = 4.0 * l1 * l3 * so / (l2 * l2 * l4) * t + 1.0;
                let fc = 4.0 * l1 * l2 / (l3 * l3 * l5 * so) * t + 1.0;
                let fd = 4.0 * l1 * l5 * se / (l2 * l4 * l4) * t + 1.0;
                let fe = 4.0 * l1 * l4 / (l3 * l5 * l5 * se) * t + 1.0;
                [
                    l1 * fb.powf(-0.25) * fc.powf(-0.25),
                    l2 * fb.powf(0.25),
                    l3 * fc.powf(0.25),
                    l4 * fd.powf(0.25),
                    l5 * fe.powf(0.25),
                ]
            }
            (ModelId::D3, CaseLabel::SelfSimilar) => {
                let s = 1.0 + t / self.d3_shift();
                let p = [-4.0, -1.0, 2.0, 5.0, 8.0].map(|n: f64| n / 11.0);
                std::array::from_fn(|i| self.lambda.0[i] * s.powf(p[i]))
            }
            (ModelId::D5, CaseLabel::Exact) => {
                let s = (1.0 + 3.0 * l1 / (l2 * l3) * t).cbrt();
                [l1 / s, l2 * s, l3 * s, l4, 4.0 * t + l5]
            }
            (model, case) => return Err(AsymptoticsError::NoExplicitTimeLaw { model, case }),
        };
        Ok(DiagonalMetric::new(g)?)
    }
}

/// The D5 solution block exactly as published, with every one of `A`, `B`,
/// `C` carrying the exponent `−1/3`. Kept for comparison only.
pub fn d5_published_block(lambda: &InitialData, t: f64) -> [f64; 5] {
    let [l1, l2, l3, l4, l5] = lambda.0;
    let s = (1.0 + 3.0 * l1 / (l2 * l3) * t).cbrt();
    [l1 / s, l2 / s, l3 / s, l4, 4.0 * t + l5]
}

/// Max relative deviation of a trajectory from a closed form.
pub fn closed_form_deviation(cf: &ClosedFormSolution, traj: &Trajectory) -> Result<f64, AsymptoticsError> {
    let mut worst: f64 = 0.0;
    for s in &traj.samples {
        let want = cf.eval(s.t)?;
        for i in 0..5 {
            worst = worst.max((s.g.get(i) / want.get(i) - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Least-squares line through `pts`: `(slope, intercept, r²)`.
pub fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Some((slope, intercept, r2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

impl PowerLawFit {
    pub fn prefactor(&self) -> f64 {
        self.log_prefactor.exp()
    }
}

/// Default fit window: the last two decades of the trajectory, never below 1.
pub fn default_window(traj: &Trajectory) -> (f64, f64) {
    let t_end = traj.last().map_or(1.0, |s| s.t);
    ((t_end / 100.0).max(1.0), t_end)
}

/// Fits `ln gᵢ = p ln t + c` over the samples in `window`.
pub fn fit_power_law(traj: &Trajectory, component: usize, window: (f64, f64)) -> Result<PowerLawFit, AsymptoticsError> {
    let (lo, hi) = window;
    if !(lo >= 1.0 && lo < hi) {
        return Err(AsymptoticsError::BadWindow { lo, hi });
    }
    if component >= 5 {
        return Err(AsymptoticsError::BadComponent(component));
    }
    let slack = 1e-12 * hi;
    let pts: Vec<(f64, f64)> = traj
        .samples
        .iter()
        .filter(|s| s.t >= lo - slack && s.t <= hi + slack)
        .map(|s| (s.t.ln(), s.g.get(component).ln()))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(AsymptoticsError::TooFewSamples { found: pts.len() });
    }
    let (exponent, log_prefactor, r_squared) =
        least_squares(&pts).ok_or(AsymptoticsError::TooFewSamples { found: pts.len() })?;
    Ok(PowerLawFit {
        exponent,
        log_prefactor,
        r_squared,
        window,
        samples: pts.len(),
    })
}

/// Antiderivative of `B²√(B² − k)` used in the D1 Case 2 relations.
fn d1_antiderivative(b: f64, k: f64) -> f64 {
    let r = (b * b - k).sqrt();
    0.125 * (r * (2.0 * b.powi(3) - k * b) - k * k * (b + r).ln())
}

/// The scaled antiderivative appearing in the `C` and `E` relations.
fn d1_scaled_antiderivative(c: f64, w: f64, k: f64) -> f64 {
    let r = (w * w * c * c + w * k).sqrt();
    (r * (2.0 * w * c.powi(3) + k * c) - k * k * (w * c + r).ln()) / (8.0 * w.powf(1.5))
}

/// Residuals of the four D1 Case 2 log-implicit relations at every sample,
/// with integration constants fixed from the first sample.
pub fn d1_log_relations_residual(lambda: &InitialData, traj: &Trajectory) -> f64 {
    let [l1, l2, l3, l4, l5] = lambda.0;
    let c = D1Constants::new(lambda);
    let relations: [(usize, f64, Box<dyn Fn(f64) -> f64>); 4] = [
        (1, l1 * l2 * l2 * l3 * c.omega.sqrt() / l4, Box::new(move |x| d1_antiderivative(x, c.k))),
        (2, l1 * l2 * l3 * l3 / l5, Box::new(move |x| d1_scaled_antiderivative(x, c.omega, c.k))),
        (3, l1 * l4 * l4 * l5 * c.eps.sqrt() / l2, Box::new(move |x| d1_antiderivative(x, c.ell))),
        (4, l1 * l4 * l5 * l5 / l3, Box::new(move |x| d1_scaled_antiderivative(x, c.eps, c.ell))),
    ];
    let mut worst: f64 = 0.0;
    for (idx, rate, f) in &relations {
        let f0 = f(lambda.0[*idx]);
        for s in &traj.samples {
            let lhs = f(s.g.get(*idx));
            let rhs = rate * s.t + f0;
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
        }
    }
    worst
}

/// `(λ₁²λ₂λ₃λ₄λ₅)^{1/4} / 2`, the predicted coefficient of `t^{−1/2}` in `A`
/// for D1 Case 2.
pub fn d1_case2_a_prefactor(lambda: &InitialData) -> f64 {
    let [l1, l2, l3, l4, l5] = lambda.0;
    0.5 * (l1 * l1 * l2 * l3 * l4 * l5).powf(0.25)
}

/// Largest relative residual of the exact relations known for `(model, case)`.
pub fn residual_check(model: ModelId, case: CaseLabel, traj: &Trajectory) -> Result<f64, AsymptoticsError> {
    if traj.model.is_some_and(|m| m != model) {
        return Err(AsymptoticsError::ModelMismatch {
            expected: model,
            found: traj.model,
        });
    }
    let first = traj.samples.first().ok_or(AsymptoticsError::TooFewSamples { found: 0 })?;
    let lambda = InitialData(*first.g.coeffs());
    match (model, case) {
        (ModelId::D1, CaseLabel::Case1 | CaseLabel::Case2) => {
            let c = D1Constants::new(&lambda);
            let mut worst: f64 = 0.0;
            for s in &traj.samples {
                let [_, b, cc, d, e] = *s.g.coeffs();
                worst = worst.max((b * b - c.omega * cc * cc - c.k).abs() / (b * b));
                worst = worst.max((d * d - c.eps * e * e - c.ell).abs() / (d * d));
            }
            if case == CaseLabel::Case2 {
                worst = worst.max(d1_log_relations_residual(&lambda, traj));
            }
            Ok(worst)
        }
        (ModelId::D2, CaseLabel::Case1) => {
            ClosedFormSolution::new(model, case, lambda)?;
            let b = D2Bernoulli::new(&lambda);
            Ok(traj.samples.iter().map(|s| b.residual(s.g.coeffs())).fold(0.0, f64::max))
        }
        (ModelId::D3, CaseLabel::SelfSimilar) | (ModelId::D5, CaseLabel::Exact) => {
            closed_form_deviation(&ClosedFormSolution::new(model, case, lambda)?, traj)
        }
        (ModelId::D11, CaseLabel::Case1) => Ok(traj
            .samples
            .iter()
            .map(|s| (s.g.get(1) - s.g.get(2)).abs() / s.g.get(1))
            .fold(0.0, f64::max)),
        (ModelId::D11, CaseLabel::Case2) => Ok(special_drift(traj, SpecialInvariant::SplittingRatio).unwrap_or(f64::INFINITY)),
        _ => Err(AsymptoticsError::NoClosedForm { model, case }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> InitialData {
        InitialData::unit()
    }

    #[test]
    fn d5_values() {
        let cf = ClosedFormSolution::new(ModelId::D5, CaseLabel::Exact, unit()).unwrap();
        assert_eq!(cf.eval(0.0).unwrap().coeffs(), &[1.0; 5]);
        let g = cf.eval(1.0).unwrap();
        let c = 4f64.cbrt();
        let want = [1.0 / c, c, c, 1.0, 5.0];
        for i in 0..5 {
            assert!((g.get(i) - want[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn d1_case1_unit() {
        let cf = ClosedFormSolution::new(ModelId::D1, CaseLabel::Case1, unit()).unwrap();
        let g = cf.eval(2.0).unwrap();
        assert!((g.get(0) - 9f64.powf(-0.5)).abs() < 1e-15);
        for i in 1..5 {
            assert!((g.get(i) - 9f64.powf(0.25)).abs() < 1e-15);
        }
        let bad = InitialData::new([1.0, 1.0, 2.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            ClosedFormSolution::new(ModelId::D1, CaseLabel::Case1, bad),
            Err(AsymptoticsError::PreconditionViolation { .. })
        ));
    }

    #[test]
    fn d3_shift_at_canonical_point() {
        let lam = InitialData::new([2.0 / 3.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let cf = ClosedFormSolution::new(ModelId::D3, CaseLabel::SelfSimilar, lam).unwrap();
        assert!((cf.d3_shift() - 3.0 / 11.0).abs() < 1e-15);
        assert!(ClosedFormSolution::new(ModelId::D3, CaseLabel::SelfSimilar, unit()).is_err());
    }

    #[test]
    fn d2_case1_has_no_time_law() {
        let lam = InitialData::new([1.0, 2.0, 4.0, 1.0, 1.0]).unwrap();
        let cf = ClosedFormSolution::new(ModelId::D2, CaseLabel::Case1, lam).unwrap();
        assert!(matches!(cf.eval(1.0), Err(AsymptoticsError::NoExplicitTimeLaw { .. })));
        let b = D2Bernoulli::new(&lam);
        assert!(b.residual(&lam.0) < 1e-15);
        assert!((b.b_limit - 2.0).abs() < 1e-15);
    }

    #[test]
    fn synthetic_power_law() {
        let pts: Vec<(f64, DiagonalMetric)> = (0..=48)
            .map(|j| {
                let t = 10f64.powf(j as f64 / 8.0);
                (t, DiagonalMetric::new([t.powf(0.25); 5]).unwrap())
            })
            .collect();
        let traj = Trajectory::from_metrics(None, pts);
        let fit = fit_power_law(&traj, 0, (1e2, 1e6)).unwrap();
        assert!((fit.exponent - 0.25).abs() < 1e-6);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert!(matches!(fit_power_law(&traj, 0, (0.5, 10.0)), Err(AsymptoticsError::BadWindow { .. })));
        assert!(matches!(fit_power_law(&traj, 0, (1.0, 2.0)), Err(AsymptoticsError::TooFewSamples { .. })));
        assert!(matches!(fit_power_law(&traj, 7, (1.0, 1e6)), Err(AsymptoticsError::BadComponent(7))));
        assert_eq!(default_window(&traj), (1e4, 1e6));
    }

    #[test]
    fn antiderivatives_differentiate_correctly() {
        let (k, w) = (-0.7, 1.9);
        let h = 1e-5;
        for x in [1.0, 2.0, 3.0] {
            let d = (d1_antiderivative(x + h, k) - d1_antiderivative(x - h, k)) / (2.0 * h);
            assert!((d - x * x * (x * x - k).sqrt()).abs() < 1e-7);
            let d = (d1_scaled_antiderivative(x + h, w, k) - d1_scaled_antiderivative(x - h, w, k)) / (2.0 * h);
            assert!((d - x * x * (w * x * x + k).sqrt()).abs() < 1e-7);
        }
    }

    #[test]
    fn constant_trajectory_satisfies_d1_relations() {
        let g = DiagonalMetric::new([1.0, 1.5, 0.5, 2.0, 1.2]).unwrap();
        let traj = Trajectory::from_metrics(None, vec![(0.0, g), (1.0, g), (2.0, g)]);
        assert!(residual_check(ModelId::D1, CaseLabel::Case1, &traj).unwrap() < 1e-15);
    }
}
