//! Adaptive integration of the diagonal Ricci flow.
//!
//! The stepper is the Dormand–Prince 5(4) pair with proportional-integral step
//! control. Steps are shortened to land exactly on the output grid: linear on
//! `[0, 1]`, then geometric with a fixed number of samples per decade.

use log::{debug, info};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{build_model, constrained_params, model_invariants, printed_system, CatalogError, InitialData, ModelId, ModelParams};
use crate::curvature::{flow_rhs_unchecked, CurvatureError, DiagonalMetric, DEFAULT_OFFDIAG_TOL};
use crate::lie::{jacobi_residual, StructureConstants, HOLDS_TOL};

pub const POSITIVITY_FLOOR: f64 = 1e-13;
pub const LINEAR_SAMPLES: usize = 64;
pub const DEFAULT_PER_DECADE: usize = 64;
const MAX_STEPS: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid flow problem: {0}")]
    InvalidProblem(String),
    #[error("structure constants fail the Jacobi identity (residual {0:e})")]
    NotALieAlgebra(f64),
    #[error("resampling needs at least two samples with t > 0")]
    TooFewSamples,
    #[error("samples per decade must be positive")]
    ZeroPerDecade,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

/// Which vector field drives the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RhsSource {
    /// `−2 gᵢ Ric(Ŷᵢ, Ŷᵢ)` computed from the structure constants.
    #[default]
    Curvature,
    /// The published ODE system at constrained parameters.
    Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowProblem {
    pub model: ModelId,
    pub params: ModelParams,
    pub initial: InitialData,
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub offdiag_tol: f64,
    pub per_decade: usize,
    pub rhs: RhsSource,
}

impl FlowProblem {
    /// Constrained parameters, `rel_tol = 1e-11`, `abs_tol = 1e-14`.
    pub fn new(model: ModelId, initial: InitialData, t_end: f64) -> Self {
        Self {
            model,
            params: constrained_params(model),
            initial,
            t_end,
            rel_tol: 1e-11,
            abs_tol: 1e-14,
            offdiag_tol: DEFAULT_OFFDIAG_TOL,
            per_decade: DEFAULT_PER_DECADE,
            rhs: RhsSource::Curvature,
        }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_params(mut self, params: ModelParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_per_decade(mut self, per_decade: usize) -> Self {
        self.per_decade = per_decade;
        self
    }

    pub fn with_rhs(mut self, rhs: RhsSource) -> Self {
        self.rhs = rhs;
        self
    }

    fn options(&self) -> Result<FlowOptions, FlowError> {
        let opts = FlowOptions {
            t_end: self.t_end,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            offdiag_tol: self.offdiag_tol,
            per_decade: self.per_decade,
        };
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub offdiag_tol: f64,
    pub per_decade: usize,
}

impl FlowOptions {
    fn validate(&self) -> Result<(), FlowError> {
        let bad = |m: &str| Err(FlowError::InvalidProblem(m.to_string()));
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be positive and finite");
        }
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(FlowError::InvalidProblem(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if !(self.offdiag_tol > 0.0) {
            return bad("offdiag_tol must be positive");
        }
        if self.per_decade == 0 {
            return Err(FlowError::ZeroPerDecade);
        }
        Ok(())
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Termination {
    ReachedEnd,
    PositivityBreach { t: f64, index: usize, value: f64 },
    DiagonalityBreach { t: f64, value: f64 },
    StepFailure { t: f64, h: f64 },
}

impl Termination {
    pub fn reached_end(&self) -> bool {
        matches!(self, Termination::ReachedEnd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub g: DiagonalMetric,
    /// Largest relative drift of the model's monomial invariants so far.
    pub max_drift: f64,
    pub max_offdiag: f64,
}

impl Sample {
    pub fn at(t: f64, g: DiagonalMetric) -> Self {
        Self {
            t,
            g,
            max_drift: 0.0,
            max_offdiag: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
    /// Sum over accepted steps of the max-norm local error estimate.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub model: Option<ModelId>,
    pub samples: Vec<Sample>,
    pub termination: Termination,
    pub stats: StepStats,
}

impl Trajectory {
    /// Builds a trajectory from given points; drift is filled in from the
    /// model's invariants when a model is named.
    pub fn from_metrics(model: Option<ModelId>, points: Vec<(f64, DiagonalMetric)>) -> Self {
        let mut tracker = DriftTracker::new(model, points.first().map(|p| p.1));
        let samples = points
            .into_iter()
            .map(|(t, g)| Sample {
                t,
                g,
                max_drift: tracker.update(&g),
                max_offdiag: 0.0,
            })
            .collect();
        Self {
            model,
            samples,
            termination: Termination::ReachedEnd,
            stats: StepStats::default(),
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn component(&self, i: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.g.get(i)).collect()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn final_metric(&self) -> Option<[f64; 5]> {
        self.samples.last().map(|s| *s.g.coeffs())
    }

    pub fn max_offdiag(&self) -> f64 {
        self.samples.iter().map(|s| s.max_offdiag).fold(0.0, f64::max)
    }
}

struct DriftTracker {
    monomials: Vec<crate::invariants::InvariantMonomial>,
    reference: Vec<f64>,
    worst: f64,
}

impl DriftTracker {
    fn new(model: Option<ModelId>, g0: Option<DiagonalMetric>) -> Self {
        let monomials = match (model, g0) {
            (Some(m), Some(_)) => model_invariants(m).monomials,
            _ => Vec::new(),
        };
        let reference = match g0 {
            Some(g) => monomials.iter().map(|m| m.ln_eval(g.coeffs())).collect(),
            None => Vec::new(),
        };
        Self {
            monomials,
            reference,
            worst: 0.0,
        }
    }

    fn update(&mut self, g: &DiagonalMetric) -> f64 {
        for (m, l0) in self.monomials.iter().zip(&self.reference) {
            self.worst = self.worst.max((m.ln_eval(g.coeffs()) - l0).exp_m1().abs());
        }
        self.worst
    }
}

/// Output grid: `k/64` on `[0, 1]`, then `10^{j/per_decade}`, then `t_end`.
pub fn output_times(t_end: f64, per_decade: usize) -> Vec<f64> {
    let mut out: Vec<f64> = (1..=LINEAR_SAMPLES)
        .map(|k| k as f64 / LINEAR_SAMPLES as f64)
        .take_while(|&t| t < t_end)
        .collect();
    let mut j = 1;
    loop {
        let t = 10f64.powf(j as f64 / per_decade as f64);
        if t >= t_end * (1.0 - 1e-12) {
            break;
        }
        if t > 1.0 {
            out.push(t);
        }
        j += 1;
    }
    out.push(t_end);
    out
}

enum RhsFailure {
    Nonpositive,
    Diagonality(f64),
}

/// Integrates a catalog model.
pub fn integrate(p: &FlowProblem) -> Result<Trajectory, FlowError> {
    let opts = p.options()?;
    info!(
        "integrating {} from {:?} to t = {} (rtol {:e}, rhs {:?})",
        p.model, p.initial.0, p.t_end, p.rel_tol, p.rhs
    );
    match p.rhs {
        RhsSource::Curvature => {
            let sc = build_model(p.model, &p.params)?;
            integrate_brackets(&sc, Some(p.model), &p.initial, &opts)
        }
        RhsSource::Printed => {
            if p.params != constrained_params(p.model) && p.params != crate::catalog::constrained_params_with_sign(p.model, crate::catalog::Sign::Minus) {
                return Err(FlowError::InvalidProblem(
                    "the published systems are only defined at constrained parameters".into(),
                ));
            }
            let model = p.model;
            let f = move |y: &[f64; 5]| -> Result<([f64; 5], f64), RhsFailure> {
                if y.iter().any(|v| !(*v > 0.0)) {
                    return Err(RhsFailure::Nonpositive);
                }
                Ok((printed_system(model, y), 0.0))
            };
            Ok(run(f, Some(model), &p.initial, &opts)?)
        }
    }
}

/// Integrates the flow generated by arbitrary structure constants.
pub fn integrate_brackets(
    sc: &StructureConstants,
    model: Option<ModelId>,
    initial: &InitialData,
    opts: &FlowOptions,
) -> Result<Trajectory, FlowError> {
    opts.validate()?;
    let jac = jacobi_residual(sc);
    if jac >= HOLDS_TOL {
        return Err(FlowError::NotALieAlgebra(jac));
    }
    let g0 = DiagonalMetric::new(initial.0)?;
    let (_, off0) = flow_rhs_unchecked(sc, &g0)?;
    if off0 > opts.offdiag_tol {
        let ric = crate::curvature::ricci_tensor(sc, &g0)?;
        let (value, i, j) = ric.max_offdiag();
        return Err(CurvatureError::DiagonalityViolation {
            i,
            j,
            value,
            tol: opts.offdiag_tol,
        }
        .into());
    }
    let tol = opts.offdiag_tol;
    let f = |y: &[f64; 5]| -> Result<([f64; 5], f64), RhsFailure> {
        let g = DiagonalMetric::new(*y).map_err(|_| RhsFailure::Nonpositive)?;
        let (rhs, off) = flow_rhs_unchecked(sc, &g).map_err(|_| RhsFailure::Nonpositive)?;
        if off > tol {
            return Err(RhsFailure::Diagonality(off));
        }
        Ok((rhs.0, off))
    };
    run(f, model, initial, opts)
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const BETA: f64 = 0.04;
const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

fn combo(y: &[f64; 5], h: f64, terms: &[(f64, &[f64; 5])]) -> [f64; 5] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn err_norm(e: &[f64; 5], y0: &[f64; 5], y1: &[f64; 5], rtol: f64, atol: f64) -> f64 {
    let s: f64 = (0..5)
        .map(|i| {
            let sk = atol + rtol * y0[i].abs().max(y1[i].abs());
            (e[i] / sk).powi(2)
        })
        .sum();
    (s / 5.0).sqrt()
}

fn h_max(t: f64) -> f64 {
    0.1 * (t + 1.0)
}

struct StepResult {
    y: [f64; 5],
    k: [f64; 5],
    off: f64,
    err: f64,
    emax: f64,
}

fn dopri_step<F>(f: &mut F, y: &[f64; 5], k1: &[f64; 5], h: f64, rtol: f64, atol: f64) -> Result<StepResult, RhsFailure>
where
    F: FnMut(&[f64; 5]) -> Result<([f64; 5], f64), RhsFailure>,
{
    let (k2, _) = f(&combo(y, h, &[(A21, k1)]))?;
    let (k3, _) = f(&combo(y, h, &[(A31, k1), (A32, &k2)]))?;
    let (k4, _) = f(&combo(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let (k5, _) = f(&combo(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let (k6, _) = f(&combo(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
    let y7 = combo(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let (k7, off) = f(&y7)?;
    let e: [f64; 5] =
        std::array::from_fn(|i| h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]));
    Ok(StepResult {
        y: y7,
        k: k7,
        off,
        err: err_norm(&e, y, &y7, rtol, atol).max(f64::MIN_POSITIVE),
        emax: e.iter().fold(0.0f64, |m, v| m.max(v.abs())),
    })
}

fn run<F>(mut f: F, model: Option<ModelId>, initial: &InitialData, opts: &FlowOptions) -> Result<Trajectory, FlowError>
where
    F: FnMut(&[f64; 5]) -> Result<([f64; 5], f64), RhsFailure>,
{
    let (rtol, atol) = (opts.rel_tol, opts.abs_tol);
    let floor = atol.max(POSITIVITY_FLOOR);
    let y0 = initial.0;
    let g0 = DiagonalMetric::new(y0)?;
    let mut stats = StepStats::default();
    let mut tracker = DriftTracker::new(model, Some(g0));

    let (mut k1, off0) = match f(&y0) {
        Ok(v) => v,
        Err(RhsFailure::Diagonality(value)) => {
            return Ok(finish(model, vec![], Termination::DiagonalityBreach { t: 0.0, value }, stats));
        }
        Err(RhsFailure::Nonpositive) => {
            return Err(FlowError::InvalidProblem("right-hand side undefined at the initial metric".into()));
        }
    };
    stats.rhs_evals += 1;
    let mut samples = vec![Sample {
        t: 0.0,
        g: g0,
        max_drift: tracker.update(&g0),
        max_offdiag: off0,
    }];

    // Initial step from the scales of y and y'.
    let sk: [f64; 5] = y0.map(|v| atol + rtol * v.abs());
    let d0 = (y0.iter().zip(&sk).map(|(v, s)| (v / s).powi(2)).sum::<f64>() / 5.0).sqrt();
    let d1 = (k1.iter().zip(&sk).map(|(v, s)| (v / s).powi(2)).sum::<f64>() / 5.0).sqrt();
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };

    let outputs = output_times(opts.t_end, opts.per_decade);
    let mut next = 0;
    let mut t = 0.0f64;
    let mut y = y0;
    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;

    let termination = loop {
        let Some(&target) = outputs.get(next) else {
            break Termination::ReachedEnd;
        };
        if stats.accepted + stats.rejected >= MAX_STEPS {
            break Termination::StepFailure { t, h };
        }
        h = h.min(h_max(t));
        let landing = t + h >= target * (1.0 - 1e-13);
        let step = if landing { target - t } else { h };
        if !landing && step <= 1e-14 * t.max(1.0) {
            break Termination::StepFailure { t, h: step };
        }

        let result = dopri_step(&mut f, &y, &k1, step, rtol, atol);
        stats.rhs_evals += 6;
        let r = match result {
            Err(RhsFailure::Diagonality(value)) => break Termination::DiagonalityBreach { t, value },
            Err(RhsFailure::Nonpositive) => {
                stats.rejected += 1;
                last_rejected = true;
                h = step * 0.25;
                continue;
            }
            Ok(r) => r,
        };

        let fac11 = r.err.powf(0.2 - 0.75 * BETA);
        if r.err > 1.0 {
            stats.rejected += 1;
            last_rejected = true;
            h = step / (1.0 / FAC_MIN).min(fac11 / SAFE);
            continue;
        }

        let fac = (1.0 / FAC_MAX).max((1.0 / FAC_MIN).min(fac11 / facold.powf(BETA) / SAFE));
        let mut h_new = step / fac;
        if last_rejected {
            h_new = h_new.min(step);
        }
        facold = r.err.max(1e-4);
        last_rejected = false;
        stats.accepted += 1;
        stats.error_estimate += r.emax;
        t = if landing { target } else { t + step };
        y = r.y;
        k1 = r.k;
        if let Some(index) = y.iter().position(|v| *v <= floor) {
            break Termination::PositivityBreach { t, index, value: y[index] };
        }
        if landing {
            let g = DiagonalMetric::new(y)?;
            samples.push(Sample {
                t,
                g,
                max_drift: tracker.update(&g),
                max_offdiag: r.off,
            });
            next += 1;
            h = if step < h { h.max(h_new) } else { h_new };
        } else {
            h = h_new;
        }
    };
    debug!(
        "{} accepted, {} rejected steps, {} rhs evaluations",
        stats.accepted, stats.rejected, stats.rhs_evals
    );
    Ok(finish(model, samples, termination, stats))
}

fn finish(model: Option<ModelId>, samples: Vec<Sample>, termination: Termination, stats: StepStats) -> Trajectory {
    Trajectory {
        model,
        samples,
        termination,
        stats,
    }
}

/// Monotone cubic Hermite slopes (Fritsch–Carlson).
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![del[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if del[k - 1] * del[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    let edge = |h0: f64, h1: f64, m0: f64, m1: f64| {
        let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if d.signum() != m0.signum() {
            0.0
        } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
            3.0 * m0
        } else {
            d
        }
    };
    d[0] = edge(h[0], h[1], del[0], del[1]);
    d[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    d
}

fn pchip_eval(x: &[f64], y: &[f64], d: &[f64], xq: f64) -> f64 {
    let k = match x.partition_point(|&v| v <= xq) {
        0 => 0,
        p if p >= x.len() => x.len() - 2,
        p => p - 1,
    };
    let h = x[k + 1] - x[k];
    let s = (xq - x[k]) / h;
    let (s2, s3) = (s * s, s * s * s);
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y[k] + h10 * h * d[k] + h01 * y[k + 1] + h11 * h * d[k + 1]
}

/// Resamples at geometrically spaced times between the first positive sample
/// time and the last one, interpolating `ln gᵢ` against `ln t` with monotone
/// cubics. A sample at `t = 0` is carried over unchanged.
pub fn resample_log(traj: &Trajectory, per_decade: usize) -> Result<Trajectory, FlowError> {
    if per_decade == 0 {
        return Err(FlowError::ZeroPerDecade);
    }
    let pos: Vec<&Sample> = traj.samples.iter().filter(|s| s.t > 0.0).collect();
    if pos.len() < 2 {
        return Err(FlowError::TooFewSamples);
    }
    let lx: Vec<f64> = pos.iter().map(|s| s.t.ln()).collect();
    let ly: Vec<Vec<f64>> = (0..5).map(|i| pos.iter().map(|s| s.g.get(i).ln()).collect()).collect();
    let slopes: Vec<Vec<f64>> = ly.iter().map(|y| pchip_slopes(&lx, y)).collect();

    let (t_lo, t_hi) = (pos[0].t, pos[pos.len() - 1].t);
    let decades = (t_hi / t_lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    let mut times: Vec<f64> = (0..n).map(|j| t_lo * 10f64.powf(j as f64 / per_decade as f64)).filter(|&t| t < t_hi).collect();
    times.push(t_hi);

    let mut points = Vec::with_capacity(times.len() + 1);
    let mut offs = Vec::with_capacity(times.len() + 1);
    if let Some(s0) = traj.samples.first().filter(|s| s.t == 0.0) {
        points.push((0.0, s0.g));
        offs.push(s0.max_offdiag);
    }
    for &t in &times {
        let lt = t.ln();
        let g: [f64; 5] = std::array::from_fn(|i| pchip_eval(&lx, &ly[i], &slopes[i], lt).exp());
        let g = if t == t_hi { *pos[pos.len() - 1].g.coeffs() } else if t == t_lo { *pos[0].g.coeffs() } else { g };
        points.push((t, DiagonalMetric::new(g)?));
        let k = pos.partition_point(|s| s.t < t).min(pos.len() - 1);
        let lo = k.saturating_sub(1);
        offs.push(pos[lo].max_offdiag.max(pos[k].max_offdiag));
    }
    let mut out = Trajectory::from_metrics(traj.model, points);
    for (s, o) in out.samples.iter_mut().zip(offs) {
        s.max_offdiag = o;
    }
    out.termination = traj.termination;
    out.stats = traj.stats;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> InitialData {
        InitialData::unit()
    }

    #[test]
    fn grid_shape() {
        let g = output_times(100.0, 4);
        assert_eq!(g[0], 1.0 / 64.0);
        assert_eq!(g[63], 1.0);
        assert_eq!(*g.last().unwrap(), 100.0);
        assert_eq!(g.len(), 64 + 8);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let short = output_times(0.5, 64);
        assert_eq!(short.len(), 32);
        assert_eq!(*short.last().unwrap(), 0.5);
    }

    #[test]
    fn d5_unit_to_one() {
        let traj = integrate(&FlowProblem::new(ModelId::D5, unit(), 1.0)).unwrap();
        assert!(traj.termination.reached_end());
        let g = traj.final_metric().unwrap();
        let c = 4f64.cbrt();
        let want = [1.0 / c, c, c, 1.0, 5.0];
        for i in 0..5 {
            assert!((g[i] - want[i]).abs() < 1e-8 * want[i], "{i}: {} vs {}", g[i], want[i]);
        }
        assert_eq!(traj.samples[0].t, 0.0);
        assert_eq!(traj.samples[0].g.coeffs(), &[1.0; 5]);
    }

    #[test]
    fn abelian_is_constant() {
        let lam = InitialData::new([0.3, 2.0, 1.5, 7.0, 0.9]).unwrap();
        let opts = FlowOptions {
            t_end: 1e3,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            offdiag_tol: DEFAULT_OFFDIAG_TOL,
            per_decade: 8,
        };
        let traj = integrate_brackets(&StructureConstants::zeros(5), None, &lam, &opts).unwrap();
        assert!(traj.samples.iter().all(|s| s.g.coeffs() == &lam.0));
    }

    #[test]
    fn d3_self_similar() {
        let lam = InitialData::new([2.0 / 3.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let traj = integrate(&FlowProblem::new(ModelId::D3, lam, 100.0)).unwrap();
        for s in &traj.samples {
            let want = (2.0 / 3.0) * (1.0 + 11.0 / 3.0 * s.t).powf(-4.0 / 11.0);
            assert!((s.g.get(0) / want - 1.0).abs() < 1e-8, "t = {}", s.t);
        }
    }

    #[test]
    fn unconstrained_start_is_refused() {
        let p = ModelParams::new(ModelId::D1, &[(crate::catalog::ParamName::Alpha, 1.0)]).unwrap();
        let err = integrate(&FlowProblem::new(ModelId::D1, unit(), 1.0).with_params(p)).unwrap_err();
        assert!(matches!(err, FlowError::Curvature(CurvatureError::DiagonalityViolation { .. })));
    }

    #[test]
    fn bad_options() {
        assert!(integrate(&FlowProblem::new(ModelId::D1, unit(), -1.0)).is_err());
        assert!(integrate(&FlowProblem::new(ModelId::D1, unit(), 1.0).with_tolerances(0.0, 1e-12)).is_err());
    }

    #[test]
    fn d5_printed_matches_curvature() {
        let a = integrate(&FlowProblem::new(ModelId::D5, unit(), 10.0)).unwrap();
        let b = integrate(&FlowProblem::new(ModelId::D5, unit(), 10.0).with_rhs(RhsSource::Printed)).unwrap();
        let (ga, gb) = (a.final_metric().unwrap(), b.final_metric().unwrap());
        for i in 0..5 {
            assert!((ga[i] - gb[i]).abs() < 1e-9 * ga[i]);
        }
    }

    #[test]
    fn resample_power_law() {
        let pts: Vec<(f64, DiagonalMetric)> = (0..=40)
            .map(|j| {
                let t = 10f64.powf(j as f64 / 8.0);
                (t, DiagonalMetric::new([t.powf(0.25); 5]).unwrap())
            })
            .collect();
        let traj = Trajectory::from_metrics(None, pts);
        let r = resample_log(&traj, 13).unwrap();
        assert_eq!(r.samples.first().unwrap().t, 1.0);
        assert_eq!(r.samples.last().unwrap().t, 1e5);
        for s in &r.samples {
            assert!((s.g.get(2) / s.t.powf(0.25) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn resample_constant_and_degenerate() {
        let g = DiagonalMetric::new([1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let traj = Trajectory::from_metrics(None, vec![(0.0, g), (1.0, g), (10.0, g), (100.0, g)]);
        let r = resample_log(&traj, 5).unwrap();
        assert_eq!(r.samples[0].t, 0.0);
        assert!(r.samples.iter().all(|s| (s.g.get(4) - 5.0).abs() < 1e-14));
        let single = Trajectory::from_metrics(None, vec![(1.0, g)]);
        assert_eq!(resample_log(&single, 5).unwrap_err(), FlowError::TooFewSamples);
        assert_eq!(resample_log(&traj, 0).unwrap_err(), FlowError::ZeroPerDecade);
    }
}
