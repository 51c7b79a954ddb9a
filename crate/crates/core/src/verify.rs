//! End-to-end checks of the published claims, shared by the `check`
//! subcommand and the acceptance tests.
//!
//! Each criterion produces a list of [`Claim`]s, one per compared quantity.
//! A criterion passes when every non-informational claim passes and, where a
//! runtime budget applies, it finished within budget.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{
    closed_form_deviation, d1_case2_a_prefactor, d1_log_relations_residual, d5_published_block, fit_power_law,
    residual_check, ClosedFormSolution, D2Bernoulli,
};
use crate::catalog::{
    build_model, classify_case, constrained_params, model_asymptotics, model_invariants, printed_ricci_diagonal,
    printed_system, x_basis, CaseLabel, InitialData, ModelId, ModelParams, Sign,
};
use crate::curvature::{flow_rhs, ricci_quadratic, ricci_tensor, DiagonalMetric, DEFAULT_OFFDIAG_TOL};
use crate::flow::{integrate, integrate_brackets, FlowOptions, FlowProblem, RhsSource, Trajectory};
use crate::invariants::{
    detect_monomials_seeded, drift_report, in_lattice, ratio_diagnostics, special_drift, SpecialInvariant,
};
use crate::lie::{change_basis, jacobi_residual, BasisChange, StructureConstants};

pub const DEFAULT_CHECK_SEED: u64 = 20_240_611;
pub const FIT_WINDOW: (f64, f64) = (1e4, 1e6);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Pass,
    Fail,
    /// Reported for context, not part of the verdict.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub model: Option<ModelId>,
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub status: ClaimStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub skipped: bool,
    pub seconds: f64,
    pub budget_seconds: Option<f64>,
    pub claims: Vec<Claim>,
    pub error: Option<String>,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        let verdict = match (self.skipped, self.passed) {
            (true, _) => "SKIP",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        let failed = self.claims.iter().filter(|c| c.status == ClaimStatus::Fail).count();
        let total = self.claims.iter().filter(|c| c.status != ClaimStatus::Info).count();
        let mut line = format!(
            "{verdict} criterion {:>2}: {} ({}/{} claims ok, {:.2} s",
            self.id,
            self.title,
            total - failed,
            total,
            self.seconds
        );
        if let Some(b) = self.budget_seconds {
            line.push_str(&format!(", budget {b} s"));
        }
        line.push(')');
        if let Some(e) = &self.error {
            line.push_str(&format!(" error: {e}"));
        }
        line
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.status == ClaimStatus::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub models: Vec<ModelId>,
    pub all_passed: bool,
    pub criteria: Vec<CriterionResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    pub seed: u64,
    pub models: Vec<ModelId>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_CHECK_SEED,
            models: ModelId::ALL.to_vec(),
        }
    }
}

impl CheckConfig {
    pub fn for_model(model: Option<ModelId>, seed: u64) -> Self {
        Self {
            seed,
            models: model.map_or_else(|| ModelId::ALL.to_vec(), |m| vec![m]),
        }
    }

    fn has(&self, m: ModelId) -> bool {
        self.models.contains(&m)
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "Ricci oracle equivalence"),
    (2, "flow-system equivalence"),
    (3, "D5 exact solution"),
    (4, "conserved quantities"),
    (5, "exponent reproduction"),
    (6, "D1 algebraic relations"),
    (7, "D2 structure"),
    (8, "D3 dynamics"),
    (9, "D11 dichotomy"),
    (10, "property suites"),
];

fn budget(id: u8) -> Option<f64> {
    match id {
        1 | 3 => Some(1.0),
        4 => Some(30.0),
        5 => Some(120.0),
        _ => None,
    }
}

type Outcome = Result<Vec<Claim>, String>;

/// Runs one criterion (1 to 10).
pub fn run_criterion(id: u8, cfg: &CheckConfig) -> CriterionResult {
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown criterion", |c| c.1);
    let start = Instant::now();
    let outcome: Outcome = match id {
        1 => c1_ricci(cfg),
        2 => c2_systems(cfg),
        3 => c3_d5(cfg),
        4 => c4_invariants(cfg),
        5 => c5_exponents(cfg),
        6 => c6_d1(cfg),
        7 => c7_d2(cfg),
        8 => c8_d3(cfg),
        9 => c9_d11(cfg),
        10 => c10_properties(cfg),
        _ => Err(format!("no criterion {id}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let budget_seconds = budget(id);
    let (claims, error) = match outcome {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e)),
    };
    let skipped = error.is_none() && claims.is_empty();
    let in_budget = budget_seconds.is_none_or(|b| seconds <= b);
    let passed = error.is_none() && in_budget && claims.iter().all(|c| c.status != ClaimStatus::Fail);
    CriterionResult {
        id,
        title,
        passed,
        skipped,
        seconds,
        budget_seconds,
        claims,
        error,
    }
}

/// Runs criteria 1 to 10.
pub fn run_all(cfg: &CheckConfig) -> VerificationReport {
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|(id, _)| run_criterion(*id, cfg)).collect();
    VerificationReport {
        seed: cfg.seed,
        models: cfg.models.clone(),
        all_passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn claim(model: Option<ModelId>, text: impl Into<String>, expected: impl Into<String>, computed: impl Into<String>, ok: bool) -> Claim {
    Claim {
        model,
        claim: text.into(),
        expected: expected.into(),
        computed: computed.into(),
        status: if ok { ClaimStatus::Pass } else { ClaimStatus::Fail },
    }
}

fn info(model: Option<ModelId>, text: impl Into<String>, expected: impl Into<String>, computed: impl Into<String>) -> Claim {
    Claim {
        model,
        claim: text.into(),
        expected: expected.into(),
        computed: computed.into(),
        status: ClaimStatus::Info,
    }
}

fn lam(v: [f64; 5]) -> InitialData {
    InitialData::new(v).expect("fixed initial data are positive")
}

fn random_metric(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> [f64; 5] {
    let (a, b) = (lo.log10(), hi.log10());
    std::array::from_fn(|_| 10f64.powf(rng.gen_range(a..b)))
}

fn run(model: ModelId, lambda: InitialData, t_end: f64) -> Result<Trajectory, String> {
    let traj = integrate(&FlowProblem::new(model, lambda, t_end)).map_err(|e| e.to_string())?;
    if !traj.termination.reached_end() {
        return Err(format!("{model} run from {:?} stopped early: {:?}", lambda.0, traj.termination));
    }
    Ok(traj)
}

/// `|a − b|` relative to the larger of the two values and the largest entry
/// of the reference vector.
fn rel_gap(a: f64, b: f64, reference: &[f64; 5]) -> f64 {
    let scale = a.abs().max(b.abs()).max(reference.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn c1_ricci(cfg: &CheckConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 1);
    let mut out = Vec::new();
    for &m in &cfg.models {
        let sc = build_model(m, &constrained_params(m)).map_err(|e| e.to_string())?;
        let mut worst_rel = [0.0f64; 5];
        let mut worst_off: f64 = 0.0;
        for _ in 0..100 {
            let g = random_metric(&mut rng, 0.1, 10.0);
            let ric = ricci_tensor(&sc, &DiagonalMetric::new(g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let want = printed_ricci_diagonal(m, &g);
            let got = ric.diagonal();
            let scale = want.iter().chain(got.iter()).fold(0.0f64, |a, v| a.max(v.abs()));
            for i in 0..5 {
                worst_rel[i] = worst_rel[i].max((got[i] - want[i]).abs() / scale);
            }
            worst_off = worst_off.max(ric.max_offdiag().0);
        }
        for (i, w) in worst_rel.iter().enumerate() {
            out.push(claim(
                Some(m),
                format!("Ric(Y{0},Y{0}) equals the published diagonal", i + 1),
                "relative difference < 1e-12",
                format!("{w:.3e}"),
                *w < 1e-12,
            ));
        }
        out.push(claim(Some(m), "off-diagonal Ricci vanishes", "< 1e-14", format!("{worst_off:.3e}"), worst_off < 1e-14));
    }
    Ok(out)
}

fn c2_systems(cfg: &CheckConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 2);
    let mut out = Vec::new();
    for &m in &cfg.models {
        let sc = build_model(m, &constrained_params(m)).map_err(|e| e.to_string())?;
        let mut worst = [0.0f64; 5];
        for _ in 0..100 {
            let g = random_metric(&mut rng, 0.1, 10.0);
            let dm = DiagonalMetric::new(g).map_err(|e| e.to_string())?;
            let got = flow_rhs(&sc, &dm, DEFAULT_OFFDIAG_TOL).map_err(|e| e.to_string())?.0;
            let want = printed_system(m, &g);
            for i in 0..5 {
                worst[i] = worst[i].max(rel_gap(got[i], want[i], &want));
            }
        }
        let names = ["A", "B", "C", "D", "E"];
        for i in 0..5 {
            out.push(claim(
                Some(m),
                format!("d{}/dt equals the published system", names[i]),
                "relative difference < 1e-12",
                format!("{:.3e}", worst[i]),
                worst[i] < 1e-12,
            ));
        }
    }
    Ok(out)
}

fn c3_d5(cfg: &CheckConfig) -> Outcome {
    if !cfg.has(ModelId::D5) {
        return Ok(Vec::new());
    }
    let m = Some(ModelId::D5);
    let lambda = InitialData::unit();
    let traj = run(ModelId::D5, lambda, 10.0)?;
    let cf = ClosedFormSolution::new(ModelId::D5, CaseLabel::Exact, lambda).map_err(|e| e.to_string())?;
    let dev = closed_form_deviation(&cf, &traj).map_err(|e| e.to_string())?;
    let e_dev = traj
        .samples
        .iter()
        .map(|s| (s.g.get(4) - (4.0 * s.t + 1.0)).abs())
        .fold(0.0, f64::max);
    let published = traj
        .samples
        .iter()
        .flat_map(|s| {
            let p = d5_published_block(&lambda, s.t);
            (0..5).map(move |i| (s.g.get(i) / p[i] - 1.0).abs())
        })
        .fold(0.0, f64::max);
    let last = traj.final_metric().unwrap_or_default();
    Ok(vec![
        claim(m, "integrated flow matches the closed form on [0, 10]", "max relative deviation < 1e-8", format!("{dev:.3e}"), dev < 1e-8),
        claim(m, "E(t) = 4t + 1", "|E - (4t + 1)| < 1e-10", format!("{e_dev:.3e}"), e_dev < 1e-10),
        info(m, "state at t = 10", "(13^(-1/3), 13^(1/3), 13^(1/3), 1, 41)", fmt_vec(&last)),
        info(
            m,
            "deviation from the solution block as printed (exponent -1/3 on B and C)",
            "not a solution of the system",
            format!("{published:.3e}"),
        ),
    ])
}

fn c4_invariants(cfg: &CheckConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 4);
    let mut out = Vec::new();
    for &m in &cfg.models {
        let invs = model_invariants(m).monomials;
        let mut worst = vec![0.0f64; invs.len()];
        for _ in 0..20 {
            let l = lam(std::array::from_fn(|_| rng.gen_range(0.5..2.0)));
            let traj = run(m, l, 1e4)?;
            for (w, inv) in worst.iter_mut().zip(&invs) {
                *w = w.max(drift_report(&traj, inv));
            }
        }
        for (w, inv) in worst.iter().zip(&invs) {
            out.push(claim(Some(m), format!("{inv} is conserved (20 runs to t = 1e4)"), "relative drift < 1e-8", format!("{w:.3e}"), *w < 1e-8));
        }
        let detected = detect_monomials_seeded(m, &constrained_params(m), 5, cfg.seed).map_err(|e| e.to_string())?;
        let basis: Vec<[i64; 5]> = detected.iter().map(|d| d.exponents().map(i64::from)).collect();
        let listing: Vec<String> = detected.iter().map(|d| format!("{:?}", d.exponents())).collect();
        for inv in &invs {
            let found = in_lattice(&basis, inv.exponents().map(i64::from));
            out.push(claim(
                Some(m),
                format!("detection recovers {:?}", inv.exponents()),
                "in detected lattice (max_exp 5)",
                listing.join(" "),
                found,
            ));
        }
    }
    Ok(out)
}

fn fit_claims(out: &mut Vec<Claim>, m: ModelId, case: CaseLabel, label: &str, traj: &Trajectory) -> Result<[f64; 5], String> {
    let expected = model_asymptotics(m, case).map_err(|e| e.to_string())?;
    let names = ["A", "B", "C", "D", "E"];
    let mut fitted = [0.0; 5];
    for i in 0..5 {
        let fit = fit_power_law(traj, i, FIT_WINDOW).map_err(|e| e.to_string())?;
        let p = expected.0[i].to_f64();
        let dev = (fit.exponent - p).abs();
        let ok = dev <= 0.01 && (p == 0.0 || fit.r_squared > 0.9999);
        fitted[i] = fit.exponent;
        out.push(claim(
            Some(m),
            format!("{label}: {} ~ t^{}", names[i], expected.0[i]),
            format!("|p - {}| <= 0.01, r^2 > 0.9999", expected.0[i]),
            format!("p = {:.5}, r^2 = {:.7}", fit.exponent, fit.r_squared),
            ok,
        ));
    }
    Ok(fitted)
}

/// Initial data used for the long runs of each (model, case).
pub fn canonical_runs() -> Vec<(ModelId, CaseLabel, InitialData)> {
    vec![
        (ModelId::D1, CaseLabel::Case1, lam([1.3, 0.8, 1.6, 1.2, 0.6])),
        (ModelId::D1, CaseLabel::Case2, lam([1.2, 0.7, 1.5, 0.9, 1.1])),
        (ModelId::D2, CaseLabel::Case1, InitialData::unit()),
        (ModelId::D2, CaseLabel::Case2, lam([0.7, 1.3, 0.9, 1.8, 1.1])),
        (ModelId::D3, CaseLabel::Generic, InitialData::unit()),
        (ModelId::D3, CaseLabel::SelfSimilar, lam([2.0 / 3.0, 1.0, 1.0, 1.0, 1.0])),
        (ModelId::D11, CaseLabel::Case1, lam([1.2, 0.8, 0.8, 1.5, 0.9])),
        (ModelId::D11, CaseLabel::Case2, lam([1.0, 2.0, 1.0, 1.0, 1.0])),
    ]
}

fn c5_exponents(cfg: &CheckConfig) -> Outcome {
    let mut out = Vec::new();
    for (m, case, l) in canonical_runs() {
        if !cfg.has(m) {
            continue;
        }
        debug_assert_eq!(classify_case(m, &l), case);
        let traj = run(m, l, 1e6)?;
        let label = format!("{case} {:?}", l.0);
        if (m, case) == (ModelId::D3, CaseLabel::SelfSimilar) {
            let r = residual_check(m, case, &traj).map_err(|e| e.to_string())?;
            out.push(claim(Some(m), format!("{label}: matches the self-similar solution to t = 1e6"), "relative residual < 1e-8", format!("{r:.3e}"), r < 1e-8));
            continue;
        }
        let fitted = fit_claims(&mut out, m, case, &label, &traj)?;
        if m == ModelId::D11 {
            let d = traj.component(3);
            let mono = d.windows(2).all(|w| w[1] >= w[0]);
            out.push(claim(Some(m), format!("{label}: D nondecreasing"), "monotone", format!("{mono}"), mono));
            out.push(claim(Some(m), format!("{label}: D approaches a constant"), "|p_D| < 0.01", format!("{:.5}", fitted[3]), fitted[3].abs() < 0.01));
            if case == CaseLabel::Case1 {
                out.push(info(Some(m), format!("{label}: E exponent against the printed -1/3 line"), "-1/3", format!("{:.5}", fitted[4])));
            }
            let printed = integrate(&FlowProblem::new(m, l, 1e6).with_rhs(RhsSource::Printed)).map_err(|e| e.to_string())?;
            let mut pf = [0.0; 5];
            for (i, p) in pf.iter_mut().enumerate() {
                *p = fit_power_law(&printed, i, FIT_WINDOW).map_err(|e| e.to_string())?.exponent;
            }
            out.push(info(Some(m), format!("{label}: exponents of the published system (without the rotation term)"), "(-1/3, 1/3, 1/3, 0, 1)", fmt_vec(&pf)));
        }
        if (m, case) == (ModelId::D1, CaseLabel::Case2) {
            let last = traj.last().ok_or("empty trajectory")?;
            let got = last.g.get(0) * last.t.sqrt();
            let want = d1_case2_a_prefactor(&l);
            out.push(info(
                Some(m),
                format!("{label}: coefficient of t^(-1/2) in A (5% tolerance)"),
                format!("{want:.6}"),
                format!("{got:.6} ({})", if (got / want - 1.0).abs() <= 0.05 { "within 5%" } else { "outside 5%" }),
            ));
        }
    }
    Ok(out)
}

fn c6_d1(cfg: &CheckConfig) -> Outcome {
    if !cfg.has(ModelId::D1) {
        return Ok(Vec::new());
    }
    let m = Some(ModelId::D1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 6);
    let mut runs: Vec<InitialData> = canonical_runs().into_iter().filter(|r| r.0 == ModelId::D1).map(|r| r.2).collect();
    runs.extend((0..5).map(|_| lam(std::array::from_fn(|_| rng.gen_range(0.5..2.0)))));
    let mut out = Vec::new();
    for l in runs {
        let case = classify_case(ModelId::D1, &l);
        let traj = run(ModelId::D1, l, 1e6)?;
        let quad = residual_check(ModelId::D1, CaseLabel::Case1, &traj).map_err(|e| e.to_string())?;
        out.push(claim(m, format!("{case} {:?}: B^2 - wC^2 - k and D^2 - eE^2 - l vanish", l.0), "relative residual < 1e-8", format!("{quad:.3e}"), quad < 1e-8));
        if case == CaseLabel::Case2 {
            let logr = d1_log_relations_residual(&l, &traj);
            out.push(claim(m, format!("{case} {:?}: log-implicit relations for B, C, D, E", l.0), "relative residual < 1e-6", format!("{logr:.3e}"), logr < 1e-6));
        }
    }
    Ok(out)
}

fn c7_d2(cfg: &CheckConfig) -> Outcome {
    if !cfg.has(ModelId::D2) {
        return Ok(Vec::new());
    }
    let m = Some(ModelId::D2);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 7);
    let mut generic = vec![lam([0.7, 1.3, 0.9, 1.8, 1.1])];
    generic.extend((0..3).map(|_| lam(std::array::from_fn(|_| rng.gen_range(0.8..1.25)))));
    for l in generic {
        let traj = run(ModelId::D2, l, 1e4)?;
        let ratio = &ratio_diagnostics(ModelId::D2, &traj)[0];
        let dev = ratio.final_deviation();
        out.push(claim(m, format!("{:?}: AC/B^2 -> 1", l.0), "|AC/B^2 - 1| < 1e-3 at t = 1e4", format!("{dev:.3e}"), dev < 1e-3));
        let b_lim = D2Bernoulli::new(&l).b_limit;
        let b_dev = (traj.final_metric().unwrap_or_default()[1] - b_lim).abs();
        out.push(claim(m, format!("{:?}: B -> (l1 l2 l3)^(1/3) = {b_lim:.6}", l.0), "|B - limit| < 1e-3 at t = 1e4", format!("{b_dev:.3e}"), b_dev < 1e-3));
        let b = traj.component(1);
        let (l1, l2, l3) = (l.0[0], l.0[1], l.0[2]);
        let rising = l2.powi(3) < l1 * l2 * l3;
        let mono = b.windows(2).all(|w| if rising { w[1] >= w[0] } else { w[1] <= w[0] });
        out.push(claim(
            m,
            format!("{:?}: B is {} ", l.0, if rising { "nondecreasing" } else { "nonincreasing" }),
            "monotone",
            format!("{mono}"),
            mono,
        ));
    }
    let l = lam([1.0, 2.0, 4.0, 1.0, 1.0]);
    let traj = run(ModelId::D2, l, 1e4)?;
    let ratio = &ratio_diagnostics(ModelId::D2, &traj)[0];
    let drift = ratio.series.iter().map(|(_, v)| (v - 1.0).abs()).fold(0.0, f64::max);
    out.push(claim(m, "(1, 2, 4, 1, 1): AC/B^2 stays 1", "|AC/B^2 - 1| < 1e-8", format!("{drift:.3e}"), drift < 1e-8));
    let bern = residual_check(ModelId::D2, CaseLabel::Case1, &traj).map_err(|e| e.to_string())?;
    out.push(claim(m, "(1, 2, 4, 1, 1): Bernoulli relation 1/A = (l/2)D^3 + KD", "relative residual < 1e-8", format!("{bern:.3e}"), bern < 1e-8));
    Ok(out)
}

/// Exact rational check of the D3 exponent system.
fn d3_k_system() -> (bool, String) {
    // (numerator, denominator) of k1..k4
    let k = [(2i64, 11i64), (2, 11), (3, 11), (3, 11)];
    let rows: [[i64; 4]; 4] = [[3, 1, 0, 1], [1, 3, 1, 0], [0, 1, 3, 0], [1, 0, 0, 3]];
    let mut ok = true;
    for row in rows {
        // every k shares denominator 11
        let num: i64 = row.iter().zip(&k).map(|(c, (n, _))| c * n).sum();
        ok &= num == 11;
    }
    (ok, "(2/11, 2/11, 3/11, 3/11)".to_string())
}

fn c8_d3(cfg: &CheckConfig) -> Outcome {
    if !cfg.has(ModelId::D3) {
        return Ok(Vec::new());
    }
    let m = Some(ModelId::D3);
    let traj = run(ModelId::D3, InitialData::unit(), 1e6)?;
    let mut out = Vec::new();
    for r in ratio_diagnostics(ModelId::D3, &traj) {
        let dev = r.final_deviation();
        let listed = matches!(r.name.as_str(), "x/y" | "z/w" | "x/z");
        let text = format!("unit run: {} -> {:.6} at t = 1e6", r.name, r.target);
        let computed = format!("{:.6} (deviation {dev:.3e})", r.final_value());
        if listed {
            out.push(claim(m, text, "within 0.01", computed, dev <= 0.01));
        } else {
            out.push(info(m, text, "within 0.01", computed));
        }
    }
    let (ok, sol) = d3_k_system();
    out.push(claim(
        m,
        "k-system 3k1+k2+k4 = k1+3k2+k3 = k2+3k3 = k1+3k4 = 1",
        sol.clone(),
        format!("{sol} substitutes exactly: {ok}"),
        ok,
    ));
    Ok(out)
}

fn c9_d11(cfg: &CheckConfig) -> Outcome {
    if !cfg.has(ModelId::D11) {
        return Ok(Vec::new());
    }
    let m = Some(ModelId::D11);
    let mut out = Vec::new();
    let eq = run(ModelId::D11, lam([1.2, 0.8, 0.8, 1.5, 0.9]), 1e6)?;
    let split = eq.samples.iter().map(|s| (s.g.get(1) - s.g.get(2)).abs() / s.g.get(1)).fold(0.0, f64::max);
    out.push(claim(m, "l2 = l3: B and C stay equal", "|B - C|/B < 1e-10", format!("{split:.3e}"), split < 1e-10));

    let l = lam([1.0, 2.0, 1.0, 1.0, 1.0]);
    let traj = run(ModelId::D11, l, 1e6)?;
    let order = traj.samples.iter().all(|s| s.g.get(1) > s.g.get(2));
    let never_below = traj.samples.iter().all(|s| s.g.get(1) >= s.g.get(2));
    let first_tie = traj.samples.iter().find(|s| s.g.get(1) <= s.g.get(2)).map(|s| s.t);
    out.push(claim(
        m,
        "l2 > l3: B > C for all sampled t",
        "B > C",
        match first_tie {
            Some(t) => format!("B = C in double precision from t = {t:.4e}"),
            None => "true".to_string(),
        },
        order,
    ));
    out.push(info(m, "l2 > l3: B never drops below C", "B >= C", format!("{never_below}")));
    let bc = ratio_diagnostics(ModelId::D11, &traj).into_iter().find(|r| r.name == "B/C").ok_or("missing B/C")?;
    let t_end = traj.last().ok_or("empty trajectory")?.t;
    let prev = bc.max_deviation_in(t_end / 100.0, t_end / 10.0).unwrap_or(f64::NAN);
    let last = bc.max_deviation_in(t_end / 10.0, t_end).unwrap_or(f64::NAN);
    let decreasing = last < prev || (last < 1e-9 && prev < 1e-9);
    out.push(claim(
        m,
        "l2 > l3: |B/C - 1| decreasing over the final two decades",
        "last-decade max below previous-decade max",
        format!("{prev:.3e} -> {last:.3e}"),
        decreasing,
    ));
    let final_dev = bc.final_deviation();
    out.push(claim(m, "l2 > l3: |B/C - 1| small at the end", "< 0.05", format!("{final_dev:.3e}"), final_dev < 0.05));

    let inv = model_invariants(ModelId::D11).monomials[0];
    let d = drift_report(&traj, &inv);
    out.push(claim(m, format!("l2 > l3: {inv} conserved"), "relative drift < 1e-8", format!("{d:.3e}"), d < 1e-8));
    // The splitting ratio is measured over t <= 10: beyond that B - C is below roundoff.
    let short = run(ModelId::D11, l, 10.0)?;
    let sr = special_drift(&short, SpecialInvariant::SplittingRatio).unwrap_or(f64::INFINITY);
    out.push(claim(
        m,
        format!("l2 > l3: {} conserved (t <= 10)", SpecialInvariant::SplittingRatio.label()),
        "relative drift < 1e-6",
        format!("{sr:.3e}"),
        sr < 1e-6,
    ));
    let re = special_drift(&short, SpecialInvariant::RotationEnergy).unwrap_or(f64::INFINITY);
    out.push(info(m, format!("l2 > l3: {} (t <= 10)", SpecialInvariant::RotationEnergy.label()), "relative drift < 1e-6", format!("{re:.3e}")));
    let printed = integrate(&FlowProblem::new(ModelId::D11, l, 10.0).with_rhs(RhsSource::Printed)).map_err(|e| e.to_string())?;
    for inv in [SpecialInvariant::SplittingRatio, SpecialInvariant::RotationEnergy] {
        let d = special_drift(&printed, inv).unwrap_or(f64::INFINITY);
        out.push(info(m, format!("l2 > l3: {} under the published system (t <= 10)", inv.label()), "relative drift < 1e-6", format!("{d:.3e}")));
    }
    Ok(out)
}

fn c10_properties(cfg: &CheckConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 10);
    let mut out = Vec::new();
    for &m in &cfg.models {
        let mut worst_jac: f64 = 0.0;
        let mut worst_table: f64 = 0.0;
        for _ in 0..100 {
            let a: [f64; 10] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let eps = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            let p = ModelParams::from_basis_entries(m, a, eps);
            let sc = build_model(m, &p).map_err(|e| e.to_string())?;
            worst_jac = worst_jac.max(jacobi_residual(&sc));
            let direct = change_basis(&x_basis(m, eps), &BasisChange::from_entries(a)).map_err(|e| e.to_string())?;
            worst_table = worst_table.max(direct.max_abs_diff(&sc).map_err(|e| e.to_string())?);
        }
        out.push(claim(Some(m), "Jacobi identity, 100 random parameter draws", "< 1e-12", format!("{worst_jac:.3e}"), worst_jac < 1e-12));
        out.push(info(Some(m), "parameterized table equals the transformed reference brackets", "< 1e-12", format!("{worst_table:.3e}")));

        let mut worst_pol: f64 = 0.0;
        for _ in 0..50 {
            let g = DiagonalMetric::new(random_metric(&mut rng, 0.1, 10.0)).map_err(|e| e.to_string())?;
            let a: [f64; 10] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let sc = build_model(m, &ModelParams::from_basis_entries(m, a, Sign::Plus)).map_err(|e| e.to_string())?;
            let w: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let q = ricci_quadratic(&sc, &g, &w).map_err(|e| e.to_string())?;
            let ric = ricci_tensor(&sc, &g).map_err(|e| e.to_string())?;
            let expanded = ric.quadratic(&w);
            let scale: f64 = ric.entries.iter().flatten().map(|v| v.abs()).sum::<f64>().max(1e-300);
            worst_pol = worst_pol.max((q - expanded).abs() / scale);
        }
        out.push(claim(Some(m), "Q(w) = sum w_i w_j R_ij at random w and metrics", "relative < 1e-12", format!("{worst_pol:.3e}"), worst_pol < 1e-12));
    }
    let abelian = StructureConstants::zeros(5);
    let l = lam(random_metric(&mut rng, 0.5, 2.0));
    let opts = FlowOptions {
        t_end: 1e3,
        rel_tol: 1e-10,
        abs_tol: 1e-14,
        offdiag_tol: DEFAULT_OFFDIAG_TOL,
        per_decade: 8,
    };
    let traj = integrate_brackets(&abelian, None, &l, &opts).map_err(|e| e.to_string())?;
    let constant = traj.samples.iter().all(|s| s.g.coeffs() == &l.0);
    out.push(claim(None, "abelian algebra: flow is constant", "g(t) = g(0)", format!("{constant}"), constant));
    Ok(out)
}
