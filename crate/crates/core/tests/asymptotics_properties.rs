use proptest::prelude::*;
use solvflow_core::asymptotics::{
    closed_form_deviation, d1_log_relations_residual, fit_power_law, residual_check, ClosedFormSolution,
};
use solvflow_core::catalog::{classify_case, constrained_params, model_asymptotics, CaseLabel, InitialData, ModelId};
use solvflow_core::flow::{integrate, FlowProblem, Trajectory};
use solvflow_core::invariants::detect_monomials;

const WINDOW: (f64, f64) = (1e4, 1e6);

fn lam(v: [f64; 5]) -> InitialData {
    InitialData::new(v).unwrap()
}

fn run(m: ModelId, l: InitialData, t_end: f64) -> Trajectory {
    let traj = integrate(&FlowProblem::new(m, l, t_end)).unwrap();
    assert!(traj.termination.reached_end(), "{:?}", traj.termination);
    traj
}

fn fitted(traj: &Trajectory) -> [f64; 5] {
    std::array::from_fn(|i| fit_power_law(traj, i, WINDOW).unwrap().exponent)
}

fn assert_table(m: ModelId, case: CaseLabel, l: InitialData) {
    assert_eq!(classify_case(m, &l), case);
    let traj = run(m, l, 1e6);
    let table = model_asymptotics(m, case).unwrap();
    for i in 0..5 {
        let fit = fit_power_law(&traj, i, WINDOW).unwrap();
        let p = table.0[i].to_f64();
        assert!((fit.exponent - p).abs() <= 0.01, "{m} {case} component {i}: {} vs {p}", fit.exponent);
        if p != 0.0 {
            assert!(fit.r_squared > 0.9999, "{m} {case} component {i}: r^2 {}", fit.r_squared);
        }
    }
}

#[test]
fn exponent_tables_d1() {
    assert_table(ModelId::D1, CaseLabel::Case1, lam([1.3, 0.8, 1.6, 1.2, 0.6]));
    assert_table(ModelId::D1, CaseLabel::Case2, lam([1.2, 0.7, 1.5, 0.9, 1.1]));
}

#[test]
fn exponent_tables_d2() {
    assert_table(ModelId::D2, CaseLabel::Case1, InitialData::unit());
    assert_table(ModelId::D2, CaseLabel::Case2, lam([0.7, 1.3, 0.9, 1.8, 1.1]));
}

#[test]
fn exponent_tables_d3_and_d5() {
    assert_table(ModelId::D3, CaseLabel::Generic, InitialData::unit());
    assert_table(ModelId::D5, CaseLabel::Exact, lam([0.9, 1.4, 0.7, 1.2, 1.5]));
}

#[test]
fn d11_exponents_with_the_rotation_term() {
    let traj = run(ModelId::D11, lam([1.0, 2.0, 1.0, 1.0, 1.0]), 1e6);
    let want = [-0.5, 0.25, 0.25, 0.25, 0.25];
    let got = fitted(&traj);
    for i in 0..5 {
        assert!((got[i] - want[i]).abs() < 0.01, "{got:?}");
    }
}

#[test]
fn fitted_exponents_are_orthogonal_to_detected_invariants() {
    let runs = [
        (ModelId::D1, lam([1.2, 0.7, 1.5, 0.9, 1.1])),
        (ModelId::D2, lam([0.7, 1.3, 0.9, 1.8, 1.1])),
        (ModelId::D3, InitialData::unit()),
        (ModelId::D5, InitialData::unit()),
        (ModelId::D11, lam([1.0, 2.0, 1.0, 1.0, 1.0])),
    ];
    for (m, l) in runs {
        let p = fitted(&run(m, l, 1e6));
        for inv in detect_monomials(m, &constrained_params(m), 3).unwrap() {
            assert!(inv.dot(&p).abs() < 0.02, "{m} {inv}: {}", inv.dot(&p));
        }
    }
}

#[test]
fn d1_case1_matches_closed_form() {
    let l = lam([1.3, 0.8, 1.6, 1.2, 0.6]);
    let cf = ClosedFormSolution::new(ModelId::D1, CaseLabel::Case1, l).unwrap();
    assert!(closed_form_deviation(&cf, &run(ModelId::D1, l, 1e3)).unwrap() < 1e-7);
}

#[test]
fn d3_self_similar_matches_closed_form() {
    let l = lam([2.0 / 3.0, 1.0, 1.0, 1.0, 1.0]);
    let cf = ClosedFormSolution::new(ModelId::D3, CaseLabel::SelfSimilar, l).unwrap();
    assert!(closed_form_deviation(&cf, &run(ModelId::D3, l, 1e3)).unwrap() < 1e-7);
}

#[test]
fn d3_substitution_dynamics() {
    let xyzw = |g: [f64; 5]| {
        let [a, b, c, d, e] = g;
        (a / (b * e), a / (c * d), b / (c * e), c / (d * e))
    };
    for t in [0.5, 2.0, 7.0] {
        let h = 1e-3 * t;
        let at = |s: f64| run(ModelId::D3, lam([0.9, 1.3, 0.8, 1.1, 1.6]), s).final_metric().unwrap();
        let (xp, ..) = xyzw(at(t + h));
        let (xm, ..) = xyzw(at(t - h));
        let (x, y, _, w) = xyzw(at(t));
        let dx = (xp - xm) / (2.0 * h);
        let rhs = -3.0 * x * x - x * y - x * w;
        assert!((dx - rhs).abs() <= 1e-3 * rhs.abs(), "t = {t}: {dx} vs {rhs}");
    }
}

#[test]
fn d2_b_moves_monotonically_toward_its_limit() {
    for l in [[0.7, 1.3, 0.9, 1.8, 1.1], [1.5, 0.8, 1.2, 0.9, 1.0]] {
        let traj = run(ModelId::D2, lam(l), 1e4);
        let b = traj.component(1);
        let rising = l[1].powi(3) < l[0] * l[1] * l[2];
        assert!(b.windows(2).all(|w| if rising { w[1] >= w[0] } else { w[1] <= w[0] }), "{l:?}");
        let limit = (l[0] * l[1] * l[2]).cbrt();
        assert!((b.last().unwrap() - limit).abs() < 1e-3, "{l:?}");
    }
}

#[test]
fn d2_case1_bernoulli_relation() {
    let traj = run(ModelId::D2, lam([1.0, 2.0, 4.0, 1.0, 1.0]), 1e4);
    assert!(residual_check(ModelId::D2, CaseLabel::Case1, &traj).unwrap() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn d5_matches_closed_form_for_any_lambda(l in prop::array::uniform5(0.3f64..3.0)) {
        let l = lam(l);
        let cf = ClosedFormSolution::new(ModelId::D5, CaseLabel::Exact, l).unwrap();
        prop_assert!(closed_form_deviation(&cf, &run(ModelId::D5, l, 1e3)).unwrap() < 1e-7);
    }

    #[test]
    fn d1_relations_hold_along_runs(l in prop::array::uniform5(0.5f64..2.0)) {
        let l = lam(l);
        let traj = run(ModelId::D1, l, 1e4);
        prop_assert!(residual_check(ModelId::D1, CaseLabel::Case1, &traj).unwrap() < 1e-8);
        if classify_case(ModelId::D1, &l) == CaseLabel::Case2 {
            prop_assert!(d1_log_relations_residual(&l, &traj) < 1e-6);
        }
    }
}
