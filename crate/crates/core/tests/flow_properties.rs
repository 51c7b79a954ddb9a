use proptest::prelude::*;
use solvflow_core::catalog::{model_invariants, InitialData, ModelId};
use solvflow_core::curvature::DiagonalMetric;
use solvflow_core::flow::{integrate, output_times, resample_log, FlowProblem, RhsSource, Termination, Trajectory};
use solvflow_core::invariants::{drift_report, special_drift, SpecialInvariant};

fn lam(v: [f64; 5]) -> InitialData {
    InitialData::new(v).unwrap()
}

fn run(p: &FlowProblem) -> Trajectory {
    let traj = integrate(p).unwrap();
    assert!(traj.termination.reached_end(), "{:?}", traj.termination);
    traj
}

#[test]
fn halving_tolerance_moves_d5_less_than_the_error_estimate() {
    for rtol in [1e-6, 1e-8, 1e-10] {
        let coarse = run(&FlowProblem::new(ModelId::D5, InitialData::unit(), 10.0).with_tolerances(rtol, 1e-14));
        let fine = run(&FlowProblem::new(ModelId::D5, InitialData::unit(), 10.0).with_tolerances(rtol / 2.0, 1e-14));
        let (a, b) = (coarse.final_metric().unwrap(), fine.final_metric().unwrap());
        let change = (0..5).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
        assert!(change < coarse.stats.error_estimate, "rtol {rtol}: {change:e} vs {:e}", coarse.stats.error_estimate);
    }
}

#[test]
fn output_grid_is_linear_then_logarithmic() {
    let t = output_times(1e3, 4);
    assert_eq!(t[0], 1.0 / 64.0);
    assert_eq!(t[63], 1.0);
    assert!((t[67] - 10.0).abs() < 1e-12);
    assert_eq!(*t.last().unwrap(), 1e3);
    assert!(t.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn d5_keeps_d_fixed_and_e_linear() {
    let l = lam([0.8, 1.7, 0.6, 1.3, 2.1]);
    let traj = run(&FlowProblem::new(ModelId::D5, l, 1e3));
    for s in &traj.samples {
        assert_eq!(s.g.get(3), 1.3);
        let e = 4.0 * s.t + 2.1;
        assert!((s.g.get(4) - e).abs() <= 1e-10 * e, "t = {}", s.t);
    }
}

#[test]
fn d11_with_equal_b_and_c_keeps_them_equal() {
    let traj = run(&FlowProblem::new(ModelId::D11, lam([0.7, 1.4, 1.4, 0.9, 1.6]), 1e4));
    for s in &traj.samples {
        assert!((s.g.get(1) - s.g.get(2)).abs() / s.g.get(1) < 1e-10);
    }
}

#[test]
fn d11_ordering_of_b_and_c_is_never_reversed() {
    for l in [[1.0, 2.0, 1.0, 1.0, 1.0], [1.1, 0.6, 1.7, 0.9, 1.2]] {
        let traj = run(&FlowProblem::new(ModelId::D11, lam(l), 1e4));
        let sign = (l[1] - l[2]).signum();
        for s in &traj.samples {
            assert!(sign * (s.g.get(1) - s.g.get(2)) >= 0.0, "{l:?} at t = {}", s.t);
        }
    }
}

#[test]
fn d11_rotation_energy_is_conserved_only_without_the_rotation_term() {
    let l = lam([1.0, 2.0, 1.0, 1.0, 1.0]);
    let printed = run(&FlowProblem::new(ModelId::D11, l, 10.0).with_rhs(RhsSource::Printed));
    assert!(special_drift(&printed, SpecialInvariant::RotationEnergy).unwrap() < 1e-6);
    let curved = run(&FlowProblem::new(ModelId::D11, l, 10.0));
    assert!(special_drift(&curved, SpecialInvariant::RotationEnergy).unwrap() > 0.5);
}

#[test]
fn d11_rotation_energy_vanishes_when_b_equals_c() {
    let traj = run(&FlowProblem::new(ModelId::D11, lam([0.7, 1.4, 1.4, 0.9, 1.6]), 1e3));
    for s in &traj.samples {
        assert!(SpecialInvariant::RotationEnergy.eval(s.g.coeffs()).abs() < 1e-10);
    }
}

#[test]
fn off_diagonal_ricci_stays_below_tolerance() {
    for m in ModelId::ALL {
        let traj = run(&FlowProblem::new(m, lam([1.3, 0.7, 1.1, 1.9, 0.8]), 1e3));
        assert!(traj.max_offdiag() < 1e-14, "{m}: {:e}", traj.max_offdiag());
    }
}

#[test]
fn positivity_breach_is_reported() {
    let traj = integrate(&FlowProblem::new(ModelId::D5, InitialData::unit(), 1e3).with_tolerances(1e-8, 1e-2)).unwrap();
    assert!(traj.termination.reached_end() || matches!(traj.termination, Termination::PositivityBreach { .. }));
}

#[test]
fn resampled_trajectory_reproduces_the_grid_points() {
    let traj = run(&FlowProblem::new(ModelId::D3, InitialData::unit(), 1e4));
    let coarse = resample_log(&traj, 64).unwrap();
    for s in coarse.samples.iter().filter(|s| s.t >= 1.0) {
        let exact = traj.samples.iter().find(|x| (x.t / s.t - 1.0).abs() < 1e-12);
        if let Some(x) = exact {
            for i in 0..5 {
                assert!((x.g.get(i) / s.g.get(i) - 1.0).abs() < 1e-12);
            }
        }
    }
    let dense = resample_log(&traj, 256).unwrap();
    let t_mid = dense.samples.iter().map(|s| s.t).find(|t| *t > 50.0).unwrap();
    let direct = run(&FlowProblem::new(ModelId::D3, InitialData::unit(), t_mid));
    let at = dense.samples.iter().find(|s| s.t == t_mid).unwrap();
    for i in 0..5 {
        assert!((at.g.get(i) / direct.final_metric().unwrap()[i] - 1.0).abs() < 1e-6);
    }
}

#[test]
fn from_metrics_tracks_invariant_drift() {
    let g0 = DiagonalMetric::new([1.0; 5]).unwrap();
    let g1 = DiagonalMetric::new([2.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
    let traj = Trajectory::from_metrics(Some(ModelId::D5), vec![(0.0, g0), (1.0, g1)]);
    assert_eq!(traj.samples[0].max_drift, 0.0);
    assert!((traj.samples[1].max_drift - 1.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn invariants_drift_below_tolerance(
        m in prop::sample::select(ModelId::ALL.to_vec()),
        l in prop::array::uniform5(0.5f64..2.0),
    ) {
        let traj = run(&FlowProblem::new(m, lam(l), 1e4));
        for inv in model_invariants(m).monomials {
            let d = drift_report(&traj, &inv);
            prop_assert!(d < 1e-8, "{} {} drift {:e}", m, inv, d);
        }
    }

    #[test]
    fn d11_a2bcd2_is_conserved(l in prop::array::uniform5(0.5f64..2.0)) {
        let traj = run(&FlowProblem::new(ModelId::D11, lam(l), 1e4));
        let inv = model_invariants(ModelId::D11).monomials[0];
        prop_assert!(drift_report(&traj, &inv) < 1e-8);
    }
}
