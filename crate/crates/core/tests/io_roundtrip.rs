use proptest::prelude::*;
use solvflow_core::asymptotics::fit_power_law;
use solvflow_core::catalog::{InitialData, ModelId};
use solvflow_core::curvature::DiagonalMetric;
use solvflow_core::flow::{integrate, FlowProblem, Trajectory};
use solvflow_core::io::{load, read_csv, save, write_csv, Format};

fn positive() -> impl Strategy<Value = f64> {
    (-300.0f64..300.0).prop_map(|e| 10f64.powf(e)).prop_filter("finite", |v| v.is_finite() && *v > 0.0)
}

proptest! {
    #[test]
    fn csv_preserves_every_bit(rows in prop::collection::vec((0.0f64..1e6, prop::array::uniform5(positive())), 1..20)) {
        let points: Vec<(f64, DiagonalMetric)> = rows.iter().map(|(t, g)| (*t, DiagonalMetric::new(*g).unwrap())).collect();
        let traj = Trajectory::from_metrics(None, points);
        let mut buf = Vec::new();
        write_csv(&traj, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.samples.len(), traj.samples.len());
        for (a, b) in back.samples.iter().zip(&traj.samples) {
            prop_assert_eq!(a.t.to_bits(), b.t.to_bits());
            for i in 0..5 {
                prop_assert_eq!(a.g.get(i).to_bits(), b.g.get(i).to_bits());
            }
            prop_assert_eq!(a.max_drift.to_bits(), b.max_drift.to_bits());
        }
    }
}

#[test]
fn fits_from_saved_files_match_in_process_fits() {
    let dir = tempfile::tempdir().unwrap();
    let p = FlowProblem::new(ModelId::D3, InitialData::unit(), 1e6);
    let traj = integrate(&p).unwrap();
    for (name, format) in [("run.csv", Format::Csv), ("run.json", Format::Json)] {
        let path = dir.path().join(name);
        save(&path, format, &p, &traj).unwrap();
        let back = load(&path).unwrap();
        for i in 0..5 {
            let a = fit_power_law(&traj, i, (1e4, 1e6)).unwrap();
            let b = fit_power_law(&back, i, (1e4, 1e6)).unwrap();
            assert_eq!(a.exponent.to_bits(), b.exponent.to_bits(), "{name} component {i}");
            assert_eq!(a.r_squared.to_bits(), b.r_squared.to_bits());
        }
    }
}
