//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 1 to 10 are run through `solvflow check` and read back from its
//! JSON report; criterion 11 exercises the command line itself.

use std::path::Path;
use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use serde_json::Value;
use solvflow_core::asymptotics::fit_power_law;
use solvflow_core::catalog::{InitialData, ModelId};
use solvflow_core::flow::{integrate, FlowProblem};

const BIN: &str = env!("CARGO_BIN_EXE_solvflow");

fn solvflow(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(dir).output().expect("solvflow runs")
}

fn line(ok: bool, id: u8, title: &str, detail: &str) {
    println!("{} criterion {id:>2}: {title} ({detail})", if ok { "PASS" } else { "FAIL" });
}

/// Exponents printed by `fit --json` for every component of a run written by `flow`.
fn cli_fits(dir: &Path, model: &str, lambda: &str, t_end: &str) -> Result<Vec<f64>, String> {
    let out = solvflow(&["flow", model, "--lambda", lambda, "--t-end", t_end, "--out", "run.csv"], dir);
    if !out.status.success() {
        return Err(format!("flow failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let mut fits = Vec::new();
    for c in ["A", "B", "C", "D", "E"] {
        let out = solvflow(&["fit", "--in", "run.csv", "--component", c, "--window", "1e4,1e6", "--json"], dir);
        if !out.status.success() {
            return Err(format!("fit failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        fits.push(v["exponent"].as_f64().ok_or("missing exponent")?);
    }
    Ok(fits)
}

fn round_trip(dir: &Path) -> Result<usize, String> {
    let cases = [
        (ModelId::D2, [1.0; 5], "1,1,1,1,1"),
        (ModelId::D3, [0.7, 1.3, 0.9, 1.8, 1.1], "0.7,1.3,0.9,1.8,1.1"),
    ];
    let mut compared = 0;
    for (m, l, text) in cases {
        let cli = cli_fits(dir, m.name(), text, "1e6")?;
        let traj = integrate(&FlowProblem::new(m, InitialData::new(l).unwrap(), 1e6)).map_err(|e| e.to_string())?;
        for (i, got) in cli.iter().enumerate() {
            let want = fit_power_law(&traj, i, (1e4, 1e6)).map_err(|e| e.to_string())?.exponent;
            if got.to_bits() != want.to_bits() {
                return Err(format!("{m} component {i}: cli {got:e} vs in-process {want:e}"));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let report = dir.path().join("report.json");
    let start = Instant::now();
    let out = solvflow(&["check", "--report", report.to_str().unwrap()], dir.path());
    let seconds = start.elapsed().as_secs_f64();
    let parsed: Option<Value> = std::fs::read(&report).ok().and_then(|b| serde_json::from_slice(&b).ok());

    let mut all = true;
    for id in 1..=10u8 {
        let crit = parsed.as_ref().and_then(|r| r["criteria"].as_array()?.iter().find(|c| c["id"] == id).cloned());
        match crit {
            Some(c) => {
                let ok = c["passed"].as_bool() == Some(true);
                let claims = c["claims"].as_array().cloned().unwrap_or_default();
                let failed: Vec<String> = claims
                    .iter()
                    .filter(|x| x["status"] == "fail")
                    .map(|x| format!("{} {}: got {}", x["model"].as_str().unwrap_or("-"), x["claim"].as_str().unwrap_or(""), x["computed"].as_str().unwrap_or("")))
                    .collect();
                let detail = if failed.is_empty() {
                    format!("{} claims, {:.2} s", claims.len(), c["seconds"].as_f64().unwrap_or(f64::NAN))
                } else {
                    let more = if failed.len() > 3 { format!("; {} more in the report", failed.len() - 3) } else { String::new() };
                    format!("{} failing: {}{more}", failed.len(), failed[..failed.len().min(3)].join("; "))
                };
                line(ok, id, c["title"].as_str().unwrap_or(""), &detail);
                all &= ok;
            }
            None => {
                line(false, id, "missing from report", &String::from_utf8_lossy(&out.stderr));
                all = false;
            }
        }
    }

    let exit_ok = out.status.code() == Some(0);
    let fast = seconds < 300.0;
    let trip = round_trip(dir.path());
    let ok11 = exit_ok && fast && trip.is_ok();
    let detail = format!(
        "check exit {:?} in {seconds:.1} s; flow -> CSV -> fit {}",
        out.status.code(),
        match &trip {
            Ok(n) => format!("bit-identical on {n} exponents"),
            Err(e) => format!("mismatch: {e}"),
        }
    );
    line(ok11, 11, "command line", &detail);
    all &= ok11;

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
