//! `solvflow`: run Ricci flows on the catalog of five-dimensional solvable
//! Lie groups, fit their asymptotics and check the published claims.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde_json::json;

use solvflow_core::asymptotics::{default_window, fit_power_law};
use solvflow_core::catalog::{
    classify_case, constrained_params, model_asymptotics, InitialData, ModelId, ModelSpec,
};
use solvflow_core::flow::{integrate, FlowProblem};
use solvflow_core::invariants::{detect_monomials_seeded, DEFAULT_SEED};
use solvflow_core::io::{load, save, Format, IoError};
use solvflow_core::verify::{run_all, CheckConfig, DEFAULT_CHECK_SEED};

const COMPONENTS: [&str; 5] = ["A", "B", "C", "D", "E"];

#[derive(Debug, Parser)]
#[command(name = "solvflow", version, about = "Ricci flow on five-dimensional solvable Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the catalog models.
    List,
    /// Show brackets, constraints, invariants and expected exponents of a model.
    Describe {
        model: ModelId,
        #[arg(long)]
        json: bool,
    },
    /// Integrate the flow and write the trajectory.
    Flow(FlowArgs),
    /// Detect monomial conserved quantities of a model.
    Invariants {
        model: ModelId,
        #[arg(long, default_value_t = 5)]
        max_exp: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Fit a power law to one component of a saved trajectory.
    Fit(FitArgs),
    /// Run the acceptance criteria and write a verification report.
    Check {
        model: Option<ModelId>,
        #[arg(long, default_value_t = DEFAULT_CHECK_SEED)]
        seed: u64,
        #[arg(long, default_value = "verification_report.json")]
        report: PathBuf,
    },
}

#[derive(Debug, Args)]
struct FlowArgs {
    model: ModelId,
    /// Initial metric coefficients l1,...,l5.
    #[arg(long, value_parser = parse_lambda)]
    lambda: InitialData,
    #[arg(long)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-11)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-14)]
    atol: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "verbatim")]
enum Component {
    A,
    B,
    C,
    D,
    E,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, ignore_case = true)]
    component: Component,
    /// Fit window lo,hi; defaults to the last two decades.
    #[arg(long, value_parser = parse_window)]
    window: Option<(f64, f64)>,
    /// Model whose expected exponent is reported (taken from JSON input when omitted).
    #[arg(long)]
    model: Option<ModelId>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn parse_floats(text: &str, n: usize) -> Result<Vec<f64>, String> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", values.len()));
    }
    Ok(values)
}

fn parse_lambda(text: &str) -> Result<InitialData, String> {
    InitialData::from_slice(&parse_floats(text, 5)?).map_err(|e| e.to_string())
}

fn parse_window(text: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(text, 2)?;
    Ok((v[0], v[1]))
}

/// An error caused by the invocation rather than by a failed check.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SOLVFLOW_LOG", "off")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() || e.chain().any(|c| c.is::<std::io::Error>() || c.is::<IoError>()) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::List => {
            for m in ModelId::ALL {
                println!("{:<4} {}", m, m.description());
            }
            Ok(true)
        }
        Command::Describe { model, json } => {
            describe(model, json)?;
            Ok(true)
        }
        Command::Flow(args) => flow(args),
        Command::Invariants { model, max_exp, seed } => {
            if max_exp == 0 {
                return Err(usage("--max-exp must be at least 1"));
            }
            for inv in detect_monomials_seeded(model, &constrained_params(model), max_exp, seed)? {
                println!("{:?}  {inv}", inv.exponents());
            }
            Ok(true)
        }
        Command::Fit(args) => fit(args),
        Command::Check { model, seed, report } => check(model, seed, report),
    }
}

fn describe(model: ModelId, as_json: bool) -> Result<()> {
    let spec = ModelSpec::for_model(model);
    if as_json {
        println!("{}", serde_json::to_string_pretty(&spec)?);
        return Ok(());
    }
    println!("{}: {}", spec.id, spec.description);
    println!("brackets:");
    for b in &spec.y_brackets {
        println!("  {b}");
    }
    let params: Vec<String> = spec.constrained_params.iter().map(|(p, v)| format!("{}={v}", p.as_str())).collect();
    println!("constrained parameters: {}", if params.is_empty() { "none".into() } else { params.join(", ") });
    println!("constrained brackets:");
    for b in &spec.constrained_brackets {
        println!("  {b}");
    }
    println!("invariants:");
    for m in &spec.invariants.monomials {
        println!("  {m}");
    }
    for s in &spec.invariants.special {
        println!("  {}", s.label());
    }
    println!("expected exponents (A, B, C, D, E):");
    for (case, table) in &spec.asymptotics {
        println!("  {case}: {table}");
    }
    for (case, text) in &spec.closed_forms {
        println!("closed form ({case}): {text}");
    }
    Ok(())
}

fn flow(args: FlowArgs) -> Result<bool> {
    let problem = FlowProblem::new(args.model, args.lambda, args.t_end).with_tolerances(args.rtol, args.atol);
    let format = match args.format {
        Some(OutputFormat::Csv) => Format::Csv,
        Some(OutputFormat::Json) => Format::Json,
        None => Format::from_path(&args.out),
    };
    let traj = integrate(&problem).map_err(|e| usage(e.to_string()))?;
    save(&args.out, format, &problem, &traj).with_context(|| format!("writing {}", args.out.display()))?;
    info!(
        "{} samples, {} accepted and {} rejected steps",
        traj.samples.len(),
        traj.stats.accepted,
        traj.stats.rejected
    );
    if !traj.termination.reached_end() {
        warn!("run stopped early: {:?}", traj.termination);
        eprintln!("run stopped early: {:?}", traj.termination);
        return Ok(false);
    }
    Ok(true)
}

fn fit(args: FitArgs) -> Result<bool> {
    let traj = load(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let component = args.component as usize;
    let window = args.window.unwrap_or_else(|| default_window(&traj));
    let fit = fit_power_law(&traj, component, window).map_err(|e| usage(e.to_string()))?;
    let model = args.model.or(traj.model);
    let case = model.zip(traj.samples.first()).map(|(m, s)| classify_case(m, &InitialData(*s.g.coeffs())));
    let expected = model.zip(case).and_then(|(m, c)| model_asymptotics(m, c).ok()).map(|t| t.0[component]);
    let deviation = expected.map(|e| (fit.exponent - e.to_f64()).abs());
    if args.json {
        let report = json!({
            "model": model,
            "case": case,
            "component": COMPONENTS[component],
            "exponent": fit.exponent,
            "expected_exponent": expected.map(|e| e.to_string()),
            "deviation": deviation,
            "r_squared": fit.r_squared,
            "prefactor": fit.prefactor(),
            "window": [fit.window.0, fit.window.1],
            "samples": fit.samples,
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("component {}: exponent {}", COMPONENTS[component], fit.exponent);
        println!("r^2 {}, prefactor {}, {} samples in [{}, {}]", fit.r_squared, fit.prefactor(), fit.samples, fit.window.0, fit.window.1);
        if let (Some(m), Some(c), Some(e), Some(d)) = (model, case, expected, deviation) {
            println!("expected for {m} {c}: {e} (deviation {d:.3e})");
        }
    }
    Ok(true)
}

fn check(model: Option<ModelId>, seed: u64, report_path: PathBuf) -> Result<bool> {
    let cfg = CheckConfig::for_model(model, seed);
    let report = run_all(&cfg);
    for c in &report.criteria {
        println!("{}", c.summary_line());
        for f in c.failures() {
            let who = f.model.map_or(String::new(), |m| format!("{m} "));
            println!("    {who}{}: expected {}, got {}", f.claim, f.expected, f.computed);
        }
    }
    let text = serde_json::to_string_pretty(&report)?;
    std::fs::write(&report_path, text).with_context(|| format!("writing {}", report_path.display()))?;
    println!("report written to {}", report_path.display());
    if !report.all_passed {
        info!("one or more criteria failed");
    }
    Ok(report.all_passed)
}
