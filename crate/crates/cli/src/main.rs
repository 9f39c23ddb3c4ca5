use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use majur::bounds::{verify_against, BoundOptions, SubsetBudget};
use majur::game::{simulate, GameConfig, GameKind};
use majur::measures::Measure;
use majur_cli::report::{four_decimals, full_precision, lorenz_csv, lorenz_curves, sig15, trim_zeros, write_file};
use majur_cli::scenario::{Kind, Resolved, Scenario};
use majur_cli::verify::builtin_rows;
use majur_cli::CliError;
use serde_json::json;

/// Majorization uncertainty bounds for finite-dimensional measurements.
#[derive(Parser)]
#[command(name = "majur", version)]
struct Cli {
    /// Worker threads for the subset search.
    #[arg(long, global = true, env = "MAJUR_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Lift the cap on subset evaluations.
    #[arg(long, global = true)]
    force_budget: bool,
    /// Write the parsed scenario back out as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    dump_scenario: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArg {
    #[arg(long, value_name = "FILE")]
    scenario: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Raw and flattened bounds, plus the majorization chain for each state.
    Bounds {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        json: bool,
        /// Write Lorenz curves of states and bounds as CSV.
        #[arg(long, value_name = "FILE")]
        emit_lorenz: Option<PathBuf>,
    },
    /// Recompute the reference values and compare.
    VerifyPaper {
        /// Override every row's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo guessing game for each state of a two-measurement scenario.
    SimulateGame {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Lorenz curves of states and bounds as CSV.
    Lorenz {
        #[command(flatten)]
        scenario: ScenarioArg,
        output: PathBuf,
    },
    /// Shannon entropy, U and V of each joint vector and of the flattened bound.
    Entropy {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        json: bool,
    },
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($out, $($arg)*);
    }};
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli, &mut out);
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("majur: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn options(cli: &Cli) -> BoundOptions {
    BoundOptions {
        budget: if cli.force_budget {
            SubsetBudget::unlimited()
        } else {
            SubsetBudget::default()
        },
        jobs: cli.jobs.max(1),
    }
}

fn load(cli: &Cli, path: &Path) -> Result<Resolved, CliError> {
    let scenario = Scenario::load(path)?;
    let resolved = scenario.resolve()?;
    if let Some(out) = &cli.dump_scenario {
        write_file(out, &(scenario.to_json() + "\n"))?;
    }
    Ok(resolved)
}

fn print_json(out: &mut String, value: &serde_json::Value) {
    say!(out, "{}", serde_json::to_string_pretty(value).expect("json"));
}

fn run(cli: Cli, out: &mut String) -> Result<(), CliError> {
    let opts = options(&cli);
    match &cli.command {
        Command::Bounds {
            scenario,
            json,
            emit_lorenz,
        } => cmd_bounds(out, &cli, &scenario.scenario, *json, emit_lorenz.as_deref(), &opts),
        Command::VerifyPaper { tol, json } => cmd_verify(out, *tol, *json, &opts),
        Command::SimulateGame {
            scenario,
            trials,
            seed,
            k,
            json,
        } => {
            let resolved = load(&cli, &scenario.scenario)?;
            cmd_game(out, &resolved, *trials, *seed, *k, *json, &opts)
        }
        Command::Lorenz { scenario, output } => {
            let r = load(&cli, &scenario.scenario)?;
            let bound = r.setting.bound(&opts).map_err(|e| CliError::from_core("bound", e))?;
            write_file(output, &lorenz_csv(&lorenz_curves(&r.states, &r.setting, &bound)?))
        }
        Command::Entropy { scenario, json } => {
            let resolved = load(&cli, &scenario.scenario)?;
            cmd_entropy(out, &resolved, *json, &opts)
        }
    }
}

fn cmd_bounds(
    out: &mut String,
    cli: &Cli,
    path: &Path,
    json: bool,
    emit: Option<&Path>,
    opts: &BoundOptions,
) -> Result<(), CliError> {
    let r = load(cli, path)?;
    let bound = r.setting.bound(opts).map_err(|e| CliError::from_core("bound", e))?;
    let symbol = bound.kind.symbol();
    let mut verdicts = Vec::new();
    for (label, state) in &r.states {
        let v = verify_against(state, &r.setting, bound.clone()).map_err(|e| CliError::from_core(label, e))?;
        verdicts.push((label.clone(), v));
    }
    if let Some(file) = emit {
        write_file(file, &lorenz_csv(&lorenz_curves(&r.states, &r.setting, &bound)?))?;
    }
    if json {
        let states: Vec<_> = verdicts
            .iter()
            .map(|(label, v)| {
                json!({
                    "label": label,
                    "joint": v.joint.components(),
                    "chain": v.chain,
                    "holds": v.holds(),
                })
            })
            .collect();
        print_json(
            out,
            &json!({
                "kind": r.kind,
                "symbol": symbol,
                "lambda": r.lambda,
                "weights": r.setting.weights,
                "raw": bound.raw,
                "cumulative": bound.cumulative.partial_sums(),
                "flattened": bound.flattened.components(),
                "states": states,
            }),
        );
    } else {
        let labels: Vec<&str> = r.setting.measurements.iter().map(|m| m.label()).collect();
        say!(out, "kind {:?}, measurements {}", r.kind, labels.join(", "));
        if let Some(lambda) = r.lambda {
            say!(out, "lambda = {}", sig15(lambda));
        }
        say!(out, "{symbol:<6} = {}", four_decimals(trim_zeros(&bound.raw)));
        let flat_label = format!("F({symbol})");
        say!(
            out,
            "{flat_label:<6} = {}",
            four_decimals(trim_zeros(bound.flattened.components()))
        );
        say!(out, "full precision:");
        say!(out, "  {symbol:<6} = {}", full_precision(&bound.raw));
        say!(
            out,
            "  {flat_label:<6} = {}",
            full_precision(bound.flattened.components())
        );
        for (label, v) in &verdicts {
            let links: Vec<String> = v
                .chain
                .iter()
                .map(|l| format!("{} ≺ {}: {}", l.lower, l.upper, if l.holds { "yes" } else { "NO" }))
                .collect();
            say!(out, "{label}: {}", links.join(", "));
        }
    }
    let failed: Vec<&str> = verdicts
        .iter()
        .filter(|(_, v)| !v.holds())
        .map(|(l, _)| l.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("chain fails for {}", failed.join(", "))))
    }
}

fn cmd_verify(out: &mut String, tol: Option<f64>, json: bool, opts: &BoundOptions) -> Result<(), CliError> {
    if let Some(t) = tol {
        if t.is_nan() || t < 0.0 {
            return Err(CliError::Input(format!("--tol: {t} is not a non-negative number")));
        }
    }
    let rows = builtin_rows(tol, opts)?;
    if json {
        print_json(out, &json!(rows));
    } else {
        say!(
            out,
            "{:<24} {:<36} {:<36} {:>8} {:>10}  verdict",
            "check",
            "computed",
            "target",
            "tol",
            "error"
        );
        for r in &rows {
            say!(
                out,
                "{:<24} {:<36} {:<36} {:>8.0e} {:>10.2e}  {}",
                r.check,
                four_decimals(&r.computed),
                four_decimals(&r.target),
                r.tolerance,
                r.max_error,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{failed} of {} rows outside tolerance",
            rows.len()
        )))
    }
}

fn cmd_game(
    out: &mut String,
    r: &Resolved,
    trials: u64,
    seed: u64,
    k: usize,
    json: bool,
    opts: &BoundOptions,
) -> Result<(), CliError> {
    let kind = match r.kind {
        Kind::Dp => GameKind::DirectProduct,
        Kind::Ds => GameKind::DirectSum,
        other => {
            return Err(CliError::Input(format!(
                "kind: the guessing game takes DP or DS, not {other:?}"
            )));
        }
    };
    if r.states.is_empty() {
        return Err(CliError::Input(
            "states: the guessing game needs at least one state".into(),
        ));
    }
    let ms = &r.setting.measurements;
    let mut results = Vec::new();
    for (label, state) in &r.states {
        let config = GameConfig {
            kind,
            state: state.clone(),
            measurements: (ms[0].clone(), ms[1].clone()),
            lambda: r.lambda.unwrap_or(0.5),
            trials,
            seed,
            k,
            workers: opts.jobs,
        };
        let result = simulate(&config, opts).map_err(|e| CliError::from_core(label, e))?;
        results.push((label, result));
    }
    if json {
        let rows: Vec<_> = results
            .iter()
            .map(|(label, g)| json!({ "label": label, "result": g }))
            .collect();
        print_json(out, &json!({ "trials": trials, "seed": seed, "k": k, "games": rows }));
    } else {
        say!(out, "{kind:?} game, k = {k}, {trials} trials, seed {seed}");
        say!(
            out,
            "{:<20} {:>10} {:>10} {:>10} {:>10}",
            "state",
            "empirical",
            "exact",
            "bound",
            "sigma"
        );
        for (label, g) in &results {
            say!(
                out,
                "{:<20} {:>10.6} {:>10.6} {:>10.6} {:>10.2e}",
                label,
                g.empirical_top_k,
                g.exact_top_k,
                g.bound_value,
                g.std_error
            );
        }
    }
    Ok(())
}

fn cmd_entropy(out: &mut String, r: &Resolved, json: bool, opts: &BoundOptions) -> Result<(), CliError> {
    let bound = r.setting.bound(opts).map_err(|e| CliError::from_core("bound", e))?;
    let flat = &bound.flattened;
    let eval = |m: Measure, x: &majur::lattice::WeightVector| m.evaluate(x).ok();
    let bound_values: Vec<Option<f64>> = Measure::ALL.iter().map(|&m| eval(m, flat)).collect();
    let mut rows = Vec::new();
    for (label, state) in &r.states {
        let joint = r.setting.joint(state).map_err(|e| CliError::from_core(label, e))?;
        let values: Vec<Option<f64>> = Measure::ALL.iter().map(|&m| eval(m, &joint)).collect();
        rows.push((label.clone(), values));
    }
    let symbol = format!("F({})", bound.kind.symbol());
    let show = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.6}"));
    if json {
        let names: Vec<_> = Measure::ALL.iter().map(|m| json!(m)).collect();
        let states: Vec<_> = rows
            .iter()
            .map(|(label, values)| {
                let gaps: Vec<Option<f64>> = values
                    .iter()
                    .zip(&bound_values)
                    .map(|(v, b)| Some((*v)? - (*b)?))
                    .collect();
                json!({ "label": label, "values": values, "gaps": gaps })
            })
            .collect();
        print_json(
            out,
            &json!({ "measures": names, "bound": symbol, "bound_values": bound_values, "states": states }),
        );
    } else {
        say!(out, "{:<20} {:>12} {:>12} {:>12}", "vector", "shannon", "U", "V");
        let mut line = |label: &str, v: &[Option<f64>]| {
            say!(
                out,
                "{:<20} {:>12} {:>12} {:>12}",
                label,
                show(v[0]),
                show(v[1]),
                show(v[2])
            );
        };
        line(&symbol, &bound_values);
        for (label, values) in &rows {
            line(label, values);
            let gaps: Vec<Option<f64>> = values
                .iter()
                .zip(&bound_values)
                .map(|(v, b)| Some((*v)? - (*b)?))
                .collect();
            line("  gap", &gaps);
        }
    }
    Ok(())
}
