//! `olb`: simulate online load balancing games, check regret bounds, and
//! cross-validate the oracles.
//!
//! Exit codes: 0 success, 1 bound violation, 2 invalid configuration or
//! arguments, 3 internal oracle failure.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use olb_cli::config::{EnvSpec, GameConfig, PlayerSpec};
use olb_cli::envs::build_env;
use olb_cli::players::build_player;
use olb_cli::report::{check_rows, check_trace, BoundReport};
use olb_cli::selftest;
use olb_cli::trace_io::{read_trace_csv, write_trace_csv, write_trace_json};
use olb_core::engine::{run_game, RegretTrace};

const EXIT_BOUND_VIOLATION: u8 = 1;
const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_ORACLE_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "olb",
    about = "Online load balancing simulator: adversarial makespan games, regret accounting, bound checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and write its trace CSV.
    Run(RunArgs),
    /// Play one configuration across several horizons and summarize scaling.
    Sweep(SweepArgs),
    /// Re-check a trace CSV against the theoretical regret bound.
    CheckBound(CheckBoundArgs),
    /// Cross-validate the analytic oracles against brute-force grids.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of servers.
    #[arg(long)]
    k: Option<usize>,
    /// RNG seed for the environment and the support solver restarts.
    #[arg(long)]
    seed: Option<u64>,
    /// Environment: iid_uniform, bernoulli, rotating_spike, adaptive_targeted.
    #[arg(long)]
    env: Option<String>,
    /// Spike period for rotating_spike.
    #[arg(long)]
    period: Option<usize>,
    /// Per-server rates for bernoulli, comma separated.
    #[arg(long, value_delimiter = ',')]
    rates: Option<Vec<f64>>,
    /// Player: algorithm1, static_uniform, hindsight_follower.
    #[arg(long)]
    player: Option<String>,
    /// Learning-rate override for both learner copies.
    #[arg(long)]
    eta: Option<f64>,
    /// Support-oracle tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Horizon (number of rounds).
    #[arg(long)]
    t: Option<usize>,
    /// Trace CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump the full per-round records as JSON.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Horizons to sweep, comma separated (e.g. 1000,4000,16000).
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<usize>,
    /// Summary CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for the per-horizon trace CSVs.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CheckBoundArgs {
    /// Trace CSV to check.
    #[arg(long)]
    trace: PathBuf,
    /// Server count of the run that produced the trace.
    #[arg(long)]
    k: usize,
    /// Support-oracle tolerance used in the run.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_env(name: &str, period: Option<usize>, rates: Option<&[f64]>, k: usize) -> Result<EnvSpec> {
    match name {
        "iid_uniform" => Ok(EnvSpec::IidUniform),
        "bernoulli" => Ok(EnvSpec::Bernoulli {
            rates: rates.map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.5; k]),
        }),
        "rotating_spike" => Ok(EnvSpec::RotatingSpike {
            period: period.unwrap_or(1),
        }),
        "adaptive_targeted" => Ok(EnvSpec::AdaptiveTargeted),
        other => bail!("unknown environment {other:?}"),
    }
}

fn parse_player(name: &str) -> Result<PlayerSpec> {
    match name {
        "algorithm1" => Ok(PlayerSpec::Algorithm1),
        "static_uniform" => Ok(PlayerSpec::StaticUniform),
        "hindsight_follower" => Ok(PlayerSpec::HindsightFollower),
        other => bail!("unknown player {other:?}"),
    }
}

/// File config (when given) overlaid with CLI flags.
fn assemble_config(common: &CommonArgs, t: Option<usize>, out: Option<&PathBuf>) -> Result<GameConfig> {
    let mut cfg = match &common.config {
        Some(path) => GameConfig::from_json_file(path)?,
        None => GameConfig {
            k: 10,
            t: 10_000,
            seed: 0,
            env: EnvSpec::IidUniform,
            player: PlayerSpec::Algorithm1,
            eta_override: None,
            tol: 1e-6,
            out_path: PathBuf::from("trace.csv"),
        },
    };
    if let Some(k) = common.k {
        cfg.k = k;
    }
    if let Some(t) = t {
        cfg.t = t;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(name) = &common.env {
        cfg.env = parse_env(name, common.period, common.rates.as_deref(), cfg.k)?;
    } else if let Some(period) = common.period {
        if let EnvSpec::RotatingSpike { period: p } = &mut cfg.env {
            *p = period;
        }
    }
    if let Some(name) = &common.player {
        cfg.player = parse_player(name)?;
    }
    if let Some(eta) = common.eta {
        cfg.eta_override = Some(eta);
    }
    if let Some(tol) = common.tol {
        cfg.tol = tol;
    }
    if let Some(out) = out {
        cfg.out_path = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn play(cfg: &GameConfig) -> Result<RegretTrace> {
    let mut env = build_env(&cfg.env, cfg.k, cfg.seed);
    let mut player = build_player(cfg).map_err(|e| anyhow!("building player: {e}"))?;
    run_game(cfg.k, cfg.t, player.as_mut(), env.as_mut()).map_err(|e| anyhow!("game failed: {e}"))
}

fn cmd_run(args: &RunArgs) -> Result<u8> {
    let cfg = match assemble_config(&args.common, args.t, args.out.as_ref()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("invalid config: {e:#}");
            return Ok(EXIT_INVALID_CONFIG);
        }
    };
    let trace = match play(&cfg) {
        Ok(trace) => trace,
        Err(e) => {
            eprintln!("{e:#}");
            return Ok(EXIT_ORACLE_FAILURE);
        }
    };
    write_trace_csv(&trace, &cfg.out_path)?;
    if let Some(json) = &args.json_out {
        write_trace_json(&trace, json)?;
    }
    println!(
        "wrote {} rounds to {}",
        trace.horizon(),
        cfg.out_path.display()
    );
    let report = check_trace(&trace, cfg.tol);
    println!("{report}");
    if cfg.player == PlayerSpec::Algorithm1 && !report.pass {
        eprintln!(
            "bound violated; trace kept at {} for inspection",
            cfg.out_path.display()
        );
        return Ok(EXIT_BOUND_VIOLATION);
    }
    Ok(0)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8> {
    if args.t.is_empty() {
        eprintln!("sweep needs at least one horizon");
        return Ok(EXIT_INVALID_CONFIG);
    }
    let base = match assemble_config(&args.common, None, None) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("invalid config: {e:#}");
            return Ok(EXIT_INVALID_CONFIG);
        }
    };
    let mut horizons = args.t.clone();
    horizons.sort_unstable();
    horizons.dedup();

    let jobs = args
        .jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(usize::from)
                .unwrap_or(1)
        })
        .clamp(1, horizons.len().max(1));

    // One engine per worker; results keyed by horizon, merged in order.
    let mut results: Vec<(usize, Result<RegretTrace>)> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for chunk in horizons.chunks(horizons.len().div_ceil(jobs)) {
            let base = &base;
            handles.push(scope.spawn(move || {
                chunk
                    .iter()
                    .map(|&t| {
                        let mut cfg = base.clone();
                        cfg.t = t;
                        (t, play(&cfg))
                    })
                    .collect::<Vec<_>>()
            }));
        }
        for handle in handles {
            results.extend(handle.join().expect("sweep worker panicked"));
        }
    });
    results.sort_by_key(|(t, _)| *t);

    let mut summary = String::from("t,regret,bound,ratio\n");
    let mut any_violation = false;
    let mut prev_ratio: Option<f64> = None;
    let mut ratio_increased = false;
    println!("{:>10} {:>14} {:>14} {:>8}", "t", "regret", "bound", "ratio");
    for (t, outcome) in &results {
        let trace = match outcome {
            Ok(trace) => trace,
            Err(e) => {
                eprintln!("horizon {t}: {e:#}");
                return Ok(EXIT_ORACLE_FAILURE);
            }
        };
        let report = check_trace(trace, base.tol);
        any_violation |= !report.pass;
        if let Some(p) = prev_ratio {
            ratio_increased |= report.ratio > p;
        }
        prev_ratio = Some(report.ratio);
        println!(
            "{:>10} {:>14.6} {:>14.6} {:>8.4}",
            t, report.final_regret, report.bound, report.ratio
        );
        summary.push_str(&format!(
            "{},{:.11e},{:.11e},{:.11e}\n",
            t, report.final_regret, report.bound, report.ratio
        ));
        if let Some(dir) = &args.trace_dir {
            std::fs::create_dir_all(dir)?;
            write_trace_csv(trace, &dir.join(format!("trace_t{t}.csv")))?;
        }
    }
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("sweep.csv"));
    std::fs::write(&out, summary).with_context(|| format!("writing {}", out.display()))?;
    println!("summary written to {}", out.display());
    if ratio_increased {
        println!("note: regret/bound ratio increased somewhere along the sweep");
    }
    if base.player == PlayerSpec::Algorithm1 && any_violation {
        return Ok(EXIT_BOUND_VIOLATION);
    }
    Ok(0)
}

fn cmd_check_bound(args: &CheckBoundArgs) -> Result<u8> {
    if args.k < 2 {
        eprintln!("k must be at least 2");
        return Ok(EXIT_INVALID_CONFIG);
    }
    let rows = match read_trace_csv(&args.trace) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("unreadable trace: {e:#}");
            return Ok(EXIT_INVALID_CONFIG);
        }
    };
    let report: BoundReport = check_rows(args.k, &rows, args.tol.unwrap_or(1e-6));
    println!("{report}");
    if !report.pass {
        eprintln!("bound violated; inspect {}", args.trace.display());
        return Ok(EXIT_BOUND_VIOLATION);
    }
    Ok(0)
}

fn cmd_selftest(args: &SelftestArgs) -> Result<u8> {
    let mut all_pass = true;
    for check in selftest::run_all(args.seed.unwrap_or(2024)) {
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        println!("{verdict} {} ({})", check.name, check.detail);
        all_pass &= check.pass;
    }
    Ok(if all_pass { 0 } else { EXIT_ORACLE_FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::CheckBound(args) => cmd_check_bound(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID_CONFIG)
        }
    }
}
