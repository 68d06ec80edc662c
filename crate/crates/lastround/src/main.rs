//! Thin command-line front end: one-off runs (CSV + JSON out) and the canned
//! preset experiments. Exit code 0 means every assertion passed, 1 means an
//! assertion failed, 2 means the invocation or configuration was invalid.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use lastround::engine::{ColumnConfig, GameSpec, RowConfig, RunConfig};
use lastround::io::{save_summary_json, save_trajectory_csv, RunSummary};
use lastround::learners::{RowAlgorithm, StepSizeSchedule};
use lastround::metrics::{self, RateMetric};
use lastround::policies::{ColumnPolicyKind, StepMode};
use lastround::presets::{self, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ArgRowAlgo {
    Mwu,
    Ftrl,
    Lmwu,
    Omwu,
    Adahedge,
}

impl From<ArgRowAlgo> for RowAlgorithm {
    fn from(a: ArgRowAlgo) -> Self {
        match a {
            ArgRowAlgo::Mwu => RowAlgorithm::Mwu,
            ArgRowAlgo::Ftrl => RowAlgorithm::FtrlEuclid,
            ArgRowAlgo::Lmwu => RowAlgorithm::Lmwu,
            ArgRowAlgo::Omwu => RowAlgorithm::Omwu,
            ArgRowAlgo::Adahedge => RowAlgorithm::AdaHedge,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ArgColAlgo {
    Lrca,
    Lrca2,
    LrcaAdahedge,
    FixedMinimax,
    BestResponseLast,
    MwuColumn,
}

impl From<ArgColAlgo> for ColumnPolicyKind {
    fn from(a: ArgColAlgo) -> Self {
        match a {
            ArgColAlgo::Lrca => ColumnPolicyKind::Lrca,
            ArgColAlgo::Lrca2 => ColumnPolicyKind::Lrca2,
            ArgColAlgo::LrcaAdahedge => ColumnPolicyKind::LrcaAdaHedge,
            ArgColAlgo::FixedMinimax => ColumnPolicyKind::FixedMinimax,
            ArgColAlgo::BestResponseLast => ColumnPolicyKind::BestResponseLast,
            ArgColAlgo::MwuColumn => ColumnPolicyKind::MwuColumn,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ArgStepMode {
    Robust,
    OptimalMwu,
    LogDamped,
}

impl From<ArgStepMode> for StepMode {
    fn from(a: ArgStepMode) -> Self {
        match a {
            ArgStepMode::Robust => StepMode::Robust,
            ArgStepMode::OptimalMwu => StepMode::OptimalMwu,
            ArgStepMode::LogDamped => StepMode::LogDamped,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ArgSchedule {
    Constant,
    InverseSqrt,
}

/// Simulate repeated zero-sum play between a no-regret row learner and an
/// informed column player.
///
/// Per-game seeds in sweeps and presets are derived from --seed with a
/// splitmix64 mix of the run index, so one seed pins every game drawn.
#[derive(Parser, Debug)]
#[command(name = "lastround", version, about)]
struct Cli {
    /// Game: `random-uniform`, `matching-pennies`, `derived-2x2`, or a path
    /// to a CSV payoff matrix (entries in [0,1], one row per line)
    #[arg(long)]
    game: Option<String>,

    /// Row count for generated games
    #[arg(long)]
    rows: Option<usize>,

    /// Column count for generated games
    #[arg(long)]
    cols: Option<usize>,

    /// Master seed (games and sweeps derive from it; dynamics are seed-free)
    #[arg(long)]
    seed: Option<u64>,

    /// Row player's learning algorithm
    #[arg(long, value_enum)]
    row_algo: Option<ArgRowAlgo>,

    /// Row player's step size (constant schedule)
    #[arg(long)]
    mu: Option<f64>,

    /// Row player's step-size schedule
    #[arg(long, value_enum)]
    schedule: Option<ArgSchedule>,

    /// Column player's policy
    #[arg(long, value_enum)]
    col_algo: Option<ArgColAlgo>,

    /// Step size of the MWU baseline column
    #[arg(long)]
    col_mu: Option<f64>,

    /// Exploit-step scaling for LRCA
    #[arg(long, value_enum)]
    step_mode: Option<ArgStepMode>,

    /// Number of rounds
    #[arg(long)]
    rounds: Option<u64>,

    /// Output directory (default: $LASTROUND_OUT, then ./lastround-out)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Run a canned experiment instead of a single game
    #[arg(long)]
    preset: Option<String>,

    /// List available presets and exit
    #[arg(long)]
    list_presets: bool,
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os("LASTROUND_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("lastround-out"))
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap uses exit code 2 for usage errors, 0 for --help/--version
            e.exit();
        }
    };

    if cli.list_presets {
        for name in presets::preset_names() {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }

    if let Some(mu) = cli.mu {
        if mu < 0.0 || !mu.is_finite() {
            return usage_error("--mu must be a finite non-negative number");
        }
    }
    if let Some(mu) = cli.col_mu {
        if mu < 0.0 || !mu.is_finite() {
            return usage_error("--col-mu must be a finite non-negative number");
        }
    }
    if cli.rounds == Some(0) {
        return usage_error("--rounds must be at least 1");
    }

    if let Some(name) = &cli.preset {
        // presets fix the whole configuration; only --seed and --out combine
        let conflicting = cli.game.is_some()
            || cli.rows.is_some()
            || cli.cols.is_some()
            || cli.row_algo.is_some()
            || cli.mu.is_some()
            || cli.schedule.is_some()
            || cli.col_algo.is_some()
            || cli.col_mu.is_some()
            || cli.step_mode.is_some()
            || cli.rounds.is_some();
        if conflicting {
            return usage_error("--preset cannot be combined with run-configuration flags");
        }
        let seed = cli.seed.unwrap_or(DEFAULT_SEED);
        let report = match presets::run_preset(name, seed) {
            Ok(r) => r,
            Err(lastround::Error::UnknownPreset(p)) => {
                return usage_error(&format!(
                    "unknown preset `{p}`; try --list-presets"
                ));
            }
            Err(e) => return usage_error(&e.to_string()),
        };
        print!("{}", report.render());
        println!(
            "{}: {} ({:.2}s)",
            report.preset,
            if report.passed() { "PASS" } else { "FAIL" },
            report.runtime_seconds
        );
        let dir = out_dir(&cli);
        if let Err(e) = std::fs::create_dir_all(&dir) {
            return usage_error(&format!("cannot create {}: {e}", dir.display()));
        }
        let path = dir.join(format!("{name}.json"));
        match std::fs::File::create(&path)
            .map_err(lastround::Error::from)
            .and_then(|f| {
                serde_json::to_writer_pretty(f, &report)
                    .map_err(|e| lastround::Error::Config(e.to_string()))
            }) {
            Ok(()) => println!("report: {}", path.display()),
            Err(e) => return usage_error(&e.to_string()),
        }
        return if report.passed() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        };
    }

    // single run
    let game = match cli.game.as_deref() {
        None | Some("random-uniform") => GameSpec::RandomUniform {
            n: cli.rows.unwrap_or(5),
            m: cli.cols.unwrap_or(5),
        },
        Some("matching-pennies") => GameSpec::MatchingPennies {
            n: cli.rows.unwrap_or(2),
        },
        Some("derived-2x2") => GameSpec::Derived2x2,
        Some(path) => GameSpec::FromFile {
            path: PathBuf::from(path),
        },
    };
    let schedule = match cli.schedule.unwrap_or(ArgSchedule::Constant) {
        ArgSchedule::Constant => StepSizeSchedule::Constant {
            mu: cli.mu.unwrap_or(0.5),
        },
        ArgSchedule::InverseSqrt => {
            if cli.mu.is_some() {
                return usage_error("--mu has no effect with --schedule inverse-sqrt");
            }
            StepSizeSchedule::InverseSqrt
        }
    };
    let config = RunConfig {
        game,
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        row: RowConfig {
            algorithm: cli.row_algo.unwrap_or(ArgRowAlgo::Mwu).into(),
            schedule,
        },
        column: ColumnConfig {
            policy: cli.col_algo.unwrap_or(ArgColAlgo::Lrca).into(),
            step_mode: cli.step_mode.unwrap_or(ArgStepMode::Robust).into(),
            mwu_mu: cli.col_mu.unwrap_or(0.1),
        },
        rounds: cli.rounds.unwrap_or(1000),
    };

    let traj = match lastround::run(&config) {
        Ok(t) => t,
        Err(e) => return usage_error(&e.to_string()),
    };

    let t = traj.records.len() as u64;
    let fits = if t >= 1 << 12 {
        let hi = 63 - t.leading_zeros() as u32;
        let cks = metrics::dyadic_checkpoints(8, hi.max(12));
        let pts = metrics::metric_at_checkpoints(&traj, RateMetric::InstantRegret, &cks);
        metrics::fit_rate(&pts, RateMetric::InstantRegret)
            .map(|f| vec![f])
            .unwrap_or_default()
    } else {
        Vec::new()
    };
    let summary = RunSummary::from_trajectory(&traj, fits);
    println!(
        "game value v = {:.6}; after {} rounds: f-gap {:.3e}, RE {:.3e}, IR_T {:.4}, R_T {:.4}",
        summary.value,
        summary.rounds,
        summary.final_f_gap,
        summary.final_re_to_eq,
        summary.instant_regret,
        summary.cumulative_regret,
    );
    if summary.outcome.switched {
        println!(
            "combined policy switched to AdaHedge at round {}",
            summary.outcome.switch_round.unwrap_or(0)
        );
    }

    let dir = out_dir(&cli);
    if let Err(e) = std::fs::create_dir_all(&dir) {
        return usage_error(&format!("cannot create {}: {e}", dir.display()));
    }
    let csv_path = dir.join("trajectory.csv");
    let json_path = dir.join("summary.json");
    if let Err(e) = save_trajectory_csv(&traj, &csv_path) {
        return usage_error(&e.to_string());
    }
    if let Err(e) = save_summary_json(&summary, &json_path) {
        return usage_error(&e.to_string());
    }
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    ExitCode::SUCCESS
}
