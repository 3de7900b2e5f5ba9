use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info};

use rcslab_cli::config::{ExperimentConfig, Kind};
use rcslab_cli::runner::{replay, run_experiment};
use rcslab_cli::verify::{verify_suite, verify_suite_with, Fault};
use rcslab_cli::CliError;

/// Seeded random-circuit sampling experiments.
///
/// Results go to stdout as JSON; progress goes to stderr. Exit status is 0
/// on success, 1 when a check fails and 2 for usage or configuration errors.
#[derive(Debug, Parser)]
#[command(name = "rcslab", version)]
struct Cli {
    /// Experiment config (key = value text with [sections], or JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Root directory for output; overrides the config. Default `results`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run the verification suite first and stop if it fails.
    #[arg(long, global = true)]
    verify: bool,
    /// Config override, e.g. `--set circuit.n=10`. Repeatable.
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ideal output distribution of one circuit, plus ideal samples.
    Simulate,
    /// Samples from the ideal, uniform or mixture distribution.
    Sample,
    /// Samples from Pauli error-injection trajectories.
    NoisySample,
    /// XEB, V and MLE fidelity estimates over one or more circuits.
    Estimate,
    /// Product-formula fidelity prediction from gate counts (no simulation).
    Predict,
    /// Walsh spectrum, noise correlation and low-degree truncation.
    Walsh,
    /// Noise correlation against flip rate for several qubit counts.
    CorrelationScan,
    /// Semi-matching sampler on a bipartite graph.
    MatchSample,
    /// Randomized perfect-matching test on a bipartite graph.
    MatchTest,
    /// Run the fast-path vs brute-force verification suite.
    Verify {
        #[arg(long, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Re-run a stored record and compare everything but the timestamp.
    Replay { record: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FaultArg {
    WalshNormalization,
}

impl Command {
    fn kind(&self) -> Option<Kind> {
        Some(match self {
            Command::Simulate => Kind::Simulate,
            Command::Sample => Kind::Sample,
            Command::NoisySample => Kind::NoisySample,
            Command::Estimate => Kind::Estimate,
            Command::Predict => Kind::Predict,
            Command::Walsh => Kind::Walsh,
            Command::CorrelationScan => Kind::CorrelationScan,
            Command::MatchSample => Kind::MatchSample,
            Command::MatchTest => Kind::MatchTest,
            Command::Verify { .. } | Command::Replay { .. } => return None,
        })
    }
}

fn resolve_config(cli: &Cli, kind: Kind) -> Result<ExperimentConfig, CliError> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    for o in &cli.overrides {
        config.apply_override(o)?;
    }
    match config.experiment.kind {
        Some(k) if k != kind => {
            return Err(CliError::Config(format!("config is for `{k}` but the subcommand is `{kind}`")))
        }
        _ => config.experiment.kind = Some(kind),
    }
    if let Some(seed) = cli.seed {
        config.experiment.seed = Some(seed);
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let seed = cli.seed.unwrap_or(0);
    if cli.verify && !matches!(cli.command, Command::Verify { .. }) {
        let report = verify_suite(seed);
        eprint!("{}", report.to_table());
        if !report.passed() {
            return Err(CliError::CheckFailed(format!("{} verification checks failed", report.failures())));
        }
    }
    match &cli.command {
        Command::Verify { inject_fault } => {
            let fault = inject_fault.map(|FaultArg::WalshNormalization| Fault::WalshNormalization);
            let report = verify_suite_with(seed, fault);
            print!("{}", report.to_table());
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!("{} verification checks failed", report.failures())))
            }
        }
        Command::Replay { record } => {
            let r = replay(record)?;
            info!("{} reproduced", r.id);
            println!("{}", serde_json::to_string_pretty(&r).expect("record serializes"));
            Ok(())
        }
        other => {
            let kind = other.kind().expect("experiment subcommand");
            let config = resolve_config(cli, kind)?;
            let out = cli
                .out
                .clone()
                .or_else(|| config.output.dir.clone())
                .unwrap_or_else(|| PathBuf::from("results"));
            let (record, dir) = run_experiment(&config, &out)?;
            info!("wrote {}", dir.display());
            println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
