use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eraser_sim::config::{parse_config_with, Mode, Overrides};
use eraser_sim::oracle::run_oracle_suite;
use eraser_sim::output::Format;
use eraser_sim::parallel::thread_cap_from_env;
use eraser_sim::run::{execute, write_records};
use eraser_sim::SimError;

/// Electronic Mach-Zehnder quantum eraser simulator.
///
/// All angles are in radians, magnetic fields in tesla and areas in m^2.
/// Exit codes: 0 success, 2 configuration error, 3 numerical or degeneracy
/// error, 4 I/O error. ERASER_SIM_THREADS caps sweep parallelism.
#[derive(Parser)]
#[command(name = "eraser-sim", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic probabilities, cross-correlations and duality for one setup.
    Eval(RunArgs),
    /// Sweep one parameter over a grid, optionally sampling each point.
    Sweep(RunArgs),
    /// Monte Carlo coincidence counts for one setup.
    Sample(RunArgs),
    /// Visibility/distinguishability report, optionally with Δφ dephasing.
    Duality(RunArgs),
    /// Cross-check the engine against a brute-force propagator on random setups.
    VerifyOracle {
        /// Number of random setups.
        #[arg(long, default_value_t = 1000)]
        setups: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    config: PathBuf,
    /// Interaction phase in radians (replaces setup.delta_phi / setup.geometry).
    #[arg(long, allow_hyphen_values = true)]
    delta_phi: Option<f64>,
    /// Shots per sample or sweep point.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn run_config(mode: Mode, args: RunArgs) -> Result<(), SimError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| SimError::Io {
        path: args.config.clone(),
        source,
    })?;
    let overrides = Overrides {
        mode: Some(mode),
        delta_phi: args.delta_phi,
        shots: args.shots,
        seed: args.seed,
        out: args.out,
        format: args.format,
    };
    let cfg = parse_config_with(&text, &overrides)?;
    let threads = thread_cap_from_env()?;
    let records = execute(&cfg, threads)?;
    write_records(&records, &cfg, cfg.output.path.as_deref())
}

fn verify(setups: usize, seed: u64) -> Result<(), SimError> {
    let report = run_oracle_suite(setups, seed);
    println!("oracle suite: {} random setups, seed {seed}", report.setups);
    for check in &report.checks {
        println!(
            "  [{}] {:<42} max error {:.3e} over {} evaluations",
            if check.passed() { "PASS" } else { "FAIL" },
            check.name,
            check.max_error,
            check.evaluated
        );
    }
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name)
            .collect();
        Err(SimError::OracleMismatch(failed.join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => run_config(Mode::Eval, a),
        Command::Sweep(a) => run_config(Mode::Sweep, a),
        Command::Sample(a) => run_config(Mode::Sample, a),
        Command::Duality(a) => run_config(Mode::Duality, a),
        Command::VerifyOracle { setups, seed } => verify(setups, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("eraser-sim: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
