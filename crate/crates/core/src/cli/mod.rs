//! Command-line experiment runner.
//!
//! Exit codes: 0 success, 2 configuration error, 1 runtime failure.

pub mod config;
pub mod experiments;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use crate::error::Error;
use config::{ExperimentConfig, Format, RawConfig, SEED_ENV};

pub use experiments::run_experiment;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "phasebit",
    version,
    about = "Virtual qubits from a shared random phase",
    long_about = "Runs one experiment per invocation and writes a CSV or JSON table.\n\
                  Commands: curve, chsh, init, gates, compare."
)]
struct Args {
    /// Experiment to run (curve, chsh, init, gates, compare); may also come from --config
    command: Option<String>,

    /// Flat `key = value` config file; command-line flags override it
    #[arg(long, short = 'c')]
    config: Option<PathBuf>,

    /// RNG seed (falls back to $PHASEBIT_SEED, then 0)
    #[arg(long)]
    seed: Option<String>,

    #[arg(long)]
    trials: Option<String>,

    /// Phase model: iid or oscillator
    #[arg(long)]
    model: Option<String>,

    /// Comma-separated angles in radians; `pi` multiples allowed (e.g. 0,pi/2,pi/4,3pi/4)
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,

    /// Output path, `-` for stdout
    #[arg(long)]
    out: Option<String>,

    /// csv or json
    #[arg(long)]
    format: Option<String>,

    /// Worker threads; never changes the results
    #[arg(long)]
    workers: Option<String>,

    #[arg(long)]
    ensemble_size: Option<String>,

    #[arg(long)]
    frequency_spread: Option<String>,

    #[arg(long)]
    burn_in: Option<String>,

    #[arg(long)]
    signal_index: Option<String>,

    /// CNOT control qubit for `gates` (defaults to the signal qubit)
    #[arg(long)]
    control: Option<String>,

    /// chsh sampling: shared or independent
    #[arg(long)]
    sampling: Option<String>,
}

impl Args {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let pairs = [
            ("command", &self.command),
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("model", &self.model),
            ("angles", &self.angles),
            ("out", &self.out),
            ("format", &self.format),
            ("workers", &self.workers),
            ("ensemble_size", &self.ensemble_size),
            ("frequency_spread", &self.frequency_spread),
            ("burn_in", &self.burn_in),
            ("signal_index", &self.signal_index),
            ("control", &self.control),
            ("sampling", &self.sampling),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }
}

/// Merge the config file (if any), flags, and the seed environment variable.
fn build_config(args: &Args) -> Result<ExperimentConfig, Error> {
    let mut raw = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    for (k, v) in args.overrides() {
        raw.set(k, v);
    }
    let env_seed = std::env::var(SEED_ENV).ok();
    raw.resolve(env_seed.as_deref())
}

/// Run a validated config and write its table. Returns the process exit code.
pub fn run(config: &ExperimentConfig) -> i32 {
    let result = run_experiment(config).and_then(|table| match config.format {
        Format::Csv => output::emit_csv(&table, &config.output),
        Format::Json => output::emit_json(&table, &config.output),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e @ Error::Config(_)) => {
            eprintln!("phasebit: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("phasebit: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Entry point shared by the binary and tests.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("phasebit: {}", first.trim_start_matches("error: "));
            return EXIT_CONFIG;
        }
    };
    match build_config(&args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            eprintln!("phasebit: {e}");
            EXIT_CONFIG
        }
    }
}
