//! Experiment drivers behind the `codeball` command line: each command
//! writes CSV data files with metadata comments plus JSON sidecars.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

use crate::error::{Error, Result};
pub use commands::run;
pub use config::{Command, ExperimentConfig};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a verification or computation fails.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for an unusable configuration.
pub const EXIT_BAD_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "codeball", about = "Krawtchouk-weighted dual-code walks and decoding experiments")]
pub struct Cli {
    pub command: Command,
    /// key = value file applied before the flags below
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Metropolis steps per chain, burn-in included (accepts 1e8)
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long)]
    pub burn_in: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Code file with a header line "n k" followed by generator rows
    #[arg(long)]
    pub code: Option<PathBuf>,
    #[arg(long)]
    pub grid_step: Option<usize>,
    /// Comma-separated radii for fidelity-sweep
    #[arg(long)]
    pub b_values: Option<String>,
    #[arg(long)]
    pub k_per_b: Option<usize>,
    /// Central window "lo,hi" for spectrum
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Use 10^10-step chains
    #[arg(long)]
    pub full_scale: bool,
    /// Flip one Krawtchouk sign during oracle-verify
    #[arg(long)]
    pub inject_fault: bool,
}

impl Cli {
    /// Defaults, then the config file, then explicit flags.
    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::new(self.command);
        if let Some(path) = &self.config {
            c.apply_text(&std::fs::read_to_string(path)?)?;
            // The positional command wins over a command key in the file.
            c.command = self.command;
        }
        let mut set = |key: &str, value: Option<String>| value.map_or(Ok(()), |v| c.set(key, &v));
        set("n", self.n.map(|v| v.to_string()))?;
        set("k", self.k.map(|v| v.to_string()))?;
        set("b", self.b.map(|v| v.to_string()))?;
        set("steps", self.steps.clone())?;
        set("burn_in", self.burn_in.clone())?;
        set("trials", self.trials.map(|v| v.to_string()))?;
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("epsilon", self.epsilon.map(|v| v.to_string()))?;
        set("out", self.out.as_ref().map(|p| p.display().to_string()))?;
        set("code", self.code.as_ref().map(|p| p.display().to_string()))?;
        set("grid_step", self.grid_step.map(|v| v.to_string()))?;
        set("b_values", self.b_values.clone())?;
        set("k_per_b", self.k_per_b.map(|v| v.to_string()))?;
        set("window", self.window.clone())?;
        set("max_n", self.max_n.map(|v| v.to_string()))?;
        if self.full_scale {
            c.steps = config::FULL_SCALE_STEPS;
        }
        if self.inject_fault {
            c.inject_fault = true;
        }
        Ok(c)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_BAD_CONFIG } else { EXIT_OK };
        }
    };
    let config = match cli.to_config().and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_CONFIG;
        }
    };
    match run(&config) {
        Ok(summary) => {
            println!("{}", serde_json::to_string_pretty(&summary).unwrap_or_default());
            EXIT_OK
        }
        Err(e @ Error::VerificationFailure(_)) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}
