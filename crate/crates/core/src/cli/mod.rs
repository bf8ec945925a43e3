//! Scenario-driven command-line runner.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

pub use commands::{cmd_convergence, cmd_cutoff_temp, cmd_simulate, cmd_timescales};
pub use config::ScenarioConfig;
pub use output::Outcome;

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "decolab", version, about = "Decoherence and dissipation timescales of a bosonic mode in an oscillator bath")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Scenario file (TOML).
    pub config: PathBuf,
    /// Output directory [default: out/<scenario name>].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Separability margin, overriding `timescales.margin`.
    #[arg(long)]
    pub margin: Option<f64>,
    /// `section.key=value`, applied to the scenario before validation. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact evolution against the order-2 predictions.
    Simulate(Common),
    /// Markovian timescales, ratio identities and validity conditions.
    Timescales(Common),
    /// Log-log order fits of the exact-minus-Born residuals over a coupling grid.
    Convergence(Common),
    /// Temperatures at which the reservoir separability condition flips.
    CutoffTemp(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Simulate(c) | Command::Timescales(c) | Command::Convergence(c) | Command::CutoffTemp(c) => c,
        }
    }
}

/// Load, run and write one command. Returns the written directory.
pub fn execute(command: &Command) -> Result<(PathBuf, Outcome)> {
    let common = command.common();
    let mut overrides = common.overrides.clone();
    if let Some(m) = common.margin {
        overrides.push(format!("timescales.margin={m:?}"));
    }
    let cfg = ScenarioConfig::load(&common.config, &overrides)?;
    let start = Instant::now();
    let outcome = match command {
        Command::Simulate(_) => cmd_simulate(&cfg)?,
        Command::Timescales(_) => cmd_timescales(&cfg)?,
        Command::Convergence(_) => cmd_convergence(&cfg)?,
        Command::CutoffTemp(_) => cmd_cutoff_temp(&cfg)?,
    };
    let elapsed = start.elapsed().as_secs_f64();
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    outcome.write(&dir, &cfg.name, &cfg.hash, elapsed)?;
    Ok((dir, outcome))
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok((dir, outcome)) => {
            print!("{}", outcome.report.render_text(&format!("decolab {}", outcome.command)));
            println!("\nwrote {}", dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
