//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a Monte Carlo check fails, 2 on any
//! error. Warnings go to stderr; the CSV goes to stdout unless `--csv` is
//! given.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use super::plot;
use super::runner::{self, CliError, RunOptions, RunOutput};

#[derive(Debug, Parser)]
#[command(
    name = "covert-relay",
    version,
    about = "Covert communication over an amplify-and-forward relay"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form detection error and covert rate at the scenario's base values.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Add Monte Carlo columns and a 3-sigma check.
        #[arg(long)]
        verify: bool,
    },
    /// Closed-form columns at every point of the scenario's [sweep] block.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Add Monte Carlo columns and a per-row 3-sigma check.
        #[arg(long)]
        verify: bool,
    },
    /// Covertness-constrained maximum of the effective covert rate.
    Optimize(Common),
    /// Monte Carlo check of the closed forms (sweep if present, else one point).
    Verify(Common),
    /// Constrained optimum averaged over Rayleigh source-relay draws.
    Average(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file.
    #[arg(long, short)]
    pub scenario: PathBuf,
    /// Monte Carlo trials per point (default 1000000), or source-channel
    /// draws for `average` (default 1000).
    #[arg(long, visible_alias = "draws")]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also write a matplotlib script that plots the CSV.
    #[arg(long)]
    pub plot_script: Option<PathBuf>,
}

/// Source-channel draws when `average` is given no `--trials`.
pub const DEFAULT_DRAWS: u64 = 1000;

impl Common {
    fn options(&self, verify: bool) -> RunOptions {
        let defaults = RunOptions::default();
        RunOptions {
            trials: self.trials.unwrap_or(defaults.trials),
            seed: self.seed,
            verify,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(common: &Common, out: &RunOutput) -> Result<(), CliError> {
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let csv = out.table.to_csv();
    match &common.csv {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &common.plot_script {
        let csv_name = common
            .csv
            .as_deref()
            .map_or_else(|| "results.csv".to_string(), |p| p.display().to_string());
        write_file(path, &plot::render(&out.plot, &csv_name))?;
    }
    Ok(())
}

/// Runs one parsed command; `Ok(true)` means every Monte Carlo check passed.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    let (common, out) = match &cli.command {
        Command::Eval { common, verify } => (
            common,
            runner::eval(&runner::load(&common.scenario)?, &common.options(*verify))?,
        ),
        Command::Sweep { common, verify } => (
            common,
            runner::sweep(&runner::load(&common.scenario)?, &common.options(*verify))?,
        ),
        Command::Optimize(c) => (c, runner::optimize(&runner::load(&c.scenario)?)?),
        Command::Verify(c) => (
            c,
            runner::verify(&runner::load(&c.scenario)?, &c.options(true))?,
        ),
        Command::Average(c) => {
            let draws = c.trials.unwrap_or(DEFAULT_DRAWS);
            (
                c,
                runner::average(&runner::load(&c.scenario)?, draws, c.seed)?,
            )
        }
    };
    emit(common, &out)?;
    if out.failures > 0 {
        eprintln!("{} Monte Carlo check(s) failed", out.failures);
    }
    Ok(out.failures == 0)
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
