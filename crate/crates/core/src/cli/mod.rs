//! Configuration-driven front end.
//!
//! ```text
//! dyson run <config> [--gamma G] [--dt DT] [--out PATH]
//! dyson verify <config>
//! dyson sweep <config> --param gamma|omega|dt --values v1,v2,...
//! ```
//!
//! Exit status is 0 when every check passes, 1 on a failed check or a
//! numerical error, 2 on an invalid configuration.

pub mod config;
pub mod output;
pub mod report;
pub mod scenario;
pub mod sweep;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

pub use config::{Format, OutputKind, Overrides, Scenario, ScenarioConfig, Tolerances};
pub use report::{Check, VerificationReport};
pub use scenario::{evaluate, Sample, ScenarioRun, Summary};
pub use sweep::{sweep, SweepParameter, SweepRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dyson", version, about = "Time-dependent Dyson maps for two-level systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario, write the requested series and print the report.
    Run(CommonArgs),
    /// Print the report only.
    Verify(CommonArgs),
    /// Run the scenario once per value and write an aggregate table.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML scenario file.
    pub config: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    fn load(&self) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::load(&self.config)?;
        cfg.apply(&Overrides {
            gamma: self.gamma,
            dt: self.dt,
            out: self.out.clone(),
        });
        Ok(cfg)
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::ConfigInvalid(_)
            | Error::InvalidParameter(_)
            | Error::InvalidGrid(_)
            | Error::UnsupportedHamiltonian(_)
    )
}

/// Runs a parsed command line, printing reports to `out` and errors to
/// stderr, and returns the exit code.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> i32 {
    match dispatch(cli, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            if is_config_error(&e) {
                EXIT_CONFIG
            } else {
                EXIT_CHECK_FAILED
            }
        }
    }
}

fn dispatch<W: Write>(cli: Cli, out: &mut W) -> Result<bool> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load()?.resolve()?;
            let path = match (&cfg.out_path, cfg.outputs.is_empty()) {
                (_, true) => None,
                (Some(p), false) => Some(p.clone()),
                (None, false) => {
                    return Err(Error::ConfigInvalid("outputs requested but no out_path".into()))
                }
            };
            let run = evaluate(&cfg)?;
            match path {
                Some(_) if run.samples.is_empty() => log::warn!("no samples to write"),
                Some(path) => {
                    output::write_series(&cfg, &run.samples, &path)?;
                    log::info!("wrote {}", path.display());
                }
                None => log::info!("no outputs requested"),
            }
            writeln!(out, "{}", run.report)?;
            Ok(run.report.passed())
        }
        Command::Verify(args) => {
            let cfg = args.load()?.resolve()?;
            let run = evaluate(&cfg)?;
            writeln!(out, "{}", run.report)?;
            Ok(run.report.passed())
        }
        Command::Sweep {
            common,
            param,
            values,
        } => {
            let template = common.load()?;
            let parameter: SweepParameter = param.parse()?;
            let values = sweep::parse_values(&values)?;
            let rows = sweep(&template, parameter, &values)?;
            match &template.out_path {
                Some(path) => output::write_atomically(path, |f| sweep::write_table(f, &rows))?,
                None => sweep::write_table(&mut *out, &rows)?,
            }
            Ok(rows.iter().all(|r| r.passed))
        }
    }
}
