//! `qfock`: verification suites and exports for q-deformed Fock space computations.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 for an
//! invalid configuration.

mod config;
mod export;
mod report;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use qfock::combinat::Family;
use qfock::{Coeff, Deformation, FockSpace};

use config::{ConfigError, Format, Mode, RawConfig, RunConfig, Setup};
use export::{Export, Exported};
use report::{emit, report_table, Report};
use verify::{Ctx, Suite};

#[derive(Parser)]
#[command(name = "qfock", version, about = "Exact checks on the q-deformed Fock space")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Number of variables.
    #[arg(long, global = true, default_value_t = 2)]
    d: usize,
    /// Scalar q as a fraction ("1/2") or decimal; "q" in symbolic mode. Defaults to 1/2.
    #[arg(long, global = true, conflicts_with = "q_matrix", allow_hyphen_values = true)]
    q: Option<String>,
    /// JSON file {"d": .., "entries": [[..]]} with a symmetric q_ij matrix.
    #[arg(long, global = true)]
    q_matrix: Option<PathBuf>,
    /// Truncation level L of the Fock space.
    #[arg(long, global = true, default_value_t = 6)]
    level: usize,
    /// Truncation M of the conjugate series (needs 2M + 1 <= L).
    #[arg(long, global = true, default_value_t = 2)]
    series_m: usize,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Write a computed object.
    Export {
        #[arg(value_enum)]
        what: Export,
        /// Partition family for `export partitions`.
        #[arg(long, default_value = "B")]
        family: Family,
        /// Number of vertices for `export partitions`.
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
}

enum Failure {
    Config(ConfigError),
    Io(io::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn output(cfg: &RunConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn verify_with<C: Coeff>(cfg: &RunConfig, def: Deformation<C>, suite: Suite) -> Result<bool, Failure> {
    let ctx = Arc::new(Ctx::new(cfg.d, def, cfg.level, cfg.series_m, cfg.seed)?);
    let checks = verify::run(ctx, suite)?;
    let report = Report::new(&suite.name(), cfg.params(), checks);
    emit(cfg.format, output(cfg)?, &report, || report_table(&report))?;
    Ok(report.pass)
}

fn export_with<C: Coeff>(cfg: &RunConfig, def: Deformation<C>, what: Export) -> Result<Exported, ConfigError> {
    let space = || FockSpace::new(cfg.d, def.clone(), cfg.level).map_err(ConfigError::from);
    match what {
        Export::Xi => {
            cfg.require_series_fits()?;
            export::xi(&space()?, cfg.series_m)
        }
        Export::Gibbs => {
            cfg.require_series_fits()?;
            export::gibbs(&space()?, cfg.series_m)
        }
        Export::Fisher => {
            cfg.require_series_fits()?;
            export::fisher(&space()?, cfg.series_m)
        }
        Export::Hermite => match &def {
            Deformation::Scalar(q) => Ok(export::hermite_table(q, cfg.level)),
            Deformation::Matrix(_) => Err(ConfigError("hermite export needs a scalar q".into())),
        },
        Export::Partitions => unreachable!(),
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let o = cli.opts;
    let cfg = RunConfig::from_raw(RawConfig {
        d: o.d,
        q: o.q,
        q_matrix: o.q_matrix,
        level: o.level,
        series_m: o.series_m,
        mode: o.mode,
        seed: o.seed,
        format: o.format,
        out: o.out,
    })?;
    match cli.command {
        Command::Verify { suite } => match &cfg.setup {
            Setup::Scalar(def) => verify_with(&cfg, def.clone(), suite),
            Setup::Float(def) => verify_with(&cfg, def.clone(), suite),
        },
        Command::Export { what, family, n } => {
            let exported = match (what, &cfg.setup) {
                (Export::Partitions, _) => export::partitions(family, n),
                (_, Setup::Scalar(def)) => export_with(&cfg, def.clone(), what)?,
                (_, Setup::Float(def)) => export_with(&cfg, def.clone(), what)?,
            };
            emit(cfg.format, output(&cfg)?, &exported.json, || exported.table)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("qfock: invalid configuration: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("qfock: {e}");
            ExitCode::from(2)
        }
    }
}
