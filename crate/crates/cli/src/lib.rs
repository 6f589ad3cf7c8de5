//! Command-line front end for the `mimo-outage` library: scenario
//! configuration, figure data, thresholds, allocation search and oracle
//! checks, all emitted as CSV or JSON tables.

pub mod args;
pub mod commands;
pub mod error;
pub mod spec;
pub mod table;
pub mod validate;

use std::path::PathBuf;

pub use args::Cli;
pub use error::{CliError, CliResult};

use args::Command;
use table::Format;

/// A rendered table and where it should go.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub out: Option<PathBuf>,
    pub warnings: Vec<String>,
    /// Failed oracle checks (`validate` only).
    pub failed_checks: usize,
}

impl Output {
    pub fn write(&self) -> CliResult<()> {
        match &self.out {
            Some(path) => std::fs::write(path, &self.text)?,
            None => {
                use std::io::Write;
                std::io::stdout().write_all(self.text.as_bytes())?;
            }
        }
        Ok(())
    }
}

fn dispatch(command: &Command) -> CliResult<Output> {
    let rendered = |table: table::Table, out: Option<PathBuf>, format: Format, warnings: Vec<String>| Output {
        text: table.render(format),
        out,
        warnings,
        failed_checks: 0,
    };
    Ok(match command {
        Command::Capacity(raw) => {
            let (table, spec) = commands::capacity(raw)?;
            rendered(table, spec.out, spec.format, spec.warnings)
        }
        Command::Figure(args) => {
            let (table, warnings) = commands::figure(args)?;
            rendered(table, args.output.out.clone(), args.output.format, warnings)
        }
        Command::Nstar(args) => {
            let table = commands::nstar(args)?;
            rendered(table, args.output.out.clone(), args.output.format, Vec::new())
        }
        Command::Optimize(args) => {
            let (table, spec) = commands::optimize(args)?;
            rendered(table, spec.out, spec.format, spec.warnings)
        }
        Command::Validate(args) => {
            let (table, failed, warnings) = validate::validate(args)?;
            let mut output = rendered(table, args.output.out.clone(), args.output.format, warnings);
            output.failed_checks = failed;
            output
        }
    })
}

/// Runs a parsed command line, on a dedicated thread pool when `--workers`
/// is given.
pub fn run(cli: &Cli) -> CliResult<Output> {
    match cli.workers {
        None => dispatch(&cli.command),
        Some(0) => Err(CliError::InvalidSpec("--workers must be at least 1".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::InvalidSpec(format!("cannot start {w} workers: {e}")))?;
            pool.install(|| dispatch(&cli.command))
        }
    }
}
