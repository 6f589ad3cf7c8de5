//! Experiment specification: command-line flags layered over an optional
//! `key = value` scenario file.

use std::path::{Path, PathBuf};

use clap::Args;
use mimo_outage::types::beta_from_rate;
use mimo_outage::{StreamAllocation, SystemConfig};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::table::Format;

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;
pub const MIN_MC_TRIALS: u64 = 1_000;
pub const WARN_MC_TRIALS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Analytic,
    #[value(alias = "montecarlo")]
    Mc,
    Both,
}

impl Backend {
    pub fn uses_mc(self) -> bool {
        matches!(self, Backend::Mc | Backend::Both)
    }

    pub fn uses_analytic(self) -> bool {
        matches!(self, Backend::Analytic | Backend::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Analytic => "analytic",
            Backend::Mc => "mc",
            Backend::Both => "both",
        }
    }
}

/// Scenario fields as given on the command line or in a scenario file;
/// every field is optional until [`RawSpec::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct RawSpec {
    /// Scenario file with `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of links N.
    #[arg(long)]
    pub links: Option<usize>,
    /// Antennas per node M.
    #[arg(long)]
    pub antennas: Option<usize>,
    /// SIR threshold β.
    #[arg(long, conflicts_with = "rate_to_beta")]
    pub beta: Option<f64>,
    /// Set the rate to R and β = 2^R − 1.
    #[arg(long, value_name = "R")]
    pub rate_to_beta: Option<f64>,
    /// Per-stream rate R in bits/sec/Hz.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Streams per link, k1,k2,…
    #[arg(long, value_delimiter = ',', conflicts_with = "alloc_sweep")]
    pub alloc: Option<Vec<usize>>,
    /// Evaluate every allocation in {1..M}^N.
    #[arg(long)]
    pub alloc_sweep: bool,
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Monte Carlo trials.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AllocationSpec {
    Single(StreamAllocation),
    Sweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub config: SystemConfig,
    pub allocation: AllocationSpec,
    pub backend: Backend,
    pub trials: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub warnings: Vec<String>,
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::InvalidSpec(format!("line {line}: cannot parse `{value}` for `{key}`")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> CliResult<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::InvalidSpec(format!(
            "line {line}: `{key}` expects true or false, got `{value}`"
        ))),
    }
}

impl RawSpec {
    /// Parses a scenario file. Blank lines and `#` comments are ignored.
    pub fn parse_file_contents(text: &str) -> CliResult<Self> {
        let mut spec = RawSpec::default();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::InvalidSpec(format!("line {line}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "links" => spec.links = Some(parse_value(line, key, value)?),
                "antennas" => spec.antennas = Some(parse_value(line, key, value)?),
                "beta" => spec.beta = Some(parse_value(line, key, value)?),
                "rate_to_beta" => spec.rate_to_beta = Some(parse_value(line, key, value)?),
                "rate" => spec.rate = Some(parse_value(line, key, value)?),
                "alloc" => {
                    let ks = value
                        .split(',')
                        .map(|k| parse_value(line, key, k.trim()))
                        .collect::<CliResult<Vec<usize>>>()?;
                    spec.alloc = Some(ks);
                }
                "alloc_sweep" => spec.alloc_sweep = parse_bool(line, key, value)?,
                "backend" => {
                    spec.backend = Some(match value {
                        "analytic" => Backend::Analytic,
                        "mc" | "montecarlo" => Backend::Mc,
                        "both" => Backend::Both,
                        _ => {
                            return Err(CliError::InvalidSpec(format!(
                                "line {line}: unknown backend `{value}`"
                            )))
                        }
                    })
                }
                "trials" => spec.trials = Some(parse_value(line, key, value)?),
                "seed" => spec.seed = Some(parse_value(line, key, value)?),
                "out" => spec.out = Some(PathBuf::from(value)),
                "format" => {
                    spec.format = Some(match value {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => {
                            return Err(CliError::InvalidSpec(format!(
                                "line {line}: unknown format `{value}`"
                            )))
                        }
                    })
                }
                _ => return Err(CliError::InvalidSpec(format!("line {line}: unknown key `{key}`"))),
            }
        }
        if spec.beta.is_some() && spec.rate_to_beta.is_some() {
            return Err(CliError::InvalidSpec("`beta` and `rate_to_beta` are mutually exclusive".into()));
        }
        Ok(spec)
    }

    pub fn parse_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
            .map_err(|e| CliError::InvalidSpec(format!("{}: {e}", path.display())))
    }

    /// `self` (flags) layered over `base` (file).
    pub fn over(self, base: RawSpec) -> RawSpec {
        let (beta, rate_to_beta) = if self.beta.is_some() || self.rate_to_beta.is_some() {
            (self.beta, self.rate_to_beta)
        } else {
            (base.beta, base.rate_to_beta)
        };
        let (alloc, alloc_sweep) = if self.alloc.is_some() || self.alloc_sweep {
            (self.alloc, self.alloc_sweep)
        } else {
            (base.alloc, base.alloc_sweep)
        };
        RawSpec {
            config: self.config,
            links: self.links.or(base.links),
            antennas: self.antennas.or(base.antennas),
            beta,
            rate_to_beta,
            rate: self.rate.or(base.rate),
            alloc,
            alloc_sweep,
            backend: self.backend.or(base.backend),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
        }
    }

    /// Applies the scenario file named by `--config`, if any.
    pub fn load(self) -> CliResult<RawSpec> {
        match &self.config {
            Some(path) => {
                let base = RawSpec::parse_file(path)?;
                Ok(self.over(base))
            }
            None => Ok(self),
        }
    }

    pub fn threshold(&self) -> Option<f64> {
        self.beta.or(self.rate_to_beta.map(beta_from_rate))
    }

    pub fn effective_rate(&self) -> Option<f64> {
        self.rate.or(self.rate_to_beta)
    }

    pub fn resolve(&self) -> CliResult<ExperimentSpec> {
        let antennas = self
            .antennas
            .ok_or_else(|| CliError::InvalidSpec("missing --antennas".into()))?;
        let links = match (self.links, &self.alloc) {
            (Some(n), _) => n,
            (None, Some(ks)) => ks.len(),
            (None, None) => return Err(CliError::InvalidSpec("missing --links".into())),
        };
        let config = SystemConfig::new(
            links,
            antennas,
            self.threshold().unwrap_or(1.0),
            self.effective_rate().unwrap_or(1.0),
        )?;
        let allocation = if self.alloc_sweep {
            AllocationSpec::Sweep
        } else {
            let alloc = match &self.alloc {
                Some(ks) => StreamAllocation::new(ks.clone())?,
                None => StreamAllocation::ones(links),
            };
            alloc.validate_for(&config)?;
            AllocationSpec::Single(alloc)
        };
        let backend = self.backend.unwrap_or(Backend::Analytic);
        let trials = self.trials.unwrap_or(DEFAULT_TRIALS);
        let mut warnings = Vec::new();
        if backend.uses_mc() {
            check_mc_trials(trials, &mut warnings)?;
        }
        Ok(ExperimentSpec {
            config,
            allocation,
            backend,
            trials,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            out: self.out.clone(),
            format: self.format.unwrap_or_default(),
            warnings,
        })
    }
}

pub fn check_mc_trials(trials: u64, warnings: &mut Vec<String>) -> CliResult<()> {
    if trials < MIN_MC_TRIALS {
        return Err(CliError::InvalidSpec(format!(
            "Monte Carlo needs at least {MIN_MC_TRIALS} trials, got {trials}"
        )));
    }
    if trials < WARN_MC_TRIALS {
        warnings.push(format!(
            "warning: {trials} Monte Carlo trials; estimates below {WARN_MC_TRIALS} trials are noisy"
        ));
    }
    Ok(())
}
