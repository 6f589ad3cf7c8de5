//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mimo_outage::optimizer::{DEFAULT_BUDGET, DEFAULT_MAX_SWEEPS, DEFAULT_SCAN_CAP, DEFAULT_WINDOW};

use crate::spec::{Backend, RawSpec};
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(name = "mimo-outage", version, about = "Outage capacity of MIMO interference channels with zero-forcing receivers")]
pub struct Cli {
    /// Worker threads for Monte Carlo and search; output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-link success probability and capacity for one allocation, or the
    /// sum capacity of every allocation with --alloc-sweep.
    Capacity(RawSpec),
    /// Data behind the three reference figures.
    Figure(FigureArgs),
    /// Analytic and empirical single-stream thresholds.
    Nstar(NstarArgs),
    /// Sum-capacity maximization over allocations.
    Optimize(OptimizeArgs),
    /// Oracle-agreement checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub which: Figure,
    /// Link counts for fig1.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// Thresholds for fig2.
    #[arg(long, value_delimiter = ',')]
    pub beta_list: Option<Vec<f64>>,
    #[arg(long)]
    pub antennas: Option<usize>,
    #[arg(long)]
    pub links: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, value_enum, default_value_t = Backend::Analytic)]
    pub backend: Backend,
    #[arg(long, default_value_t = crate::spec::DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = crate::spec::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NstarArgs {
    /// One or more antenna counts M.
    #[arg(long, value_delimiter = ',', required = true)]
    pub antennas: Vec<usize>,
    /// One or more thresholds β.
    #[arg(long, value_delimiter = ',', conflicts_with = "rate_to_beta")]
    pub beta: Option<Vec<f64>>,
    #[arg(long, value_name = "R")]
    pub rate_to_beta: Option<f64>,
    /// Streams per interferer.
    #[arg(long, default_value_t = 1)]
    pub k_other: usize,
    /// Extra consecutive link counts the empirical threshold must hold for.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
    pub scan_cap: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Analytic,
    #[value(alias = "montecarlo")]
    Mc,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub scenario: RawSpec,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Analytic)]
    pub objective: ObjectiveArg,
    /// Maximum number of candidates for exhaustive search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_SWEEPS)]
    pub max_sweeps: usize,
    /// Emit every candidate instead of the summary (exhaustive only).
    #[arg(long)]
    pub candidates: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Monte Carlo trials per check.
    #[arg(long, default_value_t = crate::spec::DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = crate::spec::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
