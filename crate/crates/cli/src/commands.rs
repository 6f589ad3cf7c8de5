//! Subcommand implementations. Each builds a [`Table`]; writing it out is
//! left to the caller.

use mimo_outage::optimizer::{self, Objective, SearchMode, DEFAULT_BUDGET};
use mimo_outage::types::link_capacity;
use mimo_outage::{analytic, montecarlo, StreamAllocation, SystemConfig};
use rayon::prelude::*;

use crate::args::{Figure, FigureArgs, Mode, NstarArgs, ObjectiveArg, OptimizeArgs};
use crate::error::{CliError, CliResult};
use crate::spec::{check_mc_trials, AllocationSpec, Backend, ExperimentSpec, RawSpec};
use crate::table::{Cell, Table};

pub const FIG1_LINKS: [usize; 5] = [5, 10, 15, 20, 30];
pub const FIG2_BETAS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn stamp(table: &mut Table, command: &str) {
    table
        .meta("tool", concat!("mimo-outage-", env!("CARGO_PKG_VERSION")))
        .meta("cmd", command);
}

fn stamp_scenario(table: &mut Table, config: &SystemConfig) {
    table
        .meta("links", config.num_links)
        .meta("antennas", config.num_antennas)
        .meta("beta", config.sir_threshold)
        .meta("rate", config.rate);
}

fn stamp_backend(table: &mut Table, backend: Backend, trials: u64, seed: u64) {
    table.meta("backend", backend.name());
    if backend.uses_mc() {
        table.meta("trials", trials).meta("seed", seed);
    }
}

fn k_columns(num_links: usize) -> Vec<String> {
    (1..=num_links).map(|n| format!("k_{n}")).collect()
}

fn k_cells(alloc: &StreamAllocation) -> Vec<Cell> {
    alloc.streams().iter().map(|&k| Cell::from(k)).collect()
}

/// Value columns for one quantity under each backend. With `std_error`
/// the Monte Carlo column carries its standard error alongside.
fn value_columns(backend: Backend, name: &str, std_error: bool) -> Vec<String> {
    let mut cols = Vec::new();
    match backend {
        Backend::Analytic => cols.push(name.to_string()),
        Backend::Mc => {
            cols.push(name.to_string());
            if std_error {
                cols.push("std_error".into());
            }
        }
        Backend::Both => {
            cols.push(name.to_string());
            cols.push(format!("mc_{name}"));
            if std_error {
                cols.push("mc_std_error".into());
            }
            cols.push("abs_delta".into());
        }
    }
    cols
}

fn value_cells(analytic: Option<f64>, mc: Option<(f64, Option<f64>)>) -> Vec<Cell> {
    let mut cells = Vec::new();
    if let Some(a) = analytic {
        cells.push(a.into());
    }
    if let Some((m, se)) = mc {
        cells.push(m.into());
        if let Some(se) = se {
            cells.push(se.into());
        }
    }
    if let (Some(a), Some((m, _))) = (analytic, mc) {
        cells.push((a - m).abs().into());
    }
    cells
}

pub fn capacity(raw: &RawSpec) -> CliResult<(Table, ExperimentSpec)> {
    let spec = raw.clone().load()?.resolve()?;
    let table = match &spec.allocation {
        AllocationSpec::Single(alloc) => capacity_single(&spec, alloc)?,
        AllocationSpec::Sweep => capacity_sweep(&spec)?,
    };
    Ok((table, spec))
}

fn capacity_single(spec: &ExperimentSpec, alloc: &StreamAllocation) -> CliResult<Table> {
    let config = &spec.config;
    let analytic = if spec.backend.uses_analytic() {
        Some(analytic::sum_capacity_analytic(config, alloc)?)
    } else {
        None
    };
    let mc = if spec.backend.uses_mc() {
        Some(montecarlo::empirical_outage(config, alloc, spec.trials, spec.seed)?)
    } else {
        None
    };

    let columns: Vec<&str> = match spec.backend {
        Backend::Analytic => vec!["link", "streams", "success_prob", "capacity", "sum_capacity"],
        Backend::Mc => vec!["link", "streams", "success_prob", "std_error", "capacity", "sum_capacity"],
        Backend::Both => vec![
            "link",
            "streams",
            "success_prob",
            "mc_success_prob",
            "mc_std_error",
            "abs_delta",
            "capacity",
            "mc_capacity",
            "sum_capacity",
            "mc_sum_capacity",
        ],
    };
    let mut table = Table::new(&columns);
    stamp(&mut table, "capacity");
    stamp_scenario(&mut table, config);
    table.meta("alloc", join(alloc.streams()));
    stamp_backend(&mut table, spec.backend, spec.trials, spec.seed);
    if let Some(a) = &analytic {
        table.meta("clamp_events", a.diagnostics.clamp_events);
    }
    if let Some(m) = &mc {
        table.meta("resamples", m.diagnostics.resamples);
    }

    for link in 0..config.num_links {
        let mut row: Vec<Cell> = vec![(link + 1).into(), alloc.get(link).into()];
        match (&analytic, &mc) {
            (Some(a), None) => row.extend([
                a.per_link_success_prob[link].into(),
                a.per_link_capacity[link].into(),
                a.sum_capacity.into(),
            ]),
            (None, Some(m)) => row.extend([
                m.per_link_success_prob[link].into(),
                m.std_error.as_ref().expect("Monte Carlo reports carry errors")[link].into(),
                m.per_link_capacity[link].into(),
                m.sum_capacity.into(),
            ]),
            (Some(a), Some(m)) => {
                let (pa, pm) = (a.per_link_success_prob[link], m.per_link_success_prob[link]);
                row.extend([
                    pa.into(),
                    pm.into(),
                    m.std_error.as_ref().expect("Monte Carlo reports carry errors")[link].into(),
                    (pa - pm).abs().into(),
                    a.per_link_capacity[link].into(),
                    m.per_link_capacity[link].into(),
                    a.sum_capacity.into(),
                    m.sum_capacity.into(),
                ]);
            }
            (None, None) => unreachable!("every backend evaluates something"),
        }
        table.push(row);
    }
    Ok(table)
}

fn check_sweep_size(num_links: usize, num_antennas: usize, budget: u64) -> CliResult<Vec<StreamAllocation>> {
    let count = (num_antennas as u128).checked_pow(num_links as u32).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(mimo_outage::Error::BudgetExceeded { candidates: count, budget }.into());
    }
    Ok(optimizer::enumerate_allocations(num_links, num_antennas).collect())
}

/// Sum capacity of each allocation under the requested backend(s). Monte
/// Carlo evaluations share one seed.
fn sum_capacities(
    config: &SystemConfig,
    allocs: &[StreamAllocation],
    backend: Backend,
    trials: u64,
    seed: u64,
) -> CliResult<Vec<(Option<f64>, Option<f64>)>> {
    allocs
        .par_iter()
        .map(|alloc| {
            let a = if backend.uses_analytic() {
                Some(optimizer::sum_capacity(config, alloc, Objective::Analytic)?)
            } else {
                None
            };
            let m = if backend.uses_mc() {
                Some(optimizer::sum_capacity(config, alloc, Objective::MonteCarlo { trials, seed })?)
            } else {
                None
            };
            Ok((a, m))
        })
        .collect::<mimo_outage::Result<Vec<_>>>()
        .map_err(CliError::from)
}

fn sum_table(
    command: &str,
    config: &SystemConfig,
    backend: Backend,
    trials: u64,
    seed: u64,
) -> CliResult<Table> {
    let allocs = check_sweep_size(config.num_links, config.num_antennas, DEFAULT_BUDGET)?;
    let values = sum_capacities(config, &allocs, backend, trials, seed)?;
    let mut columns = k_columns(config.num_links);
    columns.extend(value_columns(backend, "sum_capacity", false));
    let mut table = Table::with_columns(columns);
    stamp(&mut table, command);
    stamp_scenario(&mut table, config);
    table.meta("alloc", "sweep");
    stamp_backend(&mut table, backend, trials, seed);
    for (alloc, (a, m)) in allocs.iter().zip(values) {
        let mut row = k_cells(alloc);
        row.extend(value_cells(a, m.map(|m| (m, None))));
        table.push(row);
    }
    Ok(table)
}

fn capacity_sweep(spec: &ExperimentSpec) -> CliResult<Table> {
    sum_table("capacity", &spec.config, spec.backend, spec.trials, spec.seed)
}

/// C_1 for link 0 at `k_self` against interferers at `k_other`.
fn link_zero_values(
    config: &SystemConfig,
    k_self: usize,
    k_other: usize,
    backend: Backend,
    trials: u64,
    seed: u64,
) -> CliResult<Vec<Cell>> {
    let a = if backend.uses_analytic() {
        Some(analytic::link_capacity_equal_k(config, k_self, k_other)?)
    } else {
        None
    };
    let m = if backend.uses_mc() {
        let alloc = StreamAllocation::single_deviation(config.num_links, 0, k_self, k_other)?;
        let est = montecarlo::empirical_link_outage(config, &alloc, 0, trials, seed)?;
        let scale = config.rate * k_self as f64;
        Some((
            link_capacity(config.rate, k_self, est.success_prob),
            Some(scale * est.std_error),
        ))
    } else {
        None
    };
    Ok(value_cells(a, m))
}

pub fn figure(args: &FigureArgs) -> CliResult<(Table, Vec<String>)> {
    let mut warnings = Vec::new();
    if args.backend.uses_mc() {
        check_mc_trials(args.trials, &mut warnings)?;
    }
    let rate = args.rate.unwrap_or(1.0);
    let table = match args.which {
        Figure::Fig1 => {
            if args.links.is_some() || args.beta_list.is_some() {
                return Err(CliError::InvalidSpec("fig1 varies N; use --n-list and --beta".into()));
            }
            let antennas = args.antennas.unwrap_or(10);
            let beta = args.beta.unwrap_or(1.0);
            let n_list = args.n_list.clone().unwrap_or_else(|| FIG1_LINKS.to_vec());
            if n_list.is_empty() {
                return Err(CliError::InvalidSpec("--n-list is empty".into()));
            }
            let mut columns = vec!["N".to_string(), "k_1".to_string()];
            columns.extend(value_columns(args.backend, "C_1", true));
            let mut table = Table::with_columns(columns);
            stamp(&mut table, "figure");
            table
                .meta("which", "fig1")
                .meta("n_list", join(&n_list))
                .meta("antennas", antennas)
                .meta("beta", beta)
                .meta("rate", rate)
                .meta("k_other", 1);
            stamp_backend(&mut table, args.backend, args.trials, args.seed);
            for &links in &n_list {
                let config = SystemConfig::new(links, antennas, beta, rate)?;
                let rows = (1..=antennas)
                    .into_par_iter()
                    .map(|k| link_zero_values(&config, k, 1, args.backend, args.trials, args.seed))
                    .collect::<CliResult<Vec<_>>>()?;
                for (k, values) in (1..=antennas).zip(rows) {
                    let mut row: Vec<Cell> = vec![links.into(), k.into()];
                    row.extend(values);
                    table.push(row);
                }
            }
            table
        }
        Figure::Fig2 => {
            if args.n_list.is_some() || args.beta.is_some() {
                return Err(CliError::InvalidSpec("fig2 varies β; use --beta-list and --links".into()));
            }
            let antennas = args.antennas.unwrap_or(5);
            let links = args.links.unwrap_or(5);
            let betas = args.beta_list.clone().unwrap_or_else(|| FIG2_BETAS.to_vec());
            if betas.is_empty() {
                return Err(CliError::InvalidSpec("--beta-list is empty".into()));
            }
            let mut columns = vec!["beta".to_string(), "k_1".to_string()];
            columns.extend(value_columns(args.backend, "C_1", true));
            let mut table = Table::with_columns(columns);
            stamp(&mut table, "figure");
            table
                .meta("which", "fig2")
                .meta("beta_list", join(&betas))
                .meta("links", links)
                .meta("antennas", antennas)
                .meta("rate", rate)
                .meta("k_other", 1);
            stamp_backend(&mut table, args.backend, args.trials, args.seed);
            for &beta in &betas {
                let config = SystemConfig::new(links, antennas, beta, rate)?;
                let rows = (1..=antennas)
                    .into_par_iter()
                    .map(|k| link_zero_values(&config, k, 1, args.backend, args.trials, args.seed))
                    .collect::<CliResult<Vec<_>>>()?;
                for (k, values) in (1..=antennas).zip(rows) {
                    let mut row: Vec<Cell> = vec![beta.into(), k.into()];
                    row.extend(values);
                    table.push(row);
                }
            }
            table
        }
        Figure::Fig3 => {
            if args.n_list.is_some() || args.beta_list.is_some() {
                return Err(CliError::InvalidSpec("fig3 takes --links, --antennas and --beta".into()));
            }
            let config = SystemConfig::new(
                args.links.unwrap_or(3),
                args.antennas.unwrap_or(3),
                args.beta.unwrap_or(1.0),
                rate,
            )?;
            let mut table = sum_table("figure", &config, args.backend, args.trials, args.seed)?;
            table.meta.insert(2, ("which".into(), "fig3".into()));
            if let Some(i) = table.column("sum_capacity") {
                table.columns[i] = "C_sum".into();
            }
            if let Some(i) = table.column("mc_sum_capacity") {
                table.columns[i] = "mc_C_sum".into();
            }
            table
        }
    };
    Ok((table, warnings))
}

pub fn nstar(args: &NstarArgs) -> CliResult<Table> {
    let betas = match (&args.beta, args.rate_to_beta) {
        (Some(b), _) => b.clone(),
        (None, Some(r)) => vec![mimo_outage::types::beta_from_rate(r)],
        (None, None) => vec![1.0],
    };
    if args.antennas.is_empty() || betas.is_empty() {
        return Err(CliError::InvalidSpec("--antennas and --beta need at least one value".into()));
    }
    let mut table = Table::new(&[
        "antennas",
        "beta",
        "k_other",
        "analytic_nstar",
        "binding_p",
        "empirical_threshold",
        "analytic_ratio",
        "empirical_ratio",
    ]);
    stamp(&mut table, "nstar");
    table
        .meta("antennas", join(&args.antennas))
        .meta("beta", join(&betas))
        .meta("k_other", args.k_other)
        .meta("window", args.window)
        .meta("scan_cap", args.scan_cap);
    let grid: Vec<(usize, f64)> = args
        .antennas
        .iter()
        .flat_map(|&m| betas.iter().map(move |&b| (m, b)))
        .collect();
    let reports = grid
        .par_iter()
        .map(|&(m, beta)| optimizer::empirical_threshold(m, beta, args.k_other, args.window, args.scan_cap))
        .collect::<mimo_outage::Result<Vec<_>>>()?;
    for (&(m, beta), report) in grid.iter().zip(reports) {
        table.push(vec![
            m.into(),
            beta.into(),
            args.k_other.into(),
            report.analytic.links.into(),
            report.analytic.binding_p.into(),
            report.empirical.into(),
            (report.analytic.links as f64 / m as f64).into(),
            (report.empirical as f64 / m as f64).into(),
        ]);
    }
    Ok(table)
}

pub fn optimize(args: &OptimizeArgs) -> CliResult<(Table, ExperimentSpec)> {
    let raw = args.scenario.clone().load()?;
    if raw.alloc.is_some() || raw.alloc_sweep || raw.backend.is_some() {
        return Err(CliError::InvalidSpec(
            "optimize searches allocations itself; use --objective instead of --alloc/--backend".into(),
        ));
    }
    let mut spec = raw.resolve()?;
    let objective = match args.objective {
        ObjectiveArg::Analytic => Objective::Analytic,
        ObjectiveArg::Mc => {
            check_mc_trials(spec.trials, &mut spec.warnings)?;
            spec.backend = Backend::Mc;
            Objective::MonteCarlo {
                trials: spec.trials,
                seed: spec.seed,
            }
        }
    };
    let mode = match args.mode {
        Mode::Exhaustive => SearchMode::Exhaustive { budget: args.budget },
        Mode::Coordinate => SearchMode::Coordinate {
            max_sweeps: args.max_sweeps,
        },
    };
    if args.candidates && args.mode != Mode::Exhaustive {
        return Err(CliError::InvalidSpec("--candidates needs --mode exhaustive".into()));
    }
    let result = optimizer::maximize_sum_capacity(&spec.config, mode, objective)?;
    let config = &spec.config;

    let mode_name = match args.mode {
        Mode::Exhaustive => "exhaustive",
        Mode::Coordinate => "coordinate",
    };
    let mut table = if args.candidates {
        let mut columns = k_columns(config.num_links);
        columns.push("sum_capacity".into());
        let mut table = Table::with_columns(columns);
        for (alloc, value) in result.per_candidate_values.as_deref().unwrap_or_default() {
            let mut row = k_cells(alloc);
            row.push((*value).into());
            table.push(row);
        }
        table
    } else {
        let mut columns = k_columns(config.num_links);
        columns.extend(["sum_capacity", "evaluations", "fixed_point"].map(String::from));
        let mut table = Table::with_columns(columns);
        let mut row = k_cells(&result.best_allocation);
        row.push(result.best_value.into());
        row.push(result.evaluations.into());
        row.push(match result.fixed_point {
            Some(f) => f.into(),
            None => "na".into(),
        });
        table.push(row);
        table
    };
    let mut meta = Table::new(&[]);
    stamp(&mut meta, "optimize");
    stamp_scenario(&mut meta, config);
    meta.meta("mode", mode_name);
    match args.mode {
        Mode::Exhaustive => meta.meta("budget", args.budget),
        Mode::Coordinate => meta.meta("max_sweeps", args.max_sweeps),
    };
    match objective {
        Objective::Analytic => meta.meta("objective", "analytic"),
        Objective::MonteCarlo { trials, seed } => meta.meta("objective", "mc").meta("trials", trials).meta("seed", seed),
    };
    table.meta = meta.meta;
    Ok((table, spec))
}
