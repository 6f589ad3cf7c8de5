//! Oracle-agreement checks: exact cases, quadrature, the marginal-model
//! simulation, and full-channel Monte Carlo, each against the closed forms.

use mimo_outage::{analytic, montecarlo, oracle, StreamAllocation, SystemConfig};
use rayon::prelude::*;

use crate::args::ValidateArgs;
use crate::error::CliResult;
use crate::spec::check_mc_trials;
use crate::table::Table;

const QUADRATURE_TOL: f64 = 1e-8;
const APPROX_TOL: f64 = 2e-2;
const MC_FLOOR: f64 = 5e-3;

struct Check {
    name: &'static str,
    scenario: String,
    value: f64,
    reference: f64,
    tolerance: f64,
}

impl Check {
    fn abs_error(&self) -> f64 {
        (self.value - self.reference).abs()
    }

    fn passed(&self) -> bool {
        self.abs_error() <= self.tolerance
    }
}

fn exact_checks(trials: u64, seed: u64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for beta in [0.5, 1.0, 4.0] {
        let exact = 1.0 / (1.0 + beta);
        let scenario = format!("N=2 M=1 k=(1,1) beta={beta}");
        checks.push(Check {
            name: "exact_closed_form",
            scenario: scenario.clone(),
            value: analytic::success_prob_equal_k(1, 2, 1, 1, beta)?,
            reference: exact,
            tolerance: 1e-12,
        });
        let config = SystemConfig::new(2, 1, beta, 1.0)?;
        let est = montecarlo::empirical_link_outage(&config, &StreamAllocation::ones(2), 0, trials, seed)?;
        checks.push(Check {
            name: "exact_monte_carlo",
            scenario,
            value: est.success_prob,
            reference: exact,
            tolerance: 3.0 * est.std_error,
        });
    }
    Ok(checks)
}

fn quadrature_checks() -> CliResult<Vec<Check>> {
    let mut grid = Vec::new();
    for m in [2usize, 4, 8] {
        for n in [4usize, 8, 16] {
            let mut k_selfs = vec![1, 2, m];
            k_selfs.dedup();
            for k_self in k_selfs {
                for k_other in [1usize, 2] {
                    for beta in [0.5, 1.0, 4.0] {
                        grid.push((m, n, k_self, k_other, beta));
                    }
                }
            }
        }
    }
    grid.par_iter()
        .map(|&(m, n, k_self, k_other, beta)| {
            let value = analytic::success_prob_equal_k(m, n, k_self, k_other, beta)?;
            let reference = oracle::equal_k_success_by_quadrature(m, n, k_self, k_other, beta, 1e-11)?;
            Ok(Check {
                name: "quadrature",
                scenario: format!("M={m} N={n} k_self={k_self} k_other={k_other} beta={beta}"),
                value,
                reference,
                tolerance: QUADRATURE_TOL * reference.abs(),
            })
        })
        .collect::<mimo_outage::Result<Vec<_>>>()
        .map_err(Into::into)
}

fn approximation_checks(trials: u64, seed: u64) -> CliResult<Vec<Check>> {
    let mut grid = Vec::new();
    for k_others in [vec![1usize, 2], vec![1, 2, 4], vec![1, 1, 2, 3]] {
        for m in [2usize, 4] {
            if k_others.iter().any(|&k| k > m) {
                continue;
            }
            for k_self in [1usize, 2] {
                grid.push((m, k_self, k_others.clone()));
            }
        }
    }
    let beta = 1.0;
    grid.par_iter()
        .map(|(m, k_self, k_others)| {
            let value = analytic::success_prob_general(*m, *k_self, k_others, beta)?;
            let est = montecarlo::direct_distribution_outage(*m, *k_self, k_others, beta, trials, seed)?;
            Ok(Check {
                name: "gamma_approximation",
                scenario: format!("M={m} k_self={k_self} k_others={k_others:?} beta={beta}"),
                value,
                reference: est.success_prob,
                tolerance: APPROX_TOL + 3.0 * est.std_error,
            })
        })
        .collect::<mimo_outage::Result<Vec<_>>>()
        .map_err(Into::into)
}

fn full_channel_checks(trials: u64, seed: u64) -> CliResult<Vec<Check>> {
    let scenarios = [(4usize, 2usize, 1usize, 1usize, 1.0), (4, 4, 2, 1, 1.0), (8, 4, 1, 2, 0.5), (2, 2, 2, 2, 4.0)];
    scenarios
        .par_iter()
        .map(|&(n, m, k_self, k_other, beta)| {
            let config = SystemConfig::new(n, m, beta, 1.0)?;
            let alloc = StreamAllocation::single_deviation(n, 0, k_self, k_other)?;
            let est = montecarlo::empirical_link_outage(&config, &alloc, 0, trials, seed)?;
            Ok(Check {
                name: "full_channel",
                scenario: format!("N={n} M={m} k_self={k_self} k_other={k_other} beta={beta}"),
                value: analytic::success_prob_equal_k(m, n, k_self, k_other, beta)?,
                reference: est.success_prob,
                tolerance: (3.0 * est.std_error).max(MC_FLOOR),
            })
        })
        .collect::<mimo_outage::Result<Vec<_>>>()
        .map_err(Into::into)
}

/// Runs every check and returns the table plus the number of failures.
pub fn validate(args: &ValidateArgs) -> CliResult<(Table, usize, Vec<String>)> {
    let mut warnings = Vec::new();
    check_mc_trials(args.trials, &mut warnings)?;
    let mut checks = exact_checks(args.trials, args.seed)?;
    checks.extend(quadrature_checks()?);
    checks.extend(approximation_checks(args.trials, args.seed)?);
    checks.extend(full_channel_checks(args.trials, args.seed)?);

    let mut table = Table::new(&["check", "scenario", "value", "reference", "abs_error", "tolerance", "pass"]);
    table
        .meta("tool", concat!("mimo-outage-", env!("CARGO_PKG_VERSION")))
        .meta("cmd", "validate")
        .meta("trials", args.trials)
        .meta("seed", args.seed);
    let mut failures = 0;
    for c in &checks {
        failures += !c.passed() as usize;
        table.push(vec![
            c.name.into(),
            c.scenario.clone().into(),
            c.value.into(),
            c.reference.into(),
            c.abs_error().into(),
            c.tolerance.into(),
            c.passed().into(),
        ]);
    }
    Ok((table, failures, warnings))
}
