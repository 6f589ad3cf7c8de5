//! Stream-allocation search: per-link best response, sum-capacity
//! maximization and the empirical link-count threshold.

use serde::Serialize;

use crate::analytic::{self, NStar};
use crate::error::{Error, Result};
use crate::montecarlo;
use crate::types::{link_capacity, StreamAllocation, SystemConfig};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_MAX_SWEEPS: usize = 50;
pub const DEFAULT_WINDOW: usize = 5;
pub const DEFAULT_SCAN_CAP: usize = 10_000;

/// How candidate allocations are scored.
///
/// The Monte Carlo variant reuses one seed for every candidate (common random
/// numbers) so that comparisons between candidates are not swamped by noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Objective {
    Analytic,
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SearchMode {
    Exhaustive { budget: u64 },
    /// Round-robin coordinate ascent from the all-ones allocation. A
    /// heuristic: it certifies a fixed point, not a global optimum.
    Coordinate { max_sweeps: usize },
}

impl SearchMode {
    pub fn exhaustive() -> Self {
        SearchMode::Exhaustive { budget: DEFAULT_BUDGET }
    }

    pub fn coordinate() -> Self {
        SearchMode::Coordinate {
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_allocation: StreamAllocation,
    pub best_value: f64,
    pub evaluations: u64,
    /// Every candidate and its value, in enumeration order (exhaustive only).
    pub per_candidate_values: Option<Vec<(StreamAllocation, f64)>>,
    /// Whether the last coordinate sweep left the allocation unchanged.
    pub fixed_point: Option<bool>,
}

/// C_link for the given allocation.
pub fn link_capacity_of(
    config: &SystemConfig,
    alloc: &StreamAllocation,
    link: usize,
    objective: Objective,
) -> Result<f64> {
    config.validate()?;
    alloc.validate_for(config)?;
    let k_self = alloc.get(link);
    let p = match objective {
        Objective::Analytic => {
            let others = alloc.interferers(link);
            if others.iter().all(|&k| k == others[0]) {
                analytic::success_prob_equal_k(
                    config.num_antennas,
                    config.num_links,
                    k_self,
                    others[0],
                    config.sir_threshold,
                )?
            } else {
                analytic::success_prob_general(config.num_antennas, k_self, &others, config.sir_threshold)?
            }
        }
        Objective::MonteCarlo { trials, seed } => {
            montecarlo::empirical_link_outage(config, alloc, link, trials, seed)?.success_prob
        }
    };
    Ok(link_capacity(config.rate, k_self, p))
}

/// C_sum for the given allocation.
pub fn sum_capacity(config: &SystemConfig, alloc: &StreamAllocation, objective: Objective) -> Result<f64> {
    match objective {
        Objective::Analytic => Ok(analytic::sum_capacity_analytic(config, alloc)?.sum_capacity),
        Objective::MonteCarlo { trials, seed } => {
            Ok(montecarlo::empirical_outage(config, alloc, trials, seed)?.sum_capacity)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestResponse {
    pub streams: usize,
    /// C_link for k = 1..=M.
    pub values: Vec<f64>,
}

/// The stream count in 1..=M maximizing link `link`'s own capacity with every
/// other entry of `alloc` fixed. Ties go to the smaller count.
pub fn best_response(
    config: &SystemConfig,
    alloc: &StreamAllocation,
    link: usize,
    objective: Objective,
) -> Result<BestResponse> {
    if link >= config.num_links {
        return Err(Error::config(format!("link index {link} out of range")));
    }
    let values = (1..=config.num_antennas)
        .map(|k| link_capacity_of(config, &alloc.with(link, k), link, objective))
        .collect::<Result<Vec<f64>>>()?;
    Ok(BestResponse {
        streams: argmax_first(&values) + 1,
        values,
    })
}

fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// All allocations in lexicographic order, last link fastest.
pub fn enumerate_allocations(num_links: usize, num_antennas: usize) -> impl Iterator<Item = StreamAllocation> {
    let mut next = Some(vec![1usize; num_links]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for i in (0..num_links).rev() {
            if succ[i] < num_antennas {
                succ[i] += 1;
                succ[i + 1..].iter_mut().for_each(|k| *k = 1);
                next = Some(succ);
                break;
            }
        }
        Some(StreamAllocation::new(current).expect("entries are >= 1"))
    })
}

pub fn maximize_sum_capacity(config: &SystemConfig, mode: SearchMode, objective: Objective) -> Result<SearchResult> {
    config.validate()?;
    match mode {
        SearchMode::Exhaustive { budget } => exhaustive(config, budget, objective),
        SearchMode::Coordinate { max_sweeps } => coordinate(config, max_sweeps, objective),
    }
}

fn exhaustive(config: &SystemConfig, budget: u64, objective: Objective) -> Result<SearchResult> {
    let candidates = (config.num_antennas as u128)
        .checked_pow(config.num_links as u32)
        .unwrap_or(u128::MAX);
    if candidates > budget as u128 {
        return Err(Error::BudgetExceeded { candidates, budget });
    }
    let allocations: Vec<StreamAllocation> =
        enumerate_allocations(config.num_links, config.num_antennas).collect();
    let score = |a: &StreamAllocation| sum_capacity(config, a, objective);
    #[cfg(feature = "parallel")]
    let values: Vec<f64> = {
        use rayon::prelude::*;
        allocations.par_iter().map(score).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = allocations.iter().map(score).collect::<Result<_>>()?;

    let best = argmax_first(&values);
    Ok(SearchResult {
        best_allocation: allocations[best].clone(),
        best_value: values[best],
        evaluations: values.len() as u64,
        per_candidate_values: Some(allocations.into_iter().zip(values).collect()),
        fixed_point: None,
    })
}

fn coordinate(config: &SystemConfig, max_sweeps: usize, objective: Objective) -> Result<SearchResult> {
    let mut alloc = StreamAllocation::ones(config.num_links);
    let mut value = sum_capacity(config, &alloc, objective)?;
    let mut evaluations = 1;
    let mut fixed_point = false;
    for _ in 0..max_sweeps {
        let mut changed = false;
        for link in 0..config.num_links {
            let current = alloc.get(link);
            let mut best_k = current;
            for k in (1..=config.num_antennas).filter(|&k| k != current) {
                let candidate = alloc.with(link, k);
                let v = sum_capacity(config, &candidate, objective)?;
                evaluations += 1;
                // Strict improvement, or an equal value at a smaller count.
                if v > value || (v == value && k < best_k) {
                    value = v;
                    best_k = k;
                }
            }
            if best_k != current {
                alloc = alloc.with(link, best_k);
                changed = true;
            }
        }
        if !changed {
            fixed_point = true;
            break;
        }
    }
    Ok(SearchResult {
        best_allocation: alloc,
        best_value: value,
        evaluations,
        per_candidate_values: None,
        fixed_point: Some(fixed_point),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    /// Smallest N from which the analytic best response is one stream for
    /// `window + 1` consecutive link counts.
    pub empirical: usize,
    pub analytic: NStar,
    pub window: usize,
}

/// Scans N upward from 2 for the first link count at which a single stream
/// is the best response (analytic objective, interferers at `k_other`) and
/// stays so for the next `window` link counts.
pub fn empirical_threshold(
    antennas: usize,
    beta: f64,
    k_other: usize,
    window: usize,
    scan_cap: usize,
) -> Result<ThresholdReport> {
    let analytic = analytic::min_links_single_stream(antennas, beta, k_other)?;
    let single_stream_best = |links: usize| -> Result<bool> {
        let config = SystemConfig::new(links, antennas, beta, 1.0)?;
        let c1 = analytic::link_capacity_equal_k(&config, 1, k_other)?;
        for k in 2..=antennas {
            if analytic::link_capacity_equal_k(&config, k, k_other)? > c1 {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut run_start = None;
    for links in 2..=scan_cap {
        if single_stream_best(links)? {
            let start = *run_start.get_or_insert(links);
            if links - start == window {
                return Ok(ThresholdReport {
                    empirical: start,
                    analytic,
                    window,
                });
            }
        } else {
            run_start = None;
        }
    }
    Err(Error::ScanCap { cap: scan_cap })
}
