//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Everything here is analytic, so results appear instantly in the browser.

use mimo_outage::optimizer::enumerate_allocations;
use mimo_outage::{analytic, optimizer, StreamAllocation, SystemConfig};
use wasm_bindgen::prelude::*;

/// Largest allocation grid the page will evaluate.
pub const MAX_GRID: usize = 4096;

fn js(e: mimo_outage::Error) -> JsError {
    JsError::new(&e.to_string())
}

pub fn capacity_curve(links: usize, antennas: usize, beta: f64, rate: f64) -> mimo_outage::Result<Vec<f64>> {
    let config = SystemConfig::new(links, antennas, beta, rate)?;
    (1..=antennas)
        .map(|k| analytic::link_capacity_equal_k(&config, k, 1))
        .collect()
}

pub fn sum_grid(links: usize, antennas: usize, beta: f64, rate: f64) -> mimo_outage::Result<Vec<f64>> {
    let config = SystemConfig::new(links, antennas, beta, rate)?;
    let count = (antennas as u128).checked_pow(links as u32).unwrap_or(u128::MAX);
    if count > MAX_GRID as u128 {
        return Err(mimo_outage::Error::BudgetExceeded {
            candidates: count,
            budget: MAX_GRID as u64,
        });
    }
    enumerate_allocations(links, antennas)
        .map(|alloc| analytic::sum_capacity_analytic(&config, &alloc).map(|r| r.sum_capacity))
        .collect()
}

/// C_1(k_1) for k_1 = 1..=M with every other link at one stream.
#[wasm_bindgen(js_name = capacityCurve)]
pub fn capacity_curve_js(links: usize, antennas: usize, beta: f64, rate: f64) -> Result<Vec<f64>, JsError> {
    capacity_curve(links, antennas, beta, rate).map_err(js)
}

/// C_sum of every allocation in {1..M}^N, last link varying fastest.
#[wasm_bindgen(js_name = sumCapacityGrid)]
pub fn sum_grid_js(links: usize, antennas: usize, beta: f64, rate: f64) -> Result<Vec<f64>, JsError> {
    sum_grid(links, antennas, beta, rate).map_err(js)
}

/// Stream counts of the allocation at `index` in [`sum_grid_js`] order.
#[wasm_bindgen(js_name = allocationAt)]
pub fn allocation_at(links: usize, antennas: usize, index: usize) -> Result<Vec<u32>, JsError> {
    enumerate_allocations(links, antennas)
        .nth(index)
        .map(|a: StreamAllocation| a.streams().iter().map(|&k| k as u32).collect())
        .ok_or_else(|| JsError::new("allocation index out of range"))
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub analytic: usize,
    pub binding_p: usize,
    pub empirical: usize,
}

pub fn thresholds(antennas: usize, beta: f64) -> mimo_outage::Result<Thresholds> {
    let r = optimizer::empirical_threshold(
        antennas,
        beta,
        1,
        optimizer::DEFAULT_WINDOW,
        optimizer::DEFAULT_SCAN_CAP,
    )?;
    Ok(Thresholds {
        analytic: r.analytic.links,
        binding_p: r.analytic.binding_p,
        empirical: r.empirical,
    })
}

/// Link counts above which one stream per link is best.
#[wasm_bindgen(js_name = singleStreamThresholds)]
pub fn thresholds_js(antennas: usize, beta: f64) -> Result<Thresholds, JsError> {
    thresholds(antennas, beta).map_err(js)
}
