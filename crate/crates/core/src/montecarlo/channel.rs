use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::types::{StreamAllocation, SystemConfig};

/// Dense complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        Self {
            rows,
            cols: columns.len(),
            data: columns.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.rows + i]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.data.iter_mut().for_each(|z| *z *= factor);
    }

    /// Refills every entry with an independent CN(0, 1) draw.
    pub fn fill_gaussian<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for z in &mut self.data {
            *z = complex_gaussian(rng);
        }
    }
}

/// CN(0, 1): independent real and imaginary parts, each N(0, 1/2).
pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Everything receiver n sees: H_mn for every transmitter m, each M × k_m.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverChannels {
    receiver: usize,
    from: Vec<CMatrix>,
}

impl ReceiverChannels {
    pub fn zeros(config: &SystemConfig, alloc: &StreamAllocation, receiver: usize) -> Self {
        let from = alloc
            .streams()
            .iter()
            .map(|&k| CMatrix::zeros(config.num_antennas, k))
            .collect();
        Self { receiver, from }
    }

    pub fn receiver(&self) -> usize {
        self.receiver
    }

    /// H_mn for this receiver n.
    pub fn from_transmitter(&self, m: usize) -> &CMatrix {
        &self.from[m]
    }

    pub fn own(&self) -> &CMatrix {
        &self.from[self.receiver]
    }

    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.from.iter_mut().for_each(|h| h.fill_gaussian(rng));
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.from.iter_mut().for_each(|h| h.scale(factor));
    }

    pub(crate) fn transmitters(&self) -> impl Iterator<Item = (usize, &CMatrix)> {
        self.from.iter().enumerate()
    }
}

/// One realization of every channel matrix, grouped by receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    receivers: Vec<ReceiverChannels>,
}

impl ChannelSet {
    pub fn zeros(config: &SystemConfig, alloc: &StreamAllocation) -> Self {
        Self {
            receivers: (0..config.num_links)
                .map(|n| ReceiverChannels::zeros(config, alloc, n))
                .collect(),
        }
    }

    /// H_mn: transmitter m as seen at receiver n, dimension M × k_m.
    pub fn get(&self, m: usize, n: usize) -> &CMatrix {
        self.receivers[n].from_transmitter(m)
    }

    pub fn receiver(&self, n: usize) -> &ReceiverChannels {
        &self.receivers[n]
    }

    pub fn num_links(&self) -> usize {
        self.receivers.len()
    }

    /// Draws in receiver-major order: n, then m, then column, then row.
    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.receivers.iter_mut().for_each(|r| r.resample(rng));
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.receivers.iter_mut().for_each(|r| r.scale(factor));
    }
}

/// A fresh realization, deterministic in the state of `rng`.
pub fn sample_channel<R: Rng + ?Sized>(config: &SystemConfig, alloc: &StreamAllocation, rng: &mut R) -> ChannelSet {
    let mut set = ChannelSet::zeros(config, alloc);
    set.resample(rng);
    set
}
