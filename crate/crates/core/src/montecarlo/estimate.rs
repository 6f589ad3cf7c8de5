use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::Serialize;

use super::blocks::map_blocks;
use super::channel::{ChannelSet, ReceiverChannels};
use super::zf::{dot, ZfWorkspace};
use crate::error::{Error, Result};
use crate::types::{Diagnostics, OutageReport, StreamAllocation, SystemConfig, SMALL_SAMPLE_TRIALS};

/// Redraws allowed for a single trial before giving up on it.
const MAX_REDRAWS_PER_TRIAL: u64 = 64;
/// Fraction of trials that may need a redraw before the run is aborted.
const MAX_RESAMPLE_FRACTION: f64 = 1e-4;

/// Post-projection powers of one stream, with the transmit power cancelled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SirSample {
    /// |q·H_nn(j)|²
    pub signal_power: f64,
    /// Σ_{m≠n} (1/k_m) Σ_ℓ |q·H_mn(ℓ)|²
    pub interference_power: f64,
    /// (signal_power / k_self) / interference_power
    pub sir: f64,
}

impl SirSample {
    pub fn new(signal_power: f64, interference_power: f64, k_self: usize) -> Self {
        Self {
            signal_power,
            interference_power,
            sir: (signal_power / k_self as f64) / interference_power,
        }
    }
}

/// A single-link success-probability estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkEstimate {
    pub success_prob: f64,
    pub std_error: f64,
    pub trials: u64,
    pub resamples: u64,
}

impl LinkEstimate {
    fn from_counts(successes: u64, trials: u64, resamples: u64) -> Self {
        let p = successes as f64 / trials as f64;
        Self {
            success_prob: p,
            std_error: binomial_std_error(p, trials),
            trials,
            resamples,
        }
    }
}

fn binomial_std_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::config("need at least one trial"));
    }
    Ok(())
}

fn check_resamples(resamples: u64, trials: u64) -> Result<()> {
    if resamples as f64 > MAX_RESAMPLE_FRACTION * trials as f64 {
        return Err(Error::ResampleLimit { resamples, trials });
    }
    Ok(())
}

fn check_link(config: &SystemConfig, link: usize) -> Result<()> {
    if link >= config.num_links {
        return Err(Error::config(format!(
            "link index {link} out of range for {} links",
            config.num_links
        )));
    }
    Ok(())
}

/// SIR of stream `stream` at receiver `rx.receiver()`.
pub(crate) fn receiver_sir(
    rx: &ReceiverChannels,
    alloc: &StreamAllocation,
    stream: usize,
    ws: &mut ZfWorkspace,
) -> Result<SirSample> {
    let n = rx.receiver();
    let signal = ws.compute(rx.own(), stream)?;
    let mut interference = 0.0;
    for (m, h) in rx.transmitters().filter(|&(m, _)| m != n) {
        let power: f64 = (0..h.cols()).map(|l| dot(&ws.q, h.column(l)).norm_sqr()).sum();
        interference += power / alloc.get(m) as f64;
    }
    Ok(SirSample::new(signal, interference, alloc.get(n)))
}

impl ChannelSet {
    /// SIR of stream `stream` of link `link` in this realization.
    pub fn sir(&self, alloc: &StreamAllocation, link: usize, stream: usize) -> Result<SirSample> {
        receiver_sir(self.receiver(link), alloc, stream, &mut ZfWorkspace::default())
    }
}

/// Draws `rx` until its zero-forcing vector exists; returns the SIR of
/// stream 0 and the number of redraws.
fn draw_receiver<R: Rng + ?Sized>(
    rx: &mut ReceiverChannels,
    alloc: &StreamAllocation,
    ws: &mut ZfWorkspace,
    rng: &mut R,
) -> Result<(SirSample, u64)> {
    let mut redraws = 0;
    loop {
        rx.resample(rng);
        match receiver_sir(rx, alloc, 0, ws) {
            Ok(sample) => return Ok((sample, redraws)),
            Err(Error::RankDeficient { .. }) if redraws < MAX_REDRAWS_PER_TRIAL => redraws += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Full-channel outage estimate for every link.
///
/// Each trial draws a complete [`ChannelSet`] and tests stream 1 of every
/// link against β; the SIR is identically distributed across a link's
/// streams, so one stream per link suffices.
pub fn empirical_outage(
    config: &SystemConfig,
    alloc: &StreamAllocation,
    trials: u64,
    seed: u64,
) -> Result<OutageReport> {
    config.validate()?;
    alloc.validate_for(config)?;
    check_trials(trials)?;
    let beta = config.sir_threshold;
    let blocks = map_blocks(trials, seed, |rng, len| -> Result<(Vec<u64>, u64)> {
        let mut set = ChannelSet::zeros(config, alloc);
        let mut ws = ZfWorkspace::default();
        let mut successes = vec![0u64; config.num_links];
        let mut cleared = vec![false; config.num_links];
        let mut resamples = 0;
        for _ in 0..len {
            let mut redraws = 0;
            loop {
                set.resample(rng);
                let drawn = (0..config.num_links).try_for_each(|n| {
                    receiver_sir(set.receiver(n), alloc, 0, &mut ws).map(|s| cleared[n] = s.sir >= beta)
                });
                match drawn {
                    Ok(()) => break,
                    Err(Error::RankDeficient { .. }) if redraws < MAX_REDRAWS_PER_TRIAL => redraws += 1,
                    Err(e) => return Err(e),
                }
            }
            successes.iter_mut().zip(&cleared).for_each(|(s, &c)| *s += c as u64);
            resamples += redraws;
        }
        Ok((successes, resamples))
    });

    let mut successes = vec![0u64; config.num_links];
    let mut resamples = 0;
    for block in blocks {
        let (counts, redraws) = block?;
        successes.iter_mut().zip(counts).for_each(|(s, c)| *s += c);
        resamples += redraws;
    }
    check_resamples(resamples, trials)?;

    let probs: Vec<f64> = successes.iter().map(|&s| s as f64 / trials as f64).collect();
    let std_error = probs.iter().map(|&p| binomial_std_error(p, trials)).collect();
    let diagnostics = Diagnostics {
        clamp_events: 0,
        resamples,
        small_sample: trials < SMALL_SAMPLE_TRIALS,
    };
    Ok(OutageReport::from_probabilities(config, alloc, probs, Some(std_error), diagnostics))
}

/// Full-channel estimate for one link, drawing only the matrices that reach
/// its receiver.
pub fn empirical_link_outage(
    config: &SystemConfig,
    alloc: &StreamAllocation,
    link: usize,
    trials: u64,
    seed: u64,
) -> Result<LinkEstimate> {
    config.validate()?;
    alloc.validate_for(config)?;
    check_link(config, link)?;
    check_trials(trials)?;
    let beta = config.sir_threshold;
    let blocks = map_blocks(trials, seed, |rng, len| -> Result<(u64, u64)> {
        let mut rx = ReceiverChannels::zeros(config, alloc, link);
        let mut ws = ZfWorkspace::default();
        let (mut successes, mut resamples) = (0, 0);
        for _ in 0..len {
            let (sample, redraws) = draw_receiver(&mut rx, alloc, &mut ws, rng)?;
            successes += (sample.sir >= beta) as u64;
            resamples += redraws;
        }
        Ok((successes, resamples))
    });
    let (mut successes, mut resamples) = (0, 0);
    for block in blocks {
        let (s, r) = block?;
        successes += s;
        resamples += r;
    }
    check_resamples(resamples, trials)?;
    Ok(LinkEstimate::from_counts(successes, trials, resamples))
}

/// `count` full-channel SIR samples of stream 1 of `link`.
pub fn sir_samples_full(
    config: &SystemConfig,
    alloc: &StreamAllocation,
    link: usize,
    count: u64,
    seed: u64,
) -> Result<Vec<SirSample>> {
    config.validate()?;
    alloc.validate_for(config)?;
    check_link(config, link)?;
    let blocks = map_blocks(count, seed, |rng, len| -> Result<Vec<SirSample>> {
        let mut rx = ReceiverChannels::zeros(config, alloc, link);
        let mut ws = ZfWorkspace::default();
        (0..len)
            .map(|_| draw_receiver(&mut rx, alloc, &mut ws, rng).map(|(s, _)| s))
            .collect()
    });
    let mut out = Vec::with_capacity(count as usize);
    for block in blocks {
        out.extend(block?);
    }
    Ok(out)
}

struct DirectModel {
    signal: Gamma<f64>,
    k_self: f64,
    k_others: Vec<usize>,
}

impl DirectModel {
    fn new(antennas: usize, k_self: usize, k_others: &[usize]) -> Result<Self> {
        if k_self == 0 || k_self > antennas {
            return Err(Error::domain(format!("own stream count {k_self} outside [1, {antennas}]")));
        }
        if k_others.is_empty() {
            return Err(Error::domain("at least one interferer is required"));
        }
        if let Some(k) = k_others.iter().find(|&&k| k == 0 || k > antennas) {
            return Err(Error::domain(format!("interferer stream count {k} outside [1, {antennas}]")));
        }
        let signal = Gamma::new((antennas - k_self + 1) as f64, 1.0)
            .map_err(|e| Error::domain(e.to_string()))?;
        Ok(Self {
            signal,
            k_self: k_self as f64,
            k_others: k_others.to_vec(),
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SirSample {
        let s = self.signal.sample(rng);
        let interference: f64 = self
            .k_others
            .iter()
            .map(|&k| {
                let sum: f64 = (0..k).map(|_| -> f64 { Exp1.sample(rng) }).sum();
                sum / k as f64
            })
            .sum();
        SirSample {
            signal_power: s,
            interference_power: interference,
            sir: (s / self.k_self) / interference,
        }
    }
}

/// SIR samples from the marginal model: s ~ Gamma(M − k_self + 1, 1) and
/// I = Σ_m (1/k_m) Σ_ℓ Exp(1).
pub fn sir_samples_direct(
    antennas: usize,
    k_self: usize,
    k_others: &[usize],
    count: u64,
    seed: u64,
) -> Result<Vec<SirSample>> {
    let model = DirectModel::new(antennas, k_self, k_others)?;
    let blocks = map_blocks(count, seed, |rng, len| -> Vec<SirSample> {
        (0..len).map(|_| model.sample(rng)).collect()
    });
    Ok(blocks.concat())
}

/// Estimate of P((s / k_self) / I ≥ β) under the marginal model, with no
/// matrix algebra involved.
pub fn direct_distribution_outage(
    antennas: usize,
    k_self: usize,
    k_others: &[usize],
    beta: f64,
    trials: u64,
    seed: u64,
) -> Result<LinkEstimate> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("threshold must be finite and > 0, got {beta}")));
    }
    check_trials(trials)?;
    let model = DirectModel::new(antennas, k_self, k_others)?;
    let successes: u64 = map_blocks(trials, seed, |rng, len| -> u64 {
        (0..len).map(|_| (model.sample(rng).sir >= beta) as u64).sum()
    })
    .into_iter()
    .sum();
    Ok(LinkEstimate::from_counts(successes, trials, 0))
}
