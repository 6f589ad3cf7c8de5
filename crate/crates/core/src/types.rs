//! Scenario, decision variable and result types shared across the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An N-link, M-antenna interference channel with SIR threshold β and a
/// per-stream rate R in bits/sec/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub num_links: usize,
    pub num_antennas: usize,
    pub sir_threshold: f64,
    pub rate: f64,
}

impl SystemConfig {
    pub fn new(num_links: usize, num_antennas: usize, sir_threshold: f64, rate: f64) -> Result<Self> {
        let config = Self {
            num_links,
            num_antennas,
            sir_threshold,
            rate,
        };
        config.validate()?;
        Ok(config)
    }

    /// Uses the Shannon mapping β = 2^R − 1.
    pub fn from_rate(num_links: usize, num_antennas: usize, rate: f64) -> Result<Self> {
        Self::new(num_links, num_antennas, beta_from_rate(rate), rate)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_links < 2 {
            return Err(Error::config(format!(
                "need at least 2 links (one interferer), got {}",
                self.num_links
            )));
        }
        if self.num_antennas < 1 {
            return Err(Error::config("need at least one antenna"));
        }
        if !(self.sir_threshold > 0.0) || !self.sir_threshold.is_finite() {
            return Err(Error::config(format!(
                "SIR threshold must be finite and > 0, got {}",
                self.sir_threshold
            )));
        }
        if !(self.rate > 0.0) || !self.rate.is_finite() {
            return Err(Error::config(format!("rate must be finite and > 0, got {}", self.rate)));
        }
        Ok(())
    }

    pub fn with_links(self, num_links: usize) -> Self {
        Self { num_links, ..self }
    }

    pub fn with_threshold(self, sir_threshold: f64) -> Self {
        Self {
            sir_threshold,
            ..self
        }
    }
}

pub fn beta_from_rate(rate: f64) -> f64 {
    rate.exp2() - 1.0
}

/// Streams per link, (k_1, …, k_N).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StreamAllocation {
    streams: Vec<usize>,
}

impl StreamAllocation {
    pub fn new(streams: Vec<usize>) -> Result<Self> {
        if streams.is_empty() {
            return Err(Error::config("allocation must name at least one link"));
        }
        if let Some(pos) = streams.iter().position(|&k| k == 0) {
            return Err(Error::config(format!("link {} has zero streams", pos + 1)));
        }
        Ok(Self { streams })
    }

    pub fn ones(num_links: usize) -> Self {
        Self {
            streams: vec![1; num_links],
        }
    }

    /// Link `link` sends `k_self` streams, every other link `k_other`.
    pub fn single_deviation(num_links: usize, link: usize, k_self: usize, k_other: usize) -> Result<Self> {
        let mut streams = vec![k_other; num_links];
        if link >= num_links {
            return Err(Error::config(format!("link index {link} out of range")));
        }
        streams[link] = k_self;
        Self::new(streams)
    }

    pub fn validate_for(&self, config: &SystemConfig) -> Result<()> {
        if self.streams.len() != config.num_links {
            return Err(Error::config(format!(
                "allocation has {} entries but the scenario has {} links",
                self.streams.len(),
                config.num_links
            )));
        }
        if let Some((n, k)) = self
            .streams
            .iter()
            .enumerate()
            .find(|(_, &k)| k > config.num_antennas)
        {
            return Err(Error::config(format!(
                "link {} uses {k} streams but only {} antennas are available",
                n + 1,
                config.num_antennas
            )));
        }
        Ok(())
    }

    pub fn streams(&self) -> &[usize] {
        &self.streams
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }

    pub fn get(&self, link: usize) -> usize {
        self.streams[link]
    }

    pub fn with(&self, link: usize, k: usize) -> Self {
        let mut streams = self.streams.clone();
        streams[link] = k;
        Self { streams }
    }

    /// Stream counts of every link except `link`, in link order.
    pub fn interferers(&self, link: usize) -> Vec<usize> {
        self.streams
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != link)
            .map(|(_, &k)| k)
            .collect()
    }
}

impl std::fmt::Display for StreamAllocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.streams.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Shape/rate parameters of a Gamma density α^λ x^{λ−1} e^{−αx} / Γ(λ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub shape: f64,
    pub rate: f64,
}

impl GammaParams {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite() && rate > 0.0 && rate.is_finite()) {
            return Err(Error::domain(format!(
                "Gamma parameters must be finite and positive, got shape {shape}, rate {rate}"
            )));
        }
        Ok(Self { shape, rate })
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn variance(&self) -> f64 {
        self.shape / (self.rate * self.rate)
    }
}

/// Counters that explain how a report was produced.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Probabilities that left [0, 1] by rounding and were clamped back.
    pub clamp_events: u64,
    /// Channel realizations redrawn after a numerically rank-deficient draw.
    pub resamples: u64,
    /// Monte Carlo estimate from fewer than [`SMALL_SAMPLE_TRIALS`] trials.
    pub small_sample: bool,
}

pub const SMALL_SAMPLE_TRIALS: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageReport {
    pub per_link_success_prob: Vec<f64>,
    pub per_link_capacity: Vec<f64>,
    pub sum_capacity: f64,
    /// Binomial standard errors; `None` for closed-form results.
    pub std_error: Option<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl OutageReport {
    /// Builds the report so that C_n = R · k_n · p_n and the sum is their
    /// total in link order.
    pub fn from_probabilities(
        config: &SystemConfig,
        alloc: &StreamAllocation,
        success_prob: Vec<f64>,
        std_error: Option<Vec<f64>>,
        diagnostics: Diagnostics,
    ) -> Self {
        let per_link_capacity: Vec<f64> = success_prob
            .iter()
            .zip(alloc.streams())
            .map(|(&p, &k)| link_capacity(config.rate, k, p))
            .collect();
        let sum_capacity = per_link_capacity.iter().sum();
        Self {
            per_link_success_prob: success_prob,
            per_link_capacity,
            sum_capacity,
            std_error,
            diagnostics,
        }
    }
}

/// R · k · p, in a fixed evaluation order so that serialized reports can be
/// recomputed bit-for-bit.
pub fn link_capacity(rate: f64, streams: usize, success_prob: f64) -> f64 {
    rate * streams as f64 * success_prob
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_invariants() {
        assert!(SystemConfig::new(1, 2, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 2, 0.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 2, 1.0, -1.0).is_err());
        assert!(SystemConfig::new(2, 1, 1.0, 1.0).is_ok());
    }

    #[test]
    fn rate_to_beta() {
        let c = SystemConfig::from_rate(3, 2, 2.0).unwrap();
        assert_eq!(c.sir_threshold, 3.0);
        assert_eq!(c.rate, 2.0);
    }

    #[test]
    fn allocation_bounds() {
        let config = SystemConfig::new(3, 2, 1.0, 1.0).unwrap();
        assert!(StreamAllocation::new(vec![1, 0, 1]).is_err());
        assert!(StreamAllocation::new(vec![1, 3, 1]).unwrap().validate_for(&config).is_err());
        assert!(StreamAllocation::new(vec![1, 2]).unwrap().validate_for(&config).is_err());
        let a = StreamAllocation::new(vec![2, 1, 2]).unwrap();
        a.validate_for(&config).unwrap();
        assert_eq!(a.interferers(1), vec![2, 2]);
        assert_eq!(a.to_string(), "(2,1,2)");
    }

    #[test]
    fn report_invariants() {
        let config = SystemConfig::new(2, 3, 1.0, 1.5).unwrap();
        let alloc = StreamAllocation::new(vec![1, 3]).unwrap();
        let r = OutageReport::from_probabilities(&config, &alloc, vec![0.4, 0.1], None, Diagnostics::default());
        assert_eq!(r.per_link_capacity[0], 1.5 * 0.4);
        assert_eq!(r.per_link_capacity[1], 1.5 * 3.0 * 0.1);
        assert_eq!(r.sum_capacity, r.per_link_capacity[0] + r.per_link_capacity[1]);
    }
}
