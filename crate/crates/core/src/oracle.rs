//! Reference computations that share no code path with the closed forms:
//! adaptive Gauss–Kronrod quadrature over the interference density, and the
//! two-sample Kolmogorov–Smirnov test.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::special::{gamma_ccdf, ln_gamma};
use crate::types::GammaParams;

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes (the 7-point rule).
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_870_6,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Interval {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * KRONROD_WEIGHTS[7];
    let mut gauss = fc * GAUSS_WEIGHTS[3];
    for i in 0..7 {
        let dx = half * KRONROD_NODES[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    Interval {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// ∫_a^b f, bisecting the worst interval until the summed error estimate is
/// below `rel_tol · |value|`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Quadrature> {
    let mut heap = BinaryHeap::new();
    heap.push(kronrod_15(&f, a, b));
    loop {
        let value: f64 = heap.iter().map(|i| i.value).sum();
        let error: f64 = heap.iter().map(|i| i.error).sum();
        if !value.is_finite() {
            return Err(Error::domain("integrand produced a non-finite value"));
        }
        if error <= rel_tol * value.abs() || error == 0.0 {
            return Ok(Quadrature {
                value,
                error_estimate: error,
                intervals: heap.len(),
            });
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::domain(format!(
                "quadrature did not converge: error {error:.3e} on value {value:.3e}"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod_15(&f, worst.a, mid));
        heap.push(kronrod_15(&f, mid, worst.b));
    }
}

/// ∫_0^∞ f via x = scale · t / (1 − t).
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, scale: f64, rel_tol: f64) -> Result<Quadrature> {
    integrate(
        |t| {
            let x = scale * t / (1.0 - t);
            let jacobian = scale / ((1.0 - t) * (1.0 - t));
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * jacobian
            }
        },
        0.0,
        1.0,
        rel_tol,
    )
}

fn gamma_density(params: GammaParams, x: f64) -> f64 {
    let GammaParams { shape, rate } = params;
    (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape)).exp()
}

/// E_I[ Q(M − k_self + 1, β k_self I) ] with I ~ Gamma(shape, rate), by
/// quadrature over the interference density.
pub fn success_prob_by_quadrature(
    antennas: usize,
    k_self: usize,
    interference: GammaParams,
    beta: f64,
    rel_tol: f64,
) -> Result<f64> {
    if k_self == 0 || k_self > antennas {
        return Err(Error::domain(format!("own stream count {k_self} outside [1, {antennas}]")));
    }
    let degrees = (antennas - k_self + 1) as f64;
    let b = beta * k_self as f64;
    let q = integrate_half_line(
        |x| gamma_ccdf(degrees, 1.0, b * x).unwrap_or(f64::NAN) * gamma_density(interference, x),
        interference.mean(),
        rel_tol,
    )?;
    Ok(q.value)
}

/// Quadrature reference for the equal-k case: k I ~ Gamma((N − 1) k, 1),
/// i.e. I ~ Gamma((N − 1) k, k).
pub fn equal_k_success_by_quadrature(
    antennas: usize,
    links: usize,
    k_self: usize,
    k_other: usize,
    beta: f64,
    rel_tol: f64,
) -> Result<f64> {
    let interference = GammaParams::new(((links - 1) * k_other) as f64, k_other as f64)?;
    success_prob_by_quadrature(antennas, k_self, interference, beta, rel_tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic Kolmogorov
/// distribution and the Stephens small-sample correction.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("KS test needs two non-empty samples"));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::domain("KS test samples contain NaN"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let en = (na * nb / (na + nb)).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
    })
}

/// Q_KS(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2 j² λ²}.
fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let jf = j as f64;
        let term = sign * (-2.0 * jf * jf * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomials_and_exponentials() {
        let q = integrate(|x| x * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert_relative_eq!(q.value, 4.0, max_relative = 1e-14);
        let q = integrate_half_line(|x| (-x).exp(), 1.0, 1e-13).unwrap();
        assert_relative_eq!(q.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn gamma_tail_by_quadrature_matches_frozen_reference() {
        let params = GammaParams::new(2.5, 1.3).unwrap();
        let q = integrate(|x| gamma_density(params, x), 0.0, 2.0, 1e-14).unwrap();
        assert_relative_eq!(1.0 - q.value, 0.391_962_891_599_633_771_93, max_relative = 1e-10);
    }

    #[test]
    fn quadrature_recovers_the_exact_single_antenna_case() {
        for beta in [0.5, 1.0, 4.0] {
            let p = equal_k_success_by_quadrature(1, 2, 1, 1, beta, 1e-12).unwrap();
            assert_relative_eq!(p, 1.0 / (1.0 + beta), max_relative = 1e-10);
        }
    }

    #[test]
    fn ks_identical_and_shifted() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let same = ks_two_sample(&a, &a).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert_eq!(same.p_value, 1.0);
        let shifted: Vec<f64> = a.iter().map(|x| x + 0.2).collect();
        let r = ks_two_sample(&a, &shifted).unwrap();
        assert!((r.statistic - 0.2).abs() <= 2e-3);
        assert!(r.p_value < 1e-10);
    }
}
