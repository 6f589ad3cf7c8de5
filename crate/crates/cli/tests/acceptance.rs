//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line and
//! then asserts, so `cargo test --test acceptance -- --nocapture` gives a
//! per-criterion summary.

use std::process::Command;
use std::time::Instant;

use mimo_outage::analytic::{self, IndexConvention};
use mimo_outage::montecarlo::{self, block_rng, sample_channel, zf_nulling_vector};
use mimo_outage::optimizer::{self, Objective, SearchMode, DEFAULT_SCAN_CAP, DEFAULT_WINDOW};
use mimo_outage::{oracle, StreamAllocation, SystemConfig};

fn report(id: u32, pass: bool, detail: String) {
    println!("criterion {id}: {} : {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

/// (M, N, k_self, k_other, β) for criteria 2 and 3.
fn equal_k_grid() -> Vec<(usize, usize, usize, usize, f64)> {
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
    grid
}

#[test]
fn criterion_1_exact_case() {
    let start = Instant::now();
    let mut worst_analytic = 0.0f64;
    let mut worst_sigma = 0.0f64;
    for (i, beta) in [0.5, 1.0, 4.0].into_iter().enumerate() {
        let exact = 1.0 / (1.0 + beta);
        let p = analytic::success_prob_equal_k(1, 2, 1, 1, beta).unwrap();
        worst_analytic = worst_analytic.max((p - exact).abs());
        let config = SystemConfig::new(2, 1, beta, 1.0).unwrap();
        let mc = montecarlo::empirical_outage(&config, &StreamAllocation::ones(2), 1_000_000, 100 + i as u64).unwrap();
        for (p_mc, se) in mc.per_link_success_prob.iter().zip(mc.std_error.as_ref().unwrap()) {
            worst_sigma = worst_sigma.max((p_mc - exact).abs() / se);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        worst_analytic <= 1e-12 && worst_sigma <= 3.0 && elapsed < 10.0,
        format!("max analytic error {worst_analytic:.1e}, max MC deviation {worst_sigma:.2} se, {elapsed:.1} s"),
    );
}

#[test]
fn criterion_2_quadrature_oracle() {
    let start = Instant::now();
    let grid = equal_k_grid();
    let mut worst = 0.0f64;
    let mut printed_failures = 0;
    for &(m, n, k_self, k_other, beta) in &grid {
        let reference = oracle::equal_k_success_by_quadrature(m, n, k_self, k_other, beta, 1e-11).unwrap();
        let consistent = analytic::success_prob_equal_k(m, n, k_self, k_other, beta).unwrap();
        let printed =
            analytic::success_prob_equal_k_with(IndexConvention::Printed, m, n, k_self, k_other, beta).unwrap();
        worst = worst.max((consistent - reference).abs() / reference);
        if (printed - reference).abs() / reference > 1e-8 {
            printed_failures += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        worst <= 1e-8 && printed_failures > 0 && elapsed < 60.0,
        format!(
            "{} scenarios, max relative error {worst:.1e}; printed-index variant fails {printed_failures}/{}; {elapsed:.1} s",
            grid.len(),
            grid.len()
        ),
    );
}

#[test]
fn criterion_3_full_channel_monte_carlo() {
    let start = Instant::now();
    let grid = equal_k_grid();
    let mut failures = Vec::new();
    let mut worst_ratio = 0.0f64;
    for (i, &(m, n, k_self, k_other, beta)) in grid.iter().enumerate() {
        let config = SystemConfig::new(n, m, beta, 1.0).unwrap();
        let alloc = StreamAllocation::single_deviation(n, 0, k_self, k_other).unwrap();
        let est = montecarlo::empirical_link_outage(&config, &alloc, 0, 1_000_000, 1000 + i as u64).unwrap();
        let closed = analytic::success_prob_equal_k(m, n, k_self, k_other, beta).unwrap();
        let tol = (3.0 * est.std_error).max(5e-3);
        let err = (closed - est.success_prob).abs();
        worst_ratio = worst_ratio.max(err / tol);
        if err > tol {
            failures.push(format!("M={m} N={n} k={k_self}/{k_other} beta={beta}: {err:.2e} > {tol:.2e}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        failures.is_empty(),
        format!(
            "{} scenarios at 1e6 trials, worst error/tolerance {worst_ratio:.2}, {elapsed:.0} s {failures:?}",
            grid.len()
        ),
    );
}

#[test]
fn criterion_4_gamma_approximation() {
    let start = Instant::now();
    let mut heterogeneous = Vec::new();
    let mut equal = Vec::new();
    for m in [2usize, 4] {
        for k_self in [1usize, 2] {
            for beta in [0.5, 1.0, 4.0] {
                for ks in [vec![1usize, 2], vec![1, 2, 4], vec![1, 1, 2, 3]] {
                    if ks.iter().all(|&k| k <= m) {
                        heterogeneous.push((m, k_self, ks, beta));
                    }
                }
                for ks in [vec![1usize, 1, 1], vec![2, 2]] {
                    equal.push((m, k_self, ks, beta));
                }
            }
        }
    }
    let mut seed = 5000;
    let mut worst_abs = 0.0f64;
    let mut worst_sigma = 0.0f64;
    for (m, k_self, ks, beta) in &heterogeneous {
        seed += 1;
        let approx = analytic::success_prob_general(*m, *k_self, ks, *beta).unwrap();
        let est = montecarlo::direct_distribution_outage(*m, *k_self, ks, *beta, 10_000_000, seed).unwrap();
        worst_abs = worst_abs.max((approx - est.success_prob).abs());
    }
    for (m, k_self, ks, beta) in &equal {
        seed += 1;
        let approx = analytic::success_prob_general(*m, *k_self, ks, *beta).unwrap();
        let est = montecarlo::direct_distribution_outage(*m, *k_self, ks, *beta, 10_000_000, seed).unwrap();
        worst_sigma = worst_sigma.max((approx - est.success_prob).abs() / est.std_error);
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        worst_abs <= 2e-2 && worst_sigma <= 3.0,
        format!(
            "{} heterogeneous scenarios max |error| {worst_abs:.2e}; {} equal-weight scenarios max {worst_sigma:.2} se; {elapsed:.0} s",
            heterogeneous.len(),
            equal.len()
        ),
    );
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

#[test]
fn criterion_5_single_stream_theorem() {
    let start = Instant::now();
    let curve = |links: usize| -> Vec<f64> {
        let config = SystemConfig::new(links, 10, 1.0, 1.0).unwrap();
        (1..=10).map(|k| analytic::link_capacity_equal_k(&config, k, 1).unwrap()).collect()
    };
    let first_decreasing = (2..=30).find(|&n| strictly_decreasing(&curve(n)));
    let nstar = analytic::min_links_single_stream(10, 1.0, 1).unwrap().links;
    let at_nstar = strictly_decreasing(&curve(nstar));
    let analytic_secs = start.elapsed().as_secs_f64();

    let config = SystemConfig::new(nstar, 10, 1.0, 1.0).unwrap();
    let trials = 100_000;
    let mc: Vec<(f64, f64)> = (1..=10)
        .map(|k| {
            let alloc = StreamAllocation::single_deviation(nstar, 0, k, 1).unwrap();
            let est = montecarlo::empirical_link_outage(&config, &alloc, 0, trials, 77).unwrap();
            (k as f64 * est.success_prob, k as f64 * est.std_error)
        })
        .collect();
    let argmax = (0..10).max_by(|&a, &b| mc[a].0.total_cmp(&mc[b].0)).unwrap() + 1;
    let margin = (mc[0].0 - mc[1].0) / (mc[0].1.powi(2) + mc[1].1.powi(2)).sqrt();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        first_decreasing.is_some() && at_nstar && argmax == 1 && margin > 3.0 && analytic_secs < 60.0 && elapsed < 600.0,
        format!(
            "first strictly decreasing N = {first_decreasing:?}; N* = {nstar} decreasing = {at_nstar}; MC argmax k_1 = {argmax}, C(1) - C(2) = {margin:.1} se; {elapsed:.0} s"
        ),
    );
}

#[test]
fn criterion_6_symmetric_single_stream_optimum() {
    let start = Instant::now();
    let config = SystemConfig::new(3, 3, 1.0, 1.0).unwrap();
    let analytic = optimizer::maximize_sum_capacity(&config, SearchMode::exhaustive(), Objective::Analytic).unwrap();
    let mc = optimizer::maximize_sum_capacity(
        &config,
        SearchMode::exhaustive(),
        Objective::MonteCarlo { trials: 100_000, seed: 31 },
    )
    .unwrap();
    let ones = StreamAllocation::ones(3);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        analytic.best_allocation == ones && mc.best_allocation == ones && analytic.evaluations == 27 && elapsed < 300.0,
        format!(
            "analytic argmax {} ({:.4}), MC argmax {} ({:.4}), {} candidates, {elapsed:.0} s",
            analytic.best_allocation, analytic.best_value, mc.best_allocation, mc.best_value, analytic.evaluations
        ),
    );
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn criterion_7_distributional_ground_truth() {
    let samples = 100_000u64;
    let antennas = 4;
    let k_others = [1usize, 2, 4];
    let mut worst_sigma = 0.0f64;
    let mut min_p = 1.0f64;
    for (case, k_self) in [1usize, 2, 4].into_iter().enumerate() {
        let mut streams = vec![k_self];
        streams.extend(k_others);
        let alloc = StreamAllocation::new(streams).unwrap();
        let config = SystemConfig::new(alloc.len(), antennas, 1.0, 1.0).unwrap();

        // Per-realization projected powers straight from the channel matrices.
        let mut rng = block_rng(700 + case as u64, 0);
        let mut signal = Vec::with_capacity(samples as usize);
        let mut summands: Vec<Vec<f64>> = vec![Vec::with_capacity(samples as usize); k_others.iter().sum()];
        for _ in 0..samples {
            let set = sample_channel(&config, &alloc, &mut rng);
            let q = zf_nulling_vector(set.get(0, 0), 0).unwrap();
            signal.push(q.apply(set.get(0, 0).column(0)).norm_sqr());
            let mut idx = 0;
            for m in 1..alloc.len() {
                let h = set.get(m, 0);
                for l in 0..h.cols() {
                    summands[idx].push(q.apply(h.column(l)).norm_sqr());
                    idx += 1;
                }
            }
        }
        let (mean_s, se_s) = mean_and_se(&signal);
        worst_sigma = worst_sigma.max((mean_s - (antennas - k_self + 1) as f64).abs() / se_s);
        for s in &summands {
            let (mean, se) = mean_and_se(s);
            worst_sigma = worst_sigma.max((mean - 1.0).abs() / se);
        }

        let full: Vec<f64> = montecarlo::sir_samples_full(&config, &alloc, 0, samples, 800 + case as u64)
            .unwrap()
            .iter()
            .map(|s| s.sir)
            .collect();
        let direct: Vec<f64> = montecarlo::sir_samples_direct(antennas, k_self, &k_others, samples, 900 + case as u64)
            .unwrap()
            .iter()
            .map(|s| s.sir)
            .collect();
        min_p = min_p.min(oracle::ks_two_sample(&full, &direct).unwrap().p_value);
    }
    report(
        7,
        worst_sigma <= 3.0 && min_p > 0.01,
        format!("max mean deviation {worst_sigma:.2} se over signal and interference summands; min KS p-value {min_p:.3}"),
    );
}

#[test]
fn criterion_8_threshold_behaviour() {
    let betas = [0.25, 0.5, 1.0, 2.0, 4.0];
    let m5: Vec<usize> = betas
        .iter()
        .map(|&b| optimizer::empirical_threshold(5, b, 1, DEFAULT_WINDOW, DEFAULT_SCAN_CAP).unwrap().empirical)
        .collect();
    let non_increasing = m5.windows(2).all(|w| w[1] <= w[0]);
    let mut pairs = Vec::new();
    let mut conservative = true;
    for m in [3usize, 5, 10] {
        for beta in [1.0, 2.0, 4.0] {
            let r = optimizer::empirical_threshold(m, beta, 1, DEFAULT_WINDOW, DEFAULT_SCAN_CAP).unwrap();
            conservative &= r.analytic.links >= r.empirical;
            pairs.push(format!("M={m},b={beta}:{}>={}", r.analytic.links, r.empirical));
        }
    }
    report(
        8,
        non_increasing && conservative,
        format!("M=5 empirical thresholds {m5:?}; analytic vs empirical {}", pairs.join(" ")),
    );
}

#[test]
fn criterion_9_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_mimo-outage");
    let cases: [&[&str]; 4] = [
        &["capacity", "--links", "4", "--antennas", "3", "--alloc", "3,1,2,1", "--backend", "both", "--trials", "50000", "--seed", "5"],
        &["figure", "fig2", "--backend", "mc", "--trials", "20000", "--seed", "8"],
        &["figure", "fig3", "--backend", "both", "--trials", "5000"],
        &["optimize", "--links", "3", "--antennas", "2", "--mode", "coordinate", "--objective", "mc", "--trials", "10000"],
    ];
    let run = |workers: Option<&str>, args: &[&str]| -> Vec<u8> {
        let mut cmd = Command::new(bin);
        if let Some(w) = workers {
            cmd.args(["--workers", w]);
        }
        let out = cmd.args(args).output().unwrap();
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let mut mismatches = Vec::new();
    for args in cases {
        let reference = run(None, args);
        for workers in [None, Some("1"), Some("2"), Some("4")] {
            if run(workers, args) != reference {
                mismatches.push(format!("{} workers={workers:?}", args[..2].join(" ")));
            }
        }
    }
    report(
        9,
        mismatches.is_empty(),
        format!("{} commands x 4 reruns (default, 1, 2, 4 workers); mismatches {mismatches:?}", cases.len()),
    );
}
