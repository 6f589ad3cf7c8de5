use approx::assert_relative_eq;
use mimo_outage::analytic;
use mimo_outage::montecarlo::{direct_distribution_outage, empirical_link_outage};
use mimo_outage::optimizer::{self, Objective, SearchMode};
use mimo_outage::{StreamAllocation, SystemConfig};

/// Adding a stream to an interferer can raise the success probability when
/// the link is already reliable: with one interferer, I goes from Exp(1) to
/// Gamma(2, 2) which has the same mean but less spread.
#[test]
fn extra_interferer_stream_can_help_a_reliable_link() {
    let before = analytic::success_prob_general(4, 1, &[1], 1.0).unwrap();
    let after = analytic::success_prob_general(4, 1, &[2], 1.0).unwrap();
    assert_relative_eq!(before, 0.9375, max_relative = 1e-12);
    assert_relative_eq!(after, 232.0 / 243.0, max_relative = 1e-12);
    assert!(after > before);

    let config = SystemConfig::new(2, 4, 1.0, 1.0).unwrap();
    let mc_before = empirical_link_outage(&config, &StreamAllocation::new(vec![1, 1]).unwrap(), 0, 400_000, 2).unwrap();
    let mc_after = empirical_link_outage(&config, &StreamAllocation::new(vec![1, 2]).unwrap(), 0, 400_000, 2).unwrap();
    assert!((mc_before.success_prob - before).abs() < 4.0 * mc_before.std_error);
    assert!((mc_after.success_prob - after).abs() < 4.0 * mc_after.std_error);
    assert!(mc_after.success_prob > mc_before.success_prob);
}

#[test]
fn interference_limited_links_lose_from_extra_interferer_streams() {
    for (m, k_self, others, beta) in [(2, 1, vec![1, 1, 1], 1.0), (4, 2, vec![1, 2, 1], 1.0), (3, 1, vec![2, 2, 1, 1], 2.0)] {
        let base = analytic::success_prob_general(m, k_self, &others, beta).unwrap();
        assert!(base <= 0.5, "scenario chosen in the low-success regime");
        let mut more = others.clone();
        more[0] += 1;
        let more_p = analytic::success_prob_general(m, k_self, &more, beta).unwrap();
        assert!(more_p <= base);
        let mc_base = direct_distribution_outage(m, k_self, &others, beta, 1_000_000, 9).unwrap();
        let mc_more = direct_distribution_outage(m, k_self, &more, beta, 1_000_000, 9).unwrap();
        assert!(mc_more.success_prob <= mc_base.success_prob + 3.0 * mc_base.std_error);
    }
}

#[test]
fn exhaustive_and_coordinate_agree_on_small_systems() {
    for (n, m, beta) in [(2, 3, 1.0), (3, 2, 0.5), (4, 2, 2.0), (3, 3, 4.0)] {
        let config = SystemConfig::new(n, m, beta, 1.0).unwrap();
        let ex = optimizer::maximize_sum_capacity(&config, SearchMode::exhaustive(), Objective::Analytic).unwrap();
        let co = optimizer::maximize_sum_capacity(&config, SearchMode::coordinate(), Objective::Analytic).unwrap();
        assert_eq!(co.fixed_point, Some(true));
        assert_relative_eq!(ex.best_value, co.best_value, max_relative = 1e-12);
        assert_eq!(ex.per_candidate_values.unwrap().len(), m.pow(n as u32));
    }
}

#[test]
fn two_links_can_prefer_more_streams() {
    // Few links and a generous threshold leave room for spatial multiplexing.
    let config = SystemConfig::new(2, 3, 1.0, 1.0).unwrap();
    let c1 = analytic::link_capacity_equal_k(&config, 1, 1).unwrap();
    let c2 = analytic::link_capacity_equal_k(&config, 2, 1).unwrap();
    assert_relative_eq!(c1, 0.875, max_relative = 1e-12);
    assert!(c2 > c1);
}
