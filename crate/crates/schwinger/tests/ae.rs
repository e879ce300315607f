//! Amplitude estimation: query formulas, Grover statistics against an
//! explicit rotation, confidence intervals against the beta quantile, and
//! seeded run statistics.

use approx::assert_abs_diff_eq;
use nalgebra::Matrix2;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Beta, ContinuousCDF};

use schwinger::ae::*;
use schwinger::model::{self, ModelParams};

#[test]
fn sampling_baseline() {
    assert_eq!(hoeffding_queries(0.005, 0.05).unwrap(), 73778);
    let direct = ((2.0f64 / 0.05).ln() / (2.0 * 0.005 * 0.005)).ceil() as u64;
    assert_eq!(hoeffding_queries(0.005, 0.05).unwrap(), direct);
    assert!(hoeffding_queries(0.0, 0.05).is_err());
    assert!(hoeffding_queries(0.01, 1.0).is_err());
}

#[test]
fn worst_case_formula() {
    assert_eq!(chebae_query_formula(0.005).unwrap(), 2964);
    assert!(chebae_query_formula(0.01).unwrap() < 2964);
}

#[test]
fn grover_probability_is_an_explicit_rotation() {
    for omega in [0.0, 0.1, 0.37, 0.8, 1.0] {
        let theta = f64::asin(omega);
        let (s, c) = (omega, theta.cos());
        // Reflections about the bad subspace and the prepared state on the
        // two-dimensional plane; their product is a rotation by 2 theta.
        let s_chi = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        let psi = nalgebra::Vector2::new(c, s);
        let s_psi = psi * psi.transpose() * 2.0 - Matrix2::identity();
        let q = s_psi * s_chi;
        let mut v = psi;
        for k in 0..12u64 {
            assert_abs_diff_eq!(grover_probability(omega, k), v[1] * v[1], epsilon = 1e-12);
            v = q * v;
        }
    }
}

#[test]
fn grover_outcomes_follow_their_probability() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (omega, k, n) = (0.3, 2, 40_000);
    let hits = (0..n).filter(|_| grover_outcome(omega, k, &mut rng).unwrap()).count() as f64;
    let p = grover_probability(omega, k);
    assert!((hits / n as f64 - p).abs() < 4.0 * (p * (1.0 - p) / n as f64).sqrt());
    assert!(grover_outcome(1.2, 0, &mut rng).is_err());
}

#[test]
fn clopper_pearson_matches_beta_quantiles() {
    for (x, n, delta) in [(3u64, 10u64, 0.05), (0, 12, 0.1), (12, 12, 0.1), (57, 200, 0.01), (1, 3, 1e-4)] {
        let (lo, hi) = clopper_pearson(x, n, delta);
        let want_lo = if x == 0 { 0.0 } else { Beta::new(x as f64, (n - x + 1) as f64).unwrap().inverse_cdf(delta / 2.0) };
        let want_hi = if x == n { 1.0 } else { Beta::new((x + 1) as f64, (n - x) as f64).unwrap().inverse_cdf(1.0 - delta / 2.0) };
        assert_abs_diff_eq!(lo, want_lo, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, want_hi, epsilon = 1e-9);
    }
}

#[test]
fn runs_are_reproducible_by_seed() {
    let a = simulate_adaptive_ae(0.42, 0.01, 0.05, 99).unwrap();
    let b = simulate_adaptive_ae(0.42, 0.01, 0.05, 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.q_psi, a.q_pi);
    assert_eq!(a.queries(), a.q_psi + a.q_pi);
    assert!(a.total_cost() > a.queries());
    let rec = a.record();
    assert_eq!(rec["seed"], 99);
    assert_eq!(rec["q_psi"], a.q_psi);
    let batch = batch(0.42, 0.01, 0.05, 99, 3).unwrap();
    assert_eq!(batch[0], a);
    assert_eq!(batch.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![99, 100, 101]);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(simulate_adaptive_ae(-0.1, 0.01, 0.05, 0).is_err());
    assert!(simulate_adaptive_ae(0.5, 0.0, 0.05, 0).is_err());
    assert!(simulate_adaptive_ae(0.5, 0.01, 0.0, 0).is_err());
    assert!(simulate_with(0.5, 0.01, 0.05, 0, Schedule { max_batch: 2, min_batch: 3 }).is_err());
}

#[test]
fn coarse_targets_are_cheap() {
    let runs = batch(0.5, 0.2, 0.05, 0, 200).unwrap();
    let mean = runs.iter().map(|r| r.total_cost() as f64).sum::<f64>() / 200.0;
    assert!(mean < 100.0, "{mean}");
    assert!(runs.iter().all(|r| r.succeeded));
}

#[test]
fn failure_rate_and_cost_on_a_grid() {
    let (eps, delta) = (0.01, 0.05);
    let mut failures = 0;
    let mut total = 0;
    for omega in [0.05, 0.25, 0.5, 0.75, 0.95] {
        let runs = batch(omega, eps, delta, 1000, 200).unwrap();
        failures += runs.iter().filter(|r| !r.succeeded).count();
        total += runs.len();
        let mean = runs.iter().map(|r| r.queries() as f64).sum::<f64>() / runs.len() as f64;
        let sampling = hoeffding_queries(eps, delta).unwrap() as f64;
        assert!(mean < sampling / 5.0, "omega {omega}: {mean}");
    }
    let rate = failures as f64 / total as f64;
    assert!(rate <= delta + 3.0 * (delta * (1.0 - delta) / total as f64).sqrt(), "{rate}");
}

#[test]
fn end_to_end_persistence() {
    let p = ModelParams::benchmark(4);
    let g = model::vacuum_persistence(&p, 1.0).unwrap().norm();
    let r = end_to_end_vpa(&p, 1.0, 0.02, 0.05, 3).unwrap();
    assert_abs_diff_eq!(r.true_amplitude, g, epsilon = 1e-12);
    assert_eq!(r.tolerance, 0.02);
    assert!(r.succeeded);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimates_land_in_the_unit_interval(omega in 0.0f64..=1.0, seed in any::<u64>()) {
        let r = simulate_adaptive_ae(omega, 0.05, 0.1, seed).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.estimate));
        prop_assert!(r.max_depth <= r.q_psi.max(1));
    }

    #[test]
    fn intervals_nest_as_confidence_grows(x in 0u64..50, extra in 0u64..50, d in 0.001f64..0.5) {
        let n = x + extra.max(1);
        let (lo, hi) = clopper_pearson(x, n, d);
        let (lo2, hi2) = clopper_pearson(x, n, d / 10.0);
        prop_assert!(lo2 <= lo + 1e-12 && hi <= hi2 + 1e-12);
        prop_assert!(lo <= x as f64 / n as f64 + 1e-12 && x as f64 / n as f64 <= hi + 1e-12);
    }
}
