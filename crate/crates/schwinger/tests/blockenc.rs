//! Block-encoding: semantic evaluator against the dense Hamiltonian,
//! simulated fragments, the squaring identity and the assembled tallies.

use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schwinger::blockenc::*;
use schwinger::estimator::block_encoding_cost;
use schwinger::model::{self, normalization, ModelParams, DEFAULT_DENSE_LIMIT};
use schwinger::subroutines::p1::branch_weights;
use schwinger::subroutines::BuildOptions;

fn h_mod(p: &ModelParams) -> DMatrix<Complex64> {
    model::to_dense(&model::build_hamiltonian(p).unwrap(), false, DEFAULT_DENSE_LIMIT).unwrap().matrix
}

fn op_norm(m: &DMatrix<Complex64>) -> f64 {
    model::spectral_norm(m)
}

#[test]
fn exact_budget_reproduces_the_hamiltonian() {
    for n in [8, 10] {
        let p = ModelParams::benchmark(n);
        let s = semantic_block(&p, &ErrorBudget::zero()).unwrap();
        assert!(op_norm(&(h_mod(&p) - &s.matrix)) <= 1e-10, "N={n}");
        let r = verify(&p, 0.0, VerifyMode::Semantic).unwrap();
        assert!(r.pass && r.measured_error <= EXACT_TOLERANCE);
        assert_eq!(r.t_count_formula, None);
    }
}

#[test]
fn default_budget_stays_within_epsilon() {
    for (n, eps) in [(8, 1e-2), (8, 1e-3), (10, 1e-2)] {
        let r = verify(&ModelParams::benchmark(n), eps, VerifyMode::Semantic).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.measured_error <= eps);
        assert!(r.measured_error > 0.0);
        assert!(r.bound <= eps * (1.0 + 1e-12));
        assert_eq!(r.t_count_formula, r.t_count_tally);
    }
}

#[test]
fn semantic_block_is_hermitian_and_contained() {
    let p = ModelParams::benchmark(8);
    let alpha = normalization(&p).unwrap().alpha_s;
    let budget = ErrorBudget::split(1e-2, alpha);
    let s = semantic_block(&p, &budget).unwrap();
    assert!(s.hermiticity_defect() < 1e-12);
    let eig = SymmetricEigen::new(s.matrix.clone());
    assert!(eig.eigenvalues.iter().all(|l| l.abs() <= alpha * (1.0 + 1e-12)));
}

#[test]
fn zero_coupling_keeps_only_hopping_and_mass() {
    let p = ModelParams { coupling: 0.0, ..ModelParams::benchmark(8) };
    let s = semantic_block(&p, &ErrorBudget::zero()).unwrap();
    assert!(op_norm(&(h_mod(&p) - &s.matrix)) <= 1e-10);
    let w = branch_weights(&p).unwrap();
    assert_eq!(&w[3..], &[0.0, 0.0, 0.0]);
}

#[test]
fn splitter_probabilities_are_the_normalized_weights() {
    let p = ModelParams::benchmark(10);
    let alpha = normalization(&p).unwrap().alpha_s;
    let exact = split_probabilities(&p, 0.0).unwrap();
    for (x, w) in exact.iter().zip(branch_weights(&p).unwrap()) {
        assert_abs_diff_eq!(*x, w / alpha, epsilon = 1e-12);
    }
    let off = split_probabilities(&p, 1e-3).unwrap();
    assert_abs_diff_eq!(off.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    assert!(off.iter().zip(&exact).any(|(a, b)| (a - b).abs() > 1e-9));
}

#[test]
fn prefix_residual_vanishes_on_powers_of_two() {
    assert_eq!(prefix_residual(5, 0.0), 0.0);
    for n in [1u64, 2, 4, 8] {
        assert!(prefix_residual(n, 1e-3) < 1e-12);
    }
    for n in [3u64, 5, 6, 7, 9, 13] {
        let r = prefix_residual(n, 1e-3);
        assert!((0.0..=1e-3).contains(&r), "n={n}: {r}");
    }
}

#[test]
fn fragment_matches_semantic_block() {
    for n in [4, 6] {
        let r = verify(&ModelParams::benchmark(n), 0.0, VerifyMode::FullStatevector).unwrap();
        assert!(r.pass && r.measured_error <= 1e-10, "{r:?}");
    }
    let p = ModelParams::benchmark(4);
    let (lit, norm) = kinetic_fragment(&p, BuildOptions::literal()).unwrap();
    assert_abs_diff_eq!(norm, p.w() * 3.0 + p.mass * 2.0, epsilon = 1e-12);
    let mut blk = circuit_block(&lit).unwrap();
    blk.matrix *= Complex64::new(norm, 0.0);
    let free = ModelParams { coupling: 0.0, ..p };
    assert!(op_norm(&(h_mod(&free) - blk.matrix)) <= 1e-10);
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<Complex64> {
    let a = DMatrix::<Complex64>::from_fn(d, d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = &a + a.adjoint();
    let scale = op_norm(&h) / rng.gen_range(0.2..1.0);
    h / Complex64::new(scale, 0.0)
}

#[test]
fn chebyshev_squaring_over_seeds() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 1 << rng.gen_range(1..4);
        let h = random_hermitian(&mut rng, d);
        let u = dilation(&h).unwrap();
        let ident = DMatrix::<Complex64>::identity(2 * d, 2 * d);
        assert!((u.adjoint() * &u - ident).iter().all(|z| z.norm() < 1e-12));
        let sq = squared_block(&u, 1).unwrap();
        let want = &h * &h * Complex64::new(2.0, 0.0) - DMatrix::<Complex64>::identity(d, d);
        let dev = (&sq - &want).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12, "seed {seed}: {dev:e}");
        chebyshev_square(&h).unwrap();
    }
}

#[test]
fn dilation_rejects_oversized_blocks() {
    let h = DMatrix::<Complex64>::identity(2, 2) * Complex64::new(1.5, 0.0);
    assert!(dilation(&h).is_err());
    assert!(squared_block(&DMatrix::<Complex64>::identity(3, 3), 1).is_err());
}

#[test]
fn assembled_tally_equals_the_closed_form() {
    for n in [8usize, 16, 32, 64, 128, 256] {
        let p = ModelParams::benchmark(n);
        for eps in [1e-2, 1e-3, 1e-4] {
            let (c, spec, r) = assemble(&p, eps).unwrap();
            let want = block_encoding_cost(&p, eps).unwrap();
            assert_eq!(r.t_count, want.t_count, "N={n} eps={eps}");
            assert_eq!(spec.ancilla_width, 2 * p.b() as usize + 3);
            assert_abs_diff_eq!(spec.alpha, normalization(&p).unwrap().alpha_s, epsilon = 1e-12);
            if n == 16 && eps == 1e-3 {
                assert_eq!(r.t_count, 21527);
                c.validate().unwrap();
            }
        }
    }
}

#[test]
fn assembly_rejects_small_or_exact_inputs() {
    assert!(assemble(&ModelParams::benchmark(6), 1e-2).is_err());
    assert!(assemble(&ModelParams::benchmark(8), 0.0).is_err());
    assert!(verify(&ModelParams::benchmark(8), -1.0, VerifyMode::Semantic).is_err());
    assert!(semantic_block(&ModelParams::benchmark(16), &ErrorBudget::zero()).is_err());
}

/// Simulates every column of the 64-qubit circuit at eight sites. Takes
/// about a minute in release builds.
#[test]
#[ignore]
fn full_circuit_matches_semantic_block_at_eight_sites() {
    let p = ModelParams::benchmark(8);
    let eps = 1e-2;
    let alpha = normalization(&p).unwrap().alpha_s;
    let (c, _, _) = assemble(&p, eps).unwrap();
    let mut blk = circuit_block(&c).unwrap();
    blk.matrix *= Complex64::new(alpha, 0.0);
    let budget = ErrorBudget { eps1: 0.0, eps2: 0.0, ..ErrorBudget::split(eps, alpha) };
    let s = semantic_block(&p, &budget).unwrap();
    assert!(op_norm(&(&blk.matrix - &s.matrix)) < 1e-10);
    assert!(op_norm(&(h_mod(&p) - blk.matrix)) <= eps);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn default_split_is_sound(eps in 1e-8f64..1.0, alpha in 1.0f64..1e6) {
        let b = ErrorBudget::split(eps, alpha);
        prop_assert!(b.is_sound(eps, alpha));
        prop_assert!((b.bound(alpha) - eps).abs() <= 1e-12 * eps);
        let greedy = ErrorBudget { delta: b.delta * 2.0, ..b };
        prop_assert!(!greedy.is_sound(eps, alpha));
    }

    #[test]
    fn measured_error_respects_epsilon(exp in 1i32..5, mass in 0.01f64..1.0, spacing in 0.1f64..1.0) {
        let p = ModelParams { mass, spacing, ..ModelParams::benchmark(8) };
        let eps = 10f64.powi(-exp);
        let alpha = normalization(&p).unwrap().alpha_s;
        let s = semantic_block(&p, &ErrorBudget::split(eps, alpha)).unwrap();
        prop_assert!(op_norm(&(h_mod(&p) - &s.matrix)) <= eps);
    }
}
