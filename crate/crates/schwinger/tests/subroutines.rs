//! State preparations, arithmetic and SELECT circuits checked by
//! simulation against closed-form targets, and their tallies against the
//! closed-form T counts.

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use schwinger::circuit::sim::{read_register, write_register};
use schwinger::circuit::{simulate_statevector, Circuit, CostModel, SparseState};
use schwinger::circuit::cost::synthesis_constant;
use schwinger::model::{normalization, ModelParams};
use schwinger::subroutines::checks::*;
use schwinger::subroutines::p1::{branch_weights, BRANCH_LABELS};
use schwinger::subroutines::p2::iterations;
use schwinger::subroutines::{formulas as f, *};

fn reg(c: &Circuit, name: &str) -> Vec<usize> {
    c.register(name).unwrap_or_else(|| panic!("no register {name}")).qubits.clone()
}

fn run(c: &Circuit, k: u128) -> SparseState {
    simulate_statevector(c, SparseState::basis(c.n_qubits, k)).unwrap()
}

#[test]
fn arithmetic_suite_passes_up_to_eight_bits() {
    let out = arithmetic_suite(8).unwrap();
    assert_eq!(out.len(), 8 * 7);
    for c in &out {
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn preparation_suite_matches_targets() {
    let out = prepare_suite(&[4, 6, 8, 10, 12, 14, 16], 1e-3, 1e-8).unwrap();
    assert!(out.len() > 60);
    for c in &out {
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn subtraction_and_mask_examples() {
    let (c, r) = arithmetic(ArithKind::Sub, 4, false).unwrap();
    let (a, b) = (reg(&c, "a"), reg(&c, "b"));
    let out = run(&c, write_register(write_register(0, &a, 9), &b, 3));
    let (k, _) = out.amps.iter().next().unwrap();
    assert_eq!(read_register(*k, &a), 6);
    assert_eq!(r.t_count, 12);

    let (c, r) = arithmetic(ArithKind::Una, 4, false).unwrap();
    let out = run(&c, write_register(0, &reg(&c, "a"), 0b0101));
    let (k, _) = out.amps.iter().next().unwrap();
    assert_eq!(read_register(*k, &reg(&c, "u")), 0b0111);
    assert_eq!(r.t_count, 12);

    assert_eq!(arithmetic(ArithKind::Reflection, 2, false).unwrap().1.t_exact, 0.0);
    assert_eq!(arithmetic(ArithKind::Ineq, 5, false).unwrap().1.t_count, 20);
    assert_eq!(arithmetic(ArithKind::Cswap, 5, false).unwrap().1.t_count, 35);
    assert!(arithmetic(ArithKind::Sub, 3, true).is_err());
    assert!(arithmetic(ArithKind::Ineq, 0, false).is_err());
}

#[test]
fn uniform_three_state() {
    let (c, _) = uni(3, 1e-2, false).unwrap();
    let (dist, p) = prepared_distribution(&c, &reg(&c, "index"), 0).unwrap();
    assert_abs_diff_eq!(p, 1.0, epsilon = 1e-10);
    for (i, &x) in dist.iter().enumerate() {
        assert_abs_diff_eq!(x, if i < 3 { 1.0 / 3.0 } else { 0.0 }, epsilon = 1e-10);
    }
}

#[test]
fn uniform_power_of_two_is_free_when_short_circuited() {
    let (_, r) = uni(4, 1e-3, false).unwrap();
    assert_eq!(r.t_count, 0);
    let (_, lit) = uni::uni_with(4, 1e-3, false, BuildOptions::literal(), &CostModel::per_rotation()).unwrap();
    assert_abs_diff_eq!(lit.t_exact, f::uni(4, 1e-3, false), epsilon = 1e-9);
}

#[test]
fn uniform_count_for_six() {
    let eps = 1e-2;
    let c = synthesis_constant();
    let lemma = 8.0 * (2.0f64 / eps).log2().ceil() + 24.0 + 2.0 * c - 4.0;
    let (_, r) = uni(6, eps, false).unwrap();
    assert_abs_diff_eq!(r.t_exact, lemma, epsilon = 1e-9);
}

#[test]
fn linear_profiles_at_eight_sites() {
    for (builder, profile, support) in [
        (ps1 as fn(u64, f64, bool) -> _, Profile::Even, vec![2usize, 4, 6]),
        (ps2, Profile::Odd, vec![1, 3, 5, 7]),
    ] {
        let (c, _) = builder(8, 1e-3, false).unwrap();
        let (dist, _) = prepared_distribution(&c, &reg(&c, "index"), 0).unwrap();
        let total: f64 = support.iter().map(|&n| n as f64).sum();
        for (n, &x) in dist.iter().enumerate() {
            let want = if support.contains(&n) { n as f64 / total } else { 0.0 };
            assert_abs_diff_eq!(x, want, epsilon = 1e-10);
        }
        let target = target_distribution(profile, 8);
        assert!(dist.iter().zip(&target).all(|(x, y)| (x - y).abs() < 1e-10));
    }
}

#[test]
fn square_profile_needs_eight_sites() {
    assert!(ps3(6, 1e-3, false).is_err());
    assert_abs_diff_eq!(ps::ps3_prime_amplitude(8), (7.0f64 * 8.0 * 15.0 / (6.0 * 512.0)).sqrt(), epsilon = 1e-12);
    assert!(ps::ps3_prime_amplitude(8) > 0.5);
    let (c, _) = ps3(8, 1e-6, false).unwrap();
    let (dist, _) = prepared_distribution(&c, &reg(&c, "index"), 0).unwrap();
    for (n, &x) in dist.iter().enumerate() {
        assert_abs_diff_eq!(x, (n * n) as f64 / 140.0, epsilon = 1e-8);
    }
}

#[test]
fn prefix_amplification_depth() {
    assert_eq!(iterations(1e-3), 7);
    for delta in [0.3, 1e-2, 1e-4, 1e-8] {
        let d = iterations(delta);
        let bound = 2f64.sqrt() * (2.0 / delta.sqrt()).ln();
        assert_eq!(d % 2, 1);
        assert!(d as f64 >= bound && (d as f64) < bound + 2.0);
    }
}

#[test]
fn prefix_success_at_eight_sites() {
    let c = p2_check(8, 1e-6, 1e-3, 1e-8).unwrap();
    assert!(c.passed, "{c:?}");
    assert_eq!(c.cases, 7);
    let (circ, _) = p2(8, 1e-6, 1e-3, false).unwrap();
    for m in [1u64, 2, 4] {
        let input = write_register(0, &reg(&circ, "n"), m);
        let (_, p) = prepared_distribution(&circ, &reg(&circ, "i"), input).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-10);
    }
}

#[test]
fn splitter_branch_masses() {
    let params = ModelParams::benchmark(8);
    let alpha = normalization(&params).unwrap().alpha_s;
    let w = branch_weights(&params).unwrap();
    assert_abs_diff_eq!(w.iter().sum::<f64>(), alpha, epsilon = 1e-12);
    assert_abs_diff_eq!(w[2], 0.1 * 8.0 / 2.0, epsilon = 1e-15);
    let (c, _) = p1(&params, 1e-3).unwrap();
    let q = reg(&c, "q");
    let out = run(&c, 0);
    for (label, weight) in BRANCH_LABELS.iter().zip(w) {
        let mass = out.probability(|k| {
            let bits = read_register(k, &q);
            let value = 4 * (bits & 1) + 2 * ((bits >> 1) & 1) + ((bits >> 2) & 1);
            value == u64::from(*label)
        });
        assert_abs_diff_eq!(mass, weight / alpha, epsilon = 1e-10);
    }
}

fn pauli_image(kind: SelectKind, addr: usize, k: u64) -> (u64, Complex64) {
    let bit = |s: usize| (k >> s) & 1;
    match kind {
        SelectKind::Xx => (k ^ (0b11 << addr), Complex64::new(1.0, 0.0)),
        SelectKind::Yy => {
            let ph = |b: u64| if b == 0 { Complex64::i() } else { -Complex64::i() };
            (k ^ (0b11 << addr), ph(bit(addr)) * ph(bit(addr + 1)))
        }
        SelectKind::Z => {
            let sign = if addr % 2 == 0 { 1.0 } else { -1.0 } * if bit(addr) == 1 { -1.0 } else { 1.0 };
            (k, Complex64::new(sign, 0.0))
        }
        SelectKind::Z2 => (k, Complex64::new(if bit(addr) == 1 { -1.0 } else { 1.0 }, 0.0)),
    }
}

#[test]
fn select_applies_the_addressed_term() {
    for kind in [SelectKind::Xx, SelectKind::Yy, SelectKind::Z, SelectKind::Z2] {
        for n in [4u64, 6] {
            let (c, _) = select::select_with(kind, n, 2, true).unwrap();
            let (ctrl, addr, sys) = (reg(&c, "ctrl"), reg(&c, "address"), reg(&c, "system"));
            for a in 0..(1u64 << addr.len()) {
                for k in [0u64, 0b1011, 0b0110, (1 << n) - 1] {
                    for on in [false, true] {
                        let mut input = write_register(write_register(0, &addr, a), &sys, k);
                        if on {
                            input = write_register(input, &ctrl, 0b11);
                        }
                        let out = run(&c, input);
                        let (want_k, phase) = if on && a < kind.items(n) { pauli_image(kind, a as usize, k) } else { (k, Complex64::new(1.0, 0.0)) };
                        let want = write_register(input, &sys, want_k);
                        assert!((out.amplitude(want) - phase).norm() < 1e-12, "{kind:?} N={n} a={a} k={k:b} on={on}");
                    }
                }
            }
        }
    }
}

#[test]
fn select_z_example() {
    let (c, _) = select(SelectKind::Z, 4, 2).unwrap();
    let (ctrl, addr, sys) = (reg(&c, "ctrl"), reg(&c, "address"), reg(&c, "system"));
    let base = write_register(write_register(0, &ctrl, 0b11), &addr, 2);
    assert!((run(&c, base).amplitude(base) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    let flipped = write_register(base, &sys, 0b0100);
    assert!((run(&c, flipped).amplitude(flipped) + Complex64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn select_costs_follow_the_table() {
    assert_eq!(select(SelectKind::Xx, 16, 3).unwrap().1.t_count, 64);
    assert!(select(SelectKind::Z, 8, 5).is_err());
    assert!(select(SelectKind::Z, 8, 1).is_err());
}

#[test]
fn tallies_equal_closed_forms_on_the_grid() {
    let pr = CostModel::per_rotation();
    let lit = BuildOptions::literal();
    let mut checked = 0;
    let mut expect = |what: String, got: f64, want: f64| {
        assert!((got - want).abs() < 1e-9, "{what}: tally {got} formula {want}");
        checked += 1;
    };
    for s in 1..=8u64 {
        for (k, form) in [
            (ArithKind::Ineq, f::ineq(s)),
            (ArithKind::Sub, f::sub(s)),
            (ArithKind::Una, f::una(s)),
            (ArithKind::Cswap, f::cswap(s)),
            (ArithKind::Reflection, f::reflection(s)),
        ] {
            expect(format!("{k:?}({s})"), arithmetic(k, s as usize, false).unwrap().1.t_exact, form);
        }
    }
    for n in (4..=32u64).step_by(2) {
        for eps in [1e-2, 1e-3, 1e-4] {
            for c in [false, true] {
                for m in [n - 1, n] {
                    expect(format!("uni({m})"), uni::uni_with(m, eps, c, lit, &pr).unwrap().1.t_exact, f::uni(m, eps, c));
                }
                expect(format!("ps1({n})"), ps::ps1_with(n, eps, c, lit, &pr).unwrap().1.t_exact, f::ps1(n, eps, c));
                expect(format!("ps2({n})"), ps::ps2_with(n, eps, c, lit, &pr).unwrap().1.t_exact, f::ps2(n, eps, c));
                if n >= 8 {
                    expect(format!("ps3({n})"), ps::ps3_with(n, eps, c, lit, &pr).unwrap().1.t_exact, f::ps3(n, eps, c));
                }
                for delta in [1e-2, 1e-4] {
                    expect(format!("p2({n})"), p2(n, eps, delta, c).unwrap().1.t_exact, f::p2(n, eps, delta, c));
                }
            }
            if n >= 8 {
                let params = ModelParams::benchmark(n as usize);
                expect(format!("p1({n})"), p1::p1_with(&params, eps, lit, &pr).unwrap().1.t_exact, f::p1(n, eps));
                expect(format!("p1 parts({n})"), f::p1_parts(n, eps), f::p1(n, eps));
            }
        }
        for kind in [SelectKind::Xx, SelectKind::Yy, SelectKind::Z, SelectKind::Z2] {
            for cs in 2..=4u64 {
                expect(format!("{kind:?}({n}, {cs})"), select(kind, n, cs as usize).unwrap().1.t_exact, f::select(kind, n, cs));
            }
        }
    }
    assert!(checked > 900, "{checked}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn uniform_preparation_is_uniform(n in 2u64..40, eps_exp in 2i32..8) {
        let eps = 10f64.powi(-eps_exp);
        let (c, _) = uni(n, eps, false).unwrap();
        let (dist, p) = prepared_distribution(&c, &reg(&c, "index"), 0).unwrap();
        prop_assert!((p - 1.0).abs() < 1e-9);
        for (i, &x) in dist.iter().enumerate() {
            let want = if (i as u64) < n { 1.0 / n as f64 } else { 0.0 };
            prop_assert!((x - want).abs() < 1e-9);
        }
    }

    #[test]
    fn comparator_agrees_with_integers(s in 1usize..12, a in 0u64..4096, b in 0u64..4096) {
        let (a, b) = (a % (1 << s), b % (1 << s));
        let (c, _) = arithmetic(ArithKind::Ineq, s, false).unwrap();
        let input = write_register(write_register(0, &reg(&c, "a"), a), &reg(&c, "b"), b);
        let v = schwinger::circuit::check_basis_permutation(&c, [input], |k| {
            write_register(k, &reg(&c, "out"), u64::from(a <= b))
        }).unwrap();
        prop_assert!(v.passed());
    }
}
