//! Prefix superposition `|n>|0> -> |n> (1/sqrt n) sum_{i<n} |i>` by fixed-point
//! amplitude amplification.
//!
//! The leading-one mask of `n - 1` drives Hadamards that give a uniform
//! state over `2^ceil(log2 n)` values, whose overlap with the target exceeds
//! `1/sqrt 2`. `d` alternating phase slots then raise the success
//! probability above `1 - Delta` for every `n`.

use super::arith::{crz, ineq, ineq_undo, sub_into, una};
use super::check_eps;
use crate::bits_for;
use crate::circuit::{cost::count_resources, Builder, Circuit, Composite, CostAnnotation, CostModel, Qubit, ResourceReport};
use crate::error::{invalid, Result};

/// Smallest odd `d >= sqrt(2) ln(2 / sqrt(delta))`.
pub fn iterations(delta: f64) -> u64 {
    let bound = std::f64::consts::SQRT_2 * (2.0 / delta.sqrt()).ln();
    let d = bound.ceil().max(1.0) as u64;
    if d % 2 == 0 {
        d + 1
    } else {
        d
    }
}

/// Phase schedule `(alpha, beta)` of length `(d - 1) / 2` for `d` odd and
/// residual `delta` (the worst-case failure probability is `delta`).
pub fn phases(d: u64, delta: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(d % 2 == 1, "d must be odd");
    let l = ((d - 1) / 2) as usize;
    let gamma = 1.0 / ((1.0 / delta.sqrt()).acosh() / d as f64).cosh();
    let s = (1.0 - gamma * gamma).sqrt();
    let alpha: Vec<f64> = (1..=l)
        .map(|j| {
            let x = (2.0 * std::f64::consts::PI * j as f64 / d as f64).tan() * s;
            2.0 * (1.0f64).atan2(x)
        })
        .collect();
    let beta = (0..l).map(|k| -alpha[l - 1 - k]).collect();
    (alpha, beta)
}

/// Worst-case failure probability `delta^2 T_d(T_{1/d}(1/delta) sqrt(1 - lambda))^2`
/// of the schedule at initial success probability `lambda`, with
/// `delta = sqrt(residual)`.
pub fn failure_probability(d: u64, residual: f64, lambda: f64) -> f64 {
    let delta = residual.sqrt();
    let t_inv = ((1.0 / delta).acosh() / d as f64).cosh();
    let x = t_inv * (1.0 - lambda).max(0.0).sqrt();
    let t = if x.abs() <= 1.0 {
        (d as f64 * x.acos()).cos()
    } else {
        (d as f64 * x.acosh()).cosh()
    };
    delta * delta * t * t
}

fn rz_slot(b: &mut Builder, ctrl: Option<Qubit>, q: Qubit, angle: f64, eps: f64) {
    match ctrl {
        Some(c) => b.push(crz(c, q, angle, eps)),
        None => b.rz(q, angle, eps),
    }
}

/// Emits `P_2` (or its controlled form) on the `b`-bit registers `n` and
/// `i`, XORing the success flag into `succ`. Rotations run at `eps / d`.
#[allow(clippy::too_many_arguments)]
pub fn emit_p2(
    b: &mut Builder,
    n: &[Qubit],
    i: &[Qubit],
    eps: f64,
    delta: f64,
    ctrl: Option<Qubit>,
    succ: Qubit,
) -> Composite {
    let w = n.len();
    assert_eq!(i.len(), w, "P_2 register widths");
    let d = iterations(delta);
    let (alpha, beta) = phases(d, delta);
    let eps_r = eps / d as f64;
    b.begin(if ctrl.is_some() { "cp2" } else { "p2" }, CostAnnotation::Body);

    let m = b.alloc("p2.m", w);
    for k in 0..w {
        b.cnot(n[k], m[k]);
    }
    let one = b.alloc("p2.one", w);
    b.load_const(&one, 1);
    let sub = sub_into(b, &m, &one);
    let u = b.alloc("p2.mask", w);
    let mask = una(b, &m, &u);

    let ((), layer) = b.detached("had", CostAnnotation::Body, |b| {
        for k in 0..w {
            b.ch(u[k], i[k]);
        }
    });
    match ctrl {
        None => b.push_again(&layer),
        Some(c) => {
            b.begin("chad", CostAnnotation::Body);
            let t = b.alloc1("p2.ctrl");
            for k in 0..w {
                b.and(c, u[k], t);
                b.ch(t, i[k]);
                b.and_dagger(c, u[k], t);
            }
            b.release(&[t]);
            b.end();
        }
    }

    let o = b.alloc1("p2.good");
    let target_phase = |b: &mut Builder, angle: f64| {
        let cmp = ineq(b, i, &m, o);
        rz_slot(b, ctrl, o, angle, eps_r);
        ineq_undo(b, cmp);
    };
    for j in 0..alpha.len() {
        target_phase(b, beta[j]);
        b.push_inverse(&layer, None);
        b.xs(i);
        let z = b.alloc1("p2.zero");
        b.mcx(i, z);
        rz_slot(b, ctrl, z, -alpha[j], eps_r);
        b.mcx_dagger(i, z);
        b.release(&[z]);
        b.xs(i);
        b.push_again(&layer);
    }
    target_phase(b, 0.0);

    let cmp = ineq(b, i, &m, o);
    match ctrl {
        Some(c) => b.and(c, o, succ),
        None => b.cnot(o, succ),
    }
    ineq_undo(b, cmp);
    b.release(&[o]);

    b.push_inverse(&mask, Some(CostAnnotation::Fixed(0.0)));
    b.release(&u);
    b.push_inverse(&sub, Some(CostAnnotation::Fixed(0.0)));
    b.load_const(&one, 1);
    b.release(&one);
    for k in 0..w {
        b.cnot(n[k], m[k]);
    }
    b.release(&m);
    b.end()
}

/// Standalone `P_2` on `b = ceil(log2 n_sites)`-bit registers `n`, `i`,
/// plus `succ` and (if controlled) `ctrl`.
pub fn p2(n_sites: u64, eps: f64, delta: f64, controlled: bool) -> Result<(Circuit, ResourceReport)> {
    p2_with(n_sites, eps, delta, controlled, &CostModel::per_rotation())
}

pub fn p2_with(n_sites: u64, eps: f64, delta: f64, controlled: bool, cost: &CostModel) -> Result<(Circuit, ResourceReport)> {
    check_eps(eps)?;
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("Delta must lie in (0, 1), got {delta}"));
    }
    if n_sites < 2 {
        return invalid("P_2 needs N >= 2");
    }
    let mut b = Builder::new();
    let ctrl = if controlled { Some(b.data("ctrl", 1)[0]) } else { None };
    let w = bits_for(n_sites) as usize;
    let n = b.data("n", w);
    let i = b.data("i", w);
    let succ = b.data("succ", 1)[0];
    emit_p2(&mut b, &n, &i, eps, delta, ctrl, succ);
    let c = b.finish();
    let r = count_resources(&c, cost);
    Ok((c, r))
}
