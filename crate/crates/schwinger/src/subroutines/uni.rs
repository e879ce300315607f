//! Uniform superposition over `N = 2^eta L` basis states.
//!
//! Hadamards cover the `eta` low bits. The odd part `L` is prepared on the
//! `l = ceil(log2 L)` high bits by one exact round of amplitude
//! amplification from amplitude 1/2, followed by a comparator that writes
//! the success flag.

use super::arith::{ineq, ineq_undo};
use super::BuildOptions;
use crate::circuit::{cost::count_resources, Builder, Circuit, Composite, CostAnnotation, CostModel, Qubit, ResourceReport};
use crate::error::{invalid, Result};
use crate::{bits_for, factor_two};

/// Rotation angle that brings the success amplitude of UNI(n) to 1/2.
pub fn uni_angle(n: u64) -> f64 {
    let (_, l_odd) = factor_two(n);
    let l = bits_for(l_odd);
    2.0 * (0.5 * ((1u64 << l) as f64 / l_odd as f64).sqrt()).asin()
}

/// Emits UNI(n) on `index` (width `ceil(log2 n)`), XORing the success flag
/// into `succ`. The rotation ancilla `rot` is left as junk; when `None` a
/// fresh junk qubit is allocated if the construction needs one.
#[allow(clippy::too_many_arguments)]
pub fn emit_uni(
    b: &mut Builder,
    index: &[Qubit],
    rot: Option<Qubit>,
    n: u64,
    eps: f64,
    ctrl: Option<Qubit>,
    succ: Qubit,
    opts: BuildOptions,
) -> Composite {
    assert!(n >= 1, "UNI needs at least one state");
    assert_eq!(index.len(), bits_for(n) as usize, "UNI index width");
    let (eta, l_odd) = factor_two(n);
    let eta = eta as usize;
    let l = bits_for(l_odd) as usize;
    let name = if ctrl.is_some() { "cuni" } else { "uni" };
    b.begin(name, CostAnnotation::Body);
    for &q in index {
        b.h_ctrl(ctrl, q);
    }
    if l_odd == 1 && opts.short_circuit {
        match ctrl {
            Some(c) => b.cnot(c, succ),
            None => b.x(succ),
        }
        return b.end();
    }
    let high = &index[eta..eta + l];
    let theta = uni_angle(n);
    let rot = rot.unwrap_or_else(|| b.junk1("uni.rot"));
    let konst = b.alloc("uni.const", l);
    let fl = b.alloc1("uni.flag");
    b.load_const(&konst, l_odd - 1);

    b.ry(rot, theta, eps / 2.0);
    let cmp = ineq(b, high, &konst, fl);
    match ctrl {
        Some(c) => {
            let t = b.alloc1("uni.ctrl");
            b.and(c, fl, t);
            b.cz(t, rot);
            b.and_dagger(c, fl, t);
            b.release(&[t]);
        }
        None => b.cz(fl, rot),
    }
    ineq_undo(b, cmp);

    b.ry(rot, -theta, eps / 2.0);
    for &q in high {
        b.h(q);
    }
    let mut targets = high.to_vec();
    targets.push(rot);
    let controls: Vec<Qubit> = ctrl.into_iter().collect();
    b.reflection(&targets, &controls);
    for &q in high {
        b.h(q);
    }

    let cmp = ineq(b, high, &konst, fl);
    match ctrl {
        Some(c) => b.and(c, fl, succ),
        None => b.cnot(fl, succ),
    }
    ineq_undo(b, cmp);

    b.load_const(&konst, l_odd - 1);
    b.release(&[fl]);
    b.release(&konst);
    b.end()
}

/// Standalone UNI(n) with registers `index`, `succ` and (if controlled)
/// `ctrl`, reported under the per-rotation ceiling.
pub fn uni(n: u64, eps: f64, controlled: bool) -> Result<(Circuit, ResourceReport)> {
    uni_with(n, eps, controlled, BuildOptions::default(), &CostModel::per_rotation())
}

pub fn uni_with(
    n: u64,
    eps: f64,
    controlled: bool,
    opts: BuildOptions,
    cost: &CostModel,
) -> Result<(Circuit, ResourceReport)> {
    if n == 0 {
        return invalid("UNI needs N >= 1");
    }
    super::check_eps(eps)?;
    let mut b = Builder::new();
    let ctrl = if controlled { Some(b.data("ctrl", 1)[0]) } else { None };
    let index = b.data("index", bits_for(n) as usize);
    let succ = b.data("succ", 1)[0];
    emit_uni(&mut b, &index, None, n, eps, ctrl, succ, opts);
    let c = b.finish();
    let r = count_resources(&c, cost);
    Ok((c, r))
}
