//! Reversible arithmetic: comparator, in-place adder and subtractor, unary
//! leading-one mask, controlled swap and reflection.
//!
//! Registers are little-endian qubit lists. Carries come from compute-ANDs
//! whose mirror images are tagged as measurement-based uncomputation.

use crate::circuit::{Builder, Circuit, Composite, CostAnnotation, CostModel, Gate, Qubit, ResourceReport};
use crate::circuit::cost::count_resources;
use crate::error::{invalid, Result};

/// Live comparator: carries stay allocated until [`ineq_undo`].
#[derive(Debug, Clone)]
pub struct Comparison {
    pub out: Qubit,
    carries: Vec<Qubit>,
    block: Composite,
}

fn carry_chain(b: &mut Builder, a: &[Qubit], y: &[Qubit], carries: &[Qubit]) {
    let s = a.len();
    if s < 2 {
        return;
    }
    b.x(y[0]);
    b.and(a[0], y[0], carries[0]);
    b.x(y[0]);
    b.x(carries[0]);
    for i in 1..s - 1 {
        let c = carries[i - 1];
        b.x(a[i]);
        b.cnot(c, a[i]);
        b.cnot(c, y[i]);
        b.and(a[i], y[i], carries[i]);
        b.cnot(c, carries[i]);
        b.cnot(c, y[i]);
        b.cnot(c, a[i]);
        b.x(a[i]);
    }
}

fn carry_out(b: &mut Builder, a: &[Qubit], y: &[Qubit], carries: &[Qubit], out: Qubit) {
    let s = a.len();
    match s {
        0 => b.x(out),
        1 => {
            b.x(y[0]);
            b.and(a[0], y[0], out);
            b.x(y[0]);
            b.x(out);
        }
        _ => {
            let i = s - 1;
            let c = carries[i - 1];
            b.x(a[i]);
            b.cnot(c, a[i]);
            b.cnot(c, y[i]);
            b.and(a[i], y[i], out);
            b.cnot(c, out);
            b.cnot(c, y[i]);
            b.cnot(c, a[i]);
            b.x(a[i]);
        }
    }
}

/// XORs `[a <= y]` into `out` and keeps the `s - 1` carries live (4s T).
pub fn ineq(b: &mut Builder, a: &[Qubit], y: &[Qubit], out: Qubit) -> Comparison {
    assert_eq!(a.len(), y.len(), "comparator operands must have equal width");
    b.begin("ineq", CostAnnotation::Body);
    let carries = b.alloc("ineq.carry", a.len().saturating_sub(1));
    carry_chain(b, a, y, &carries);
    carry_out(b, a, y, &carries, out);
    let block = b.end();
    Comparison { out, carries, block }
}

/// Undoes [`ineq`] at zero T cost and releases its carries.
pub fn ineq_undo(b: &mut Builder, cmp: Comparison) {
    b.push_inverse(&cmp.block, Some(CostAnnotation::Fixed(0.0)));
    b.release(&cmp.carries);
}

/// XORs `[a <= y]` into `out` with carries uncomputed inside (4s T).
pub fn ineq_oneshot(b: &mut Builder, a: &[Qubit], y: &[Qubit], out: Qubit) {
    assert_eq!(a.len(), y.len(), "comparator operands must have equal width");
    b.begin("ineq", CostAnnotation::Body);
    let carries = b.alloc("ineq.carry", a.len().saturating_sub(1));
    let ((), chain) = b.block("carry", CostAnnotation::Body, |b| carry_chain(b, a, y, &carries));
    carry_out(b, a, y, &carries, out);
    b.push_inverse(&chain, Some(CostAnnotation::Fixed(0.0)));
    b.release(&carries);
    b.end();
}

/// In-place `t += x mod 2^s` (4s - 4 T, s - 1 carries).
pub fn add_into(b: &mut Builder, t: &[Qubit], x: &[Qubit]) {
    assert_eq!(t.len(), x.len(), "adder operands must have equal width");
    let s = t.len();
    b.begin("add", CostAnnotation::Body);
    if s == 1 {
        b.cnot(x[0], t[0]);
    } else if s > 1 {
        let c = b.alloc("add.carry", s - 1);
        b.and(x[0], t[0], c[0]);
        for i in 1..s - 1 {
            b.cnot(c[i - 1], x[i]);
            b.cnot(c[i - 1], t[i]);
            b.and(x[i], t[i], c[i]);
            b.cnot(c[i - 1], c[i]);
        }
        b.cnot(x[s - 1], t[s - 1]);
        b.cnot(c[s - 2], t[s - 1]);
        for i in (1..s - 1).rev() {
            b.cnot(c[i - 1], c[i]);
            b.and_dagger(x[i], t[i], c[i]);
            b.cnot(c[i - 1], x[i]);
            b.cnot(x[i], t[i]);
        }
        b.and_dagger(x[0], t[0], c[0]);
        b.cnot(x[0], t[0]);
        b.release(&c);
    }
    b.end();
}

/// In-place `t -= x mod 2^s` (4s - 4 T).
pub fn sub_into(b: &mut Builder, t: &[Qubit], x: &[Qubit]) -> Composite {
    b.begin("sub", CostAnnotation::Body);
    b.xs(t);
    add_into(b, t, x);
    b.xs(t);
    b.end()
}

/// Writes the mask of `a`: ones from the leading one of `a` down to bit 0
/// (4s - 4 T). `u` must be |0>.
pub fn una(b: &mut Builder, a: &[Qubit], u: &[Qubit]) -> Composite {
    assert_eq!(a.len(), u.len(), "una operands must have equal width");
    let s = a.len();
    b.begin("una", CostAnnotation::Body);
    if s > 0 {
        b.cnot(a[s - 1], u[s - 1]);
        for k in (0..s - 1).rev() {
            b.x(a[k]);
            b.x(u[k + 1]);
            b.and(a[k], u[k + 1], u[k]);
            b.x(u[k]);
            b.x(u[k + 1]);
            b.x(a[k]);
        }
    }
    b.end()
}

/// Swap of `xs` and `ys` controlled by `c`; with an extra control the two
/// controls are merged by one AND into a fresh qubit (7s or 7s + 4 T).
pub fn controlled_swap(b: &mut Builder, c: Qubit, extra: Option<Qubit>, xs: &[Qubit], ys: &[Qubit]) {
    match extra {
        None => b.cswap(c, xs, ys),
        Some(e) => {
            let t = b.alloc1("cswap.ctrl");
            b.and(c, e, t);
            b.cswap(t, xs, ys);
            b.and_dagger(c, e, t);
            b.release(&[t]);
        }
    }
}

/// Arithmetic primitive selectable by [`arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Ineq,
    Sub,
    Cswap,
    Una,
    Reflection,
}

/// Standalone arithmetic circuit on `s`-bit registers with its resource report.
///
/// Registers: `a`, `b` for the binary operations (`ineq` XORs `[a <= b]`
/// into `out`, `sub` maps `a -> a - b`), `ctrl`, `x`, `y` for `cswap`,
/// `a`, `u` for `una`, `q` (and `ctrl`) for the reflection.
pub fn arithmetic(kind: ArithKind, s: usize, controlled: bool) -> Result<(Circuit, ResourceReport)> {
    if s == 0 {
        return invalid("arithmetic width must be positive");
    }
    let mut b = Builder::new();
    match kind {
        ArithKind::Ineq | ArithKind::Sub | ArithKind::Una if controlled => {
            return invalid(format!("{kind:?} has no controlled form"));
        }
        ArithKind::Ineq => {
            let a = b.data("a", s);
            let y = b.data("b", s);
            let out = b.data("out", 1)[0];
            ineq_oneshot(&mut b, &a, &y, out);
        }
        ArithKind::Sub => {
            let a = b.data("a", s);
            let y = b.data("b", s);
            sub_into(&mut b, &a, &y);
        }
        ArithKind::Una => {
            let a = b.data("a", s);
            let u = b.data("u", s);
            una(&mut b, &a, &u);
        }
        ArithKind::Cswap => {
            let c = b.data("ctrl", 1)[0];
            let e = if controlled { Some(b.data("ctrl2", 1)[0]) } else { None };
            let x = b.data("x", s);
            let y = b.data("y", s);
            controlled_swap(&mut b, c, e, &x, &y);
        }
        ArithKind::Reflection => {
            let q = b.data("q", s);
            let ctrl = if controlled { b.data("ctrl", 1) } else { Vec::new() };
            b.reflection(&q, &ctrl);
        }
    }
    let c = b.finish();
    let r = count_resources(&c, &CostModel::per_rotation());
    Ok((c, r))
}

/// Gate list of a controlled Z rotation, `Rz(a/2) CNOT Rz(-a/2) CNOT`, as a
/// composite whose two rotations share the budget `eps`.
pub fn crz(control: Qubit, q: Qubit, angle: f64, eps: f64) -> Gate {
    let body = vec![
        Gate::Rz { q, angle: angle / 2.0, eps: Some(eps / 2.0) },
        Gate::Cnot { control, target: q },
        Gate::Rz { q, angle: -angle / 2.0, eps: Some(eps / 2.0) },
        Gate::Cnot { control, target: q },
    ];
    Gate::Composite(Box::new(Composite::new("crz", CostAnnotation::Body, body)))
}
