//! Weighted state preparations on the `b`-bit index register:
//! `P_S1` (amplitudes `sqrt n`, even n), `P_S2` (`sqrt n`, odd n) and
//! `P_S3` (amplitudes `n`).
//!
//! `P_S1` and `P_S2` use the alias-sampling construction with
//! `alt_n = N' - 1 - n` and `keep_n = 2n` (or `2n + 1`), leaving a junk
//! register entangled with the index. `P_S3` prepares the target on a
//! flagged subspace and runs one exact round of amplitude amplification.

use super::arith::{add_into, ineq, ineq_undo, sub_into};
use super::uni::emit_uni;
use super::{check_eps, BuildOptions};
use crate::bits_for;
use crate::circuit::{cost::count_resources, Builder, Circuit, Composite, CostAnnotation, CostModel, Qubit, ResourceReport};
use crate::error::{invalid, Result};

/// Shared body of `P_S1` (`odd = false`) and `P_S2` (`odd = true`).
#[allow(clippy::too_many_arguments)]
fn emit_alias(
    b: &mut Builder,
    index: &[Qubit],
    n_sites: u64,
    eps: f64,
    ctrl: Option<Qubit>,
    succ: Qubit,
    odd: bool,
    opts: BuildOptions,
) -> Composite {
    let half = if odd { n_sites / 2 } else { n_sites.div_ceil(2) };
    let n_j = if odd { half } else { half - 1 };
    let bp = bits_for(half) as usize;
    let bj = bits_for(n_j) as usize;
    assert!(index.len() > bp, "index register too narrow");
    let base = match (odd, ctrl.is_some()) {
        (false, false) => "ps1",
        (false, true) => "cps1",
        (true, false) => "ps2",
        (true, true) => "cps2",
    };
    b.begin(base, CostAnnotation::Body);
    let i = &index[1..=bp];
    let j = b.junk("ps.j", bj);

    match ctrl {
        None => {
            let si = b.junk1("ps.succ_i");
            let sj = b.junk1("ps.succ_j");
            emit_uni(b, i, None, half, eps / 2.0, None, si, opts);
            emit_uni(b, &j, None, n_j, eps / 2.0, None, sj, opts);
            b.and(si, sj, succ);
        }
        Some(c) => {
            let sj = b.junk1("ps.succ_j");
            emit_uni(b, i, None, half, eps / 2.0, Some(c), succ, opts);
            emit_uni(b, &j, None, n_j, eps / 2.0, Some(c), sj, opts);
        }
    }

    let r = b.junk("ps.alt", bp);
    b.load_const(&r, half - 1);
    sub_into(b, &r, i);

    let d = b.junk("ps.keep", bp + 1);
    if odd {
        match ctrl {
            Some(c) => b.cnot(c, d[0]),
            None => b.x(d[0]),
        }
    }
    for k in 0..bp {
        b.cnot(i[k], d[k + 1]);
    }

    let pad = b.alloc("ps.pad", bp + 1 - bj);
    let mut jp = j.clone();
    jp.extend(&pad);
    let o = b.alloc1("ps.cmp");
    let flag = b.junk1("ps.flag");
    let cmp = ineq(b, &d, &jp, o);
    match ctrl {
        Some(c) => b.and(c, o, flag),
        None => b.cnot(o, flag),
    }
    ineq_undo(b, cmp);
    b.release(&[o]);
    b.release(&pad);

    b.cswap(flag, i, &r);

    if ctrl.is_some() {
        b.begin("sub", CostAnnotation::Body);
        add_into(b, &r, i);
        b.end();
        b.load_const(&r, half - 1);
    }

    if odd {
        match ctrl {
            Some(c) => b.cnot(c, index[0]),
            None => b.x(index[0]),
        }
    }
    b.end()
}

/// Emits `P_S1`: amplitudes proportional to `sqrt n` on even `n < n_sites`.
pub fn emit_ps1(
    b: &mut Builder,
    index: &[Qubit],
    n_sites: u64,
    eps: f64,
    ctrl: Option<Qubit>,
    succ: Qubit,
    opts: BuildOptions,
) -> Composite {
    emit_alias(b, index, n_sites, eps, ctrl, succ, false, opts)
}

/// Emits `P_S2`: amplitudes proportional to `sqrt n` on odd `n < n_sites`.
pub fn emit_ps2(
    b: &mut Builder,
    index: &[Qubit],
    n_sites: u64,
    eps: f64,
    ctrl: Option<Qubit>,
    succ: Qubit,
    opts: BuildOptions,
) -> Composite {
    emit_alias(b, index, n_sites, eps, ctrl, succ, true, opts)
}

/// Angle of the padding rotation that lowers the `P_S3'` success amplitude
/// to exactly 1/2.
pub fn ps3_pad_angle(n: u64) -> f64 {
    let nf = n as f64;
    2.0 * (3.0 * nf.powi(3) / (2.0 * nf * (nf - 1.0) * (2.0 * nf - 1.0))).sqrt().asin()
}

/// Success amplitude of `P_S3'`, `sqrt((N-1) N (2N-1) / 6 N^3)`.
pub fn ps3_prime_amplitude(n: u64) -> f64 {
    let nf = n as f64;
    ((nf - 1.0) * nf * (2.0 * nf - 1.0) / (6.0 * nf.powi(3))).sqrt()
}

struct Ps3Regs {
    reg1: Vec<Qubit>,
    reg2: Vec<Qubit>,
    rot1: Qubit,
    rot2: Qubit,
    succ1: Qubit,
    succ2: Qubit,
    f: Qubit,
}

fn emit_ps3_prime(b: &mut Builder, r: &Ps3Regs, n: u64, eps: f64, ctrl: Option<Qubit>, opts: BuildOptions) {
    emit_uni(b, &r.reg1, Some(r.rot1), n, eps, ctrl, r.succ1, opts);
    let uni2 = emit_uni(b, &r.reg2, Some(r.rot2), n, eps, None, r.succ2, opts);
    let o = b.alloc1("ps3.cmp");
    let cmp = ineq(b, &r.reg1, &r.reg2, o);
    b.x(o);
    b.and(o, r.succ1, r.f);
    b.x(o);
    ineq_undo(b, cmp);
    b.release(&[o]);
    b.push_inverse(&uni2, None);
}

/// Emits `P_S3`: amplitudes proportional to `n` on `1 <= n < n_sites`.
///
/// Every rotation runs at `eps / 20`. The success flag is XORed into `succ`.
#[allow(clippy::too_many_arguments)]
pub fn emit_ps3(
    b: &mut Builder,
    index: &[Qubit],
    n_sites: u64,
    eps: f64,
    ctrl: Option<Qubit>,
    succ: Qubit,
    opts: BuildOptions,
) -> Composite {
    let bb = bits_for(n_sites) as usize;
    assert_eq!(index.len(), bb, "index register width");
    let eps_r = eps / 20.0;
    let eps_uni = 2.0 * eps_r;
    b.begin(if ctrl.is_some() { "cps3" } else { "ps3" }, CostAnnotation::Body);
    let regs = Ps3Regs {
        reg1: index.to_vec(),
        reg2: b.junk("ps3.reg2", bb),
        rot1: b.junk1("ps3.rot1"),
        rot2: b.junk1("ps3.rot2"),
        succ1: b.junk1("ps3.succ1"),
        succ2: b.junk1("ps3.succ2"),
        f: b.junk1("ps3.f"),
    };
    let e = b.junk1("ps3.e");
    let theta_e = ps3_pad_angle(n_sites);
    let controls: Vec<Qubit> = ctrl.into_iter().collect();

    b.block("ps3'", CostAnnotation::Body, |b| emit_ps3_prime(b, &regs, n_sites, eps_uni, ctrl, opts));
    b.ry(e, theta_e, eps_r);

    let mut good = regs.reg2.clone();
    good.extend([regs.rot2, regs.f, e]);
    b.x(regs.f);
    b.x(e);
    b.reflection(&good, &controls);
    b.x(regs.f);
    b.x(e);

    let ((), prime) = b.detached("ps3'", CostAnnotation::Body, |b| emit_ps3_prime(b, &regs, n_sites, eps_uni, None, opts));
    b.ry(e, -theta_e, eps_r);
    b.push_inverse(&prime, None);

    let mut zero = regs.reg1.clone();
    zero.extend(&regs.reg2);
    zero.extend([regs.f, e, regs.rot2]);
    b.reflection(&zero, &controls);

    b.push_again(&prime);

    let mut flags = regs.reg2.clone();
    flags.push(regs.rot2);
    b.xs(&flags);
    let mut mcx_controls = flags.clone();
    mcx_controls.push(regs.f);
    mcx_controls.extend(&controls);
    b.mcx(&mcx_controls, succ);
    b.xs(&flags);

    match ctrl {
        Some(c) => b.z(c),
        None => {
            b.z(e);
            b.x(e);
            b.z(e);
            b.x(e);
        }
    }
    b.end()
}

fn standalone(
    n_sites: u64,
    eps: f64,
    controlled: bool,
    cost: &CostModel,
    emit: impl FnOnce(&mut Builder, &[Qubit], Option<Qubit>, Qubit) -> Composite,
) -> Result<(Circuit, ResourceReport)> {
    check_eps(eps)?;
    let mut b = Builder::new();
    let ctrl = if controlled { Some(b.data("ctrl", 1)[0]) } else { None };
    let index = b.data("index", bits_for(n_sites) as usize);
    let succ = b.data("succ", 1)[0];
    emit(&mut b, &index, ctrl, succ);
    let c = b.finish();
    let r = count_resources(&c, cost);
    Ok((c, r))
}

/// Standalone `P_S1` with registers `index`, `succ`, `ctrl`.
pub fn ps1(n_sites: u64, eps: f64, controlled: bool) -> Result<(Circuit, ResourceReport)> {
    ps1_with(n_sites, eps, controlled, BuildOptions::default(), &CostModel::per_rotation())
}

pub fn ps1_with(
    n_sites: u64,
    eps: f64,
    controlled: bool,
    opts: BuildOptions,
    cost: &CostModel,
) -> Result<(Circuit, ResourceReport)> {
    if n_sites < 4 || n_sites % 2 == 1 {
        return invalid("P_S1 needs even N >= 4");
    }
    standalone(n_sites, eps, controlled, cost, |b, idx, c, s| emit_ps1(b, idx, n_sites, eps, c, s, opts))
}

/// Standalone `P_S2` with registers `index`, `succ`, `ctrl`.
pub fn ps2(n_sites: u64, eps: f64, controlled: bool) -> Result<(Circuit, ResourceReport)> {
    ps2_with(n_sites, eps, controlled, BuildOptions::default(), &CostModel::per_rotation())
}

pub fn ps2_with(
    n_sites: u64,
    eps: f64,
    controlled: bool,
    opts: BuildOptions,
    cost: &CostModel,
) -> Result<(Circuit, ResourceReport)> {
    if n_sites < 4 || n_sites % 2 == 1 {
        return invalid("P_S2 needs even N >= 4");
    }
    standalone(n_sites, eps, controlled, cost, |b, idx, c, s| emit_ps2(b, idx, n_sites, eps, c, s, opts))
}

/// Standalone `P_S3` with registers `index`, `succ`, `ctrl`.
pub fn ps3(n_sites: u64, eps: f64, controlled: bool) -> Result<(Circuit, ResourceReport)> {
    ps3_with(n_sites, eps, controlled, BuildOptions::default(), &CostModel::per_rotation())
}

pub fn ps3_with(
    n_sites: u64,
    eps: f64,
    controlled: bool,
    opts: BuildOptions,
    cost: &CostModel,
) -> Result<(Circuit, ResourceReport)> {
    if n_sites < 8 {
        return invalid("P_S3 needs N >= 8");
    }
    standalone(n_sites, eps, controlled, cost, |b, idx, c, s| emit_ps3(b, idx, n_sites, eps, c, s, opts))
}
