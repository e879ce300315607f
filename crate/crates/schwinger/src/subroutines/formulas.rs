//! Closed-form T counts of the subroutines.
//!
//! Rotation logarithms are ceiled individually and `C` stays real, so each
//! function returns the exact real value that the per-rotation cost model
//! assigns to the literal construction.

use super::p2::iterations;
use super::select::SelectKind;
use crate::circuit::cost::synthesis_constant;
use crate::{bits_for, ceil_log2, factor_two};

fn lg(x: f64) -> f64 {
    ceil_log2(x) as f64
}

/// `(eta, l)` with `n = 2^eta L`, `L` odd, `l = ceil(log2 L)`.
pub fn eta_l(n: u64) -> (f64, f64) {
    let (eta, odd) = factor_two(n);
    (eta as f64, bits_for(odd) as f64)
}

pub fn ineq(s: u64) -> f64 {
    4.0 * s as f64
}

pub fn sub(s: u64) -> f64 {
    4.0 * s as f64 - 4.0
}

pub fn cswap(s: u64) -> f64 {
    7.0 * s as f64
}

pub fn una(s: u64) -> f64 {
    4.0 * s as f64 - 4.0
}

pub fn reflection(s: u64) -> f64 {
    4.0 * s as f64 - 8.0
}

/// UNI(n) at budget `eps`: `8 ceil(log2(2/eps)) + 12 l + 2C - 4`, plus
/// `4 eta + 4 l + 12` when controlled.
pub fn uni(n: u64, eps: f64, controlled: bool) -> f64 {
    let c = synthesis_constant();
    let (eta, l) = eta_l(n);
    let base = 8.0 * lg(2.0 / eps) + 12.0 * l + 2.0 * c - 4.0;
    if controlled {
        base + 4.0 * eta + 4.0 * l + 12.0
    } else {
        base
    }
}

/// `P_S1` on `n` sites with `N' = ceil(N/2)`.
pub fn ps1(n: u64, eps: f64, controlled: bool) -> f64 {
    let c = synthesis_constant();
    let half = n.div_ceil(2);
    let bp = bits_for(half) as f64;
    let (eta, l) = eta_l(half);
    let (mu, k) = eta_l(half - 1);
    let r = 16.0 * lg(4.0 / eps);
    if controlled {
        r + 19.0 * bp + 4.0 * eta + 4.0 * mu + 16.0 * l + 16.0 * k + 4.0 * c + 16.0
    } else {
        r + 15.0 * bp + 12.0 * l + 12.0 * k + 4.0 * c - 4.0
    }
}

/// `P_S2` on `n` sites with `N'' = floor(N/2)`.
pub fn ps2(n: u64, eps: f64, controlled: bool) -> f64 {
    let c = synthesis_constant();
    let half = n / 2;
    let bpp = bits_for(half) as f64;
    let (eta, l) = eta_l(half);
    let r = 16.0 * lg(4.0 / eps);
    if controlled {
        r + 19.0 * bpp + 8.0 * eta + 32.0 * l + 4.0 * c + 16.0
    } else {
        r + 15.0 * bpp + 24.0 * l + 4.0 * c - 4.0
    }
}

/// `P_S3'` with its rotations at `eps / 3`.
pub fn ps3_prime(n: u64, eps: f64) -> f64 {
    let c = synthesis_constant();
    let b = bits_for(n) as f64;
    let (_, l) = eta_l(n);
    24.0 * lg(6.0 / eps) + 4.0 * b + 36.0 * l + 6.0 * c - 8.0
}

/// `P_S3` on `n` sites.
pub fn ps3(n: u64, eps: f64, controlled: bool) -> f64 {
    let c = synthesis_constant();
    let b = bits_for(n) as f64;
    let (eta, l) = eta_l(n);
    let base = 80.0 * lg(20.0 / eps) + 28.0 * b + 108.0 * l + 20.0 * c - 12.0;
    if controlled {
        base + 4.0 * eta + 4.0 * l + 24.0
    } else {
        base
    }
}

/// `P_1` on `n` sites.
pub fn p1(n: u64, eps: f64) -> f64 {
    let c = synthesis_constant();
    let b = bits_for(n) as f64;
    let (np, npp) = (n.div_ceil(2), n / 2);
    let (bp, bpp) = (bits_for(np) as f64, bits_for(npp) as f64);
    let (eta, l) = eta_l(n);
    let (mu, k) = eta_l(n - 1);
    let (etap, lp) = eta_l(np);
    let (mup, kp) = eta_l(np - 1);
    let (etapp, lpp) = eta_l(npp);
    156.0 * lg(39.0 / eps) + 28.0 * b + 19.0 * bp + 19.0 * bpp
        + 8.0 * eta + 4.0 * mu + 4.0 * etap + 4.0 * mup + 8.0 * etapp
        + 128.0 * l + 16.0 * k + 16.0 * lp + 16.0 * kp + 32.0 * lpp
        + 39.0 * c + 104.0
}

/// `P_1` as the sum of its parts.
pub fn p1_parts(n: u64, eps: f64) -> f64 {
    let c = synthesis_constant();
    let e = eps / 39.0;
    ps1(n, 4.0 * e, true) + ps2(n, 4.0 * e, true) + ps3(n, 20.0 * e, true)
        + uni(n - 1, 2.0 * e, true) + uni(n, 2.0 * e, true)
        + 7.0 * (4.0 * lg(1.0 / e) + c) + 44.0
}

/// `P_2` on `b = ceil(log2 n)`-bit registers with `d` from `delta`.
pub fn p2(n: u64, eps: f64, delta: f64, controlled: bool) -> f64 {
    let c = synthesis_constant();
    let b = bits_for(n) as f64;
    let d = iterations(delta) as f64;
    if controlled {
        d * (8.0 * lg(2.0 * d / eps) + 8.0 * b + 2.0 * c - 2.0) + 16.0 * b - 2.0
    } else {
        d * (4.0 * lg(d / eps) + 8.0 * b + c - 2.0) + 12.0 * b - 6.0
    }
}

/// `c`-controlled SELECT: `4 (K - 1) + 4 (c - 1)` for `K` items.
pub fn select(kind: SelectKind, n: u64, controls: u64) -> f64 {
    4.0 * (kind.items(n) as f64 - 1.0) + 4.0 * (controls as f64 - 1.0)
}
