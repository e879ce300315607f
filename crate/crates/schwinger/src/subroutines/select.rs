//! Multi-controlled SELECT operators by unary iteration.
//!
//! The controls are merged into one flag with `c - 1` ANDs. A segment tree
//! over the address bits then spends one AND per node with two children,
//! `K - 1` in total for `K` items. In promise mode addresses at or above
//! `K` may trigger the last item; guarded mode adds one AND per truncated
//! node so that out-of-range addresses act as the identity.

use crate::bits_for;
use crate::circuit::{cost::count_resources, Builder, Circuit, Composite, CostAnnotation, CostModel, Qubit, ResourceReport};
use crate::error::{invalid, Result};

/// Term family applied by a SELECT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectKind {
    /// `X_n X_{n+1}` for `n < N - 1`.
    Xx,
    /// `Y_n Y_{n+1}` for `n < N - 1`.
    Yy,
    /// `(-1)^n Z_n` for `n < N`.
    Z,
    /// `Z_i` for `i < N`.
    Z2,
}

impl SelectKind {
    /// Number of addressed items on `n_sites` sites.
    pub fn items(self, n_sites: u64) -> u64 {
        match self {
            SelectKind::Xx | SelectKind::Yy => n_sites - 1,
            SelectKind::Z | SelectKind::Z2 => n_sites,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SelectKind::Xx => "xx",
            SelectKind::Yy => "yy",
            SelectKind::Z => "z",
            SelectKind::Z2 => "z2",
        }
    }
}

impl std::str::FromStr for SelectKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xx" => Ok(SelectKind::Xx),
            "yy" => Ok(SelectKind::Yy),
            "z" => Ok(SelectKind::Z),
            "z2" => Ok(SelectKind::Z2),
            _ => invalid(format!("unknown SELECT kind `{s}`")),
        }
    }
}

fn apply_item(b: &mut Builder, kind: SelectKind, t: Qubit, system: &[Qubit], n: usize) {
    match kind {
        SelectKind::Xx => {
            b.cnot(t, system[n]);
            b.cnot(t, system[n + 1]);
        }
        SelectKind::Yy => {
            b.cy(t, system[n]);
            b.cy(t, system[n + 1]);
        }
        SelectKind::Z => {
            b.cz(t, system[n]);
            if n % 2 == 1 {
                b.z(t);
            }
        }
        SelectKind::Z2 => b.cz(t, system[n]),
    }
}

/// `t' = t AND NOT a`.
fn and_not(b: &mut Builder, t: Qubit, a: Qubit, out: Qubit) {
    b.x(a);
    b.and(t, a, out);
    b.x(a);
}

fn and_not_dagger(b: &mut Builder, t: Qubit, a: Qubit, out: Qubit) {
    b.x(a);
    b.and_dagger(t, a, out);
    b.x(a);
}

#[allow(clippy::too_many_arguments)]
fn iterate(
    b: &mut Builder,
    t: Qubit,
    addr: &[Qubit],
    level: usize,
    lo: u64,
    items: u64,
    guarded: bool,
    leaf: &mut dyn FnMut(&mut Builder, Qubit, u64),
) {
    if level == 0 {
        leaf(b, t, lo);
        return;
    }
    let a = addr[level - 1];
    let mid = lo + (1u64 << (level - 1));
    if items <= mid {
        if guarded {
            let tl = b.alloc1("sel.node");
            and_not(b, t, a, tl);
            iterate(b, tl, addr, level - 1, lo, items, guarded, leaf);
            and_not_dagger(b, t, a, tl);
            b.release(&[tl]);
        } else {
            iterate(b, t, addr, level - 1, lo, items, guarded, leaf);
        }
        return;
    }
    let tl = b.alloc1("sel.node");
    and_not(b, t, a, tl);
    iterate(b, tl, addr, level - 1, lo, items, guarded, leaf);
    b.cnot(t, tl);
    iterate(b, tl, addr, level - 1, mid, items, guarded, leaf);
    b.and_dagger(t, a, tl);
    b.release(&[tl]);
}

/// Emits the SELECT of `kind` over `items` addresses, controlled on all of
/// `controls` being 1.
pub fn emit_select(
    b: &mut Builder,
    kind: SelectKind,
    address: &[Qubit],
    system: &[Qubit],
    controls: &[Qubit],
    guarded: bool,
) -> Composite {
    assert!(!controls.is_empty(), "SELECT needs at least one control");
    let items = kind.items(system.len() as u64);
    assert!(items <= 1u64 << address.len(), "address register too narrow");
    b.begin(format!("c{}-select-{}", controls.len(), kind.name()), CostAnnotation::Body);
    let mut merged = Vec::new();
    let mut t = controls[0];
    for &c in &controls[1..] {
        let m = b.alloc1("sel.ctrl");
        b.and(t, c, m);
        merged.push((t, c, m));
        t = m;
    }
    let mut leaf = |b: &mut Builder, q: Qubit, n: u64| apply_item(b, kind, q, system, n as usize);
    iterate(b, t, address, address.len(), 0, items, guarded, &mut leaf);
    for &(x, y, m) in merged.iter().rev() {
        b.and_dagger(x, y, m);
        b.release(&[m]);
    }
    b.end()
}

/// Standalone `c`-controlled SELECT on `n_sites` system qubits with
/// registers `ctrl`, `address` (`ceil(log2 n_sites)` bits) and `system`.
pub fn select(kind: SelectKind, n_sites: u64, controls: usize) -> Result<(Circuit, ResourceReport)> {
    select_with(kind, n_sites, controls, false)
}

pub fn select_with(kind: SelectKind, n_sites: u64, controls: usize, guarded: bool) -> Result<(Circuit, ResourceReport)> {
    if !(2..=4).contains(&controls) {
        return invalid(format!("SELECT supports 2 to 4 controls, got {controls}"));
    }
    if n_sites < 2 {
        return invalid("SELECT needs N >= 2");
    }
    let mut b = Builder::new();
    let ctrl = b.data("ctrl", controls);
    let address = b.data("address", bits_for(n_sites) as usize);
    let system = b.data("system", n_sites as usize);
    emit_select(&mut b, kind, &address, &system, &ctrl, guarded);
    let c = b.finish();
    let r = count_resources(&c, &CostModel::per_rotation());
    Ok((c, r))
}
