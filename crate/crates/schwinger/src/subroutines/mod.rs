//! Gate-level synthesis of the PREPARE and SELECT building blocks.
//!
//! Every builder comes in two forms: an `emit_*` function that appends the
//! subroutine to a [`Builder`](crate::circuit::Builder) on caller-owned
//! registers, and a standalone function returning the circuit with its
//! [`ResourceReport`](crate::circuit::ResourceReport).

pub mod arith;
pub mod checks;
pub mod formulas;
pub mod p1;
pub mod p2;
pub mod ps;
pub mod select;
pub mod uni;

pub use arith::{arithmetic, ArithKind};
pub use p1::p1;
pub use p2::p2;
pub use ps::{ps1, ps2, ps3};
pub use select::{select, SelectKind};
pub use uni::uni;

use crate::error::{invalid, Result};

/// Construction switches shared by the builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// UNI on a power of two emits Hadamards only instead of the general
    /// amplification circuit.
    pub short_circuit: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { short_circuit: true }
    }
}

impl BuildOptions {
    /// General constructions everywhere, matching the closed-form tallies.
    pub fn literal() -> Self {
        Self { short_circuit: false }
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("epsilon must lie in (0, 1), got {eps}"));
    }
    Ok(())
}
