//! Block-encoding circuits and fault-tolerant resource estimates for the
//! lattice Schwinger model in its qubit formulation.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] builds the qubit Hamiltonian, its LCU term groups and the
//!   exact small-N dynamics oracle.
//! * [`circuit`] is the gate-level IR with a T-count cost model, a sparse
//!   statevector simulator and a basis-permutation checker.
//! * [`subroutines`] synthesises the state-preparation, arithmetic and
//!   SELECT building blocks as circuits.
//! * [`blockenc`] assembles the full block-encoding and verifies it through
//!   a semantic LCU evaluator.
//! * [`estimator`] evaluates the closed-form T counts, runtimes and
//!   physical-qubit estimates.
//! * [`ae`] models amplitude-estimation query costs and simulates an
//!   adaptive estimator.

pub mod ae;
pub mod blockenc;
pub mod circuit;
pub mod error;
pub mod estimator;
pub mod model;
pub mod subroutines;

pub use error::{Error, Result};

/// Ceiling of `log2(x)` for a positive real argument.
///
/// Exact powers of two map to their exponent; `x <= 1` maps to 0 or below
/// as the real logarithm dictates.
pub fn ceil_log2(x: f64) -> i64 {
    let l = x.log2();
    let r = l.round();
    if (l - r).abs() < 1e-12 {
        r as i64
    } else {
        l.ceil() as i64
    }
}

/// Number of bits `ceil(log2 n)` needed to index `n` items (0 for n <= 1).
pub fn bits_for(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Splits `m` into `(z, r)` with `m = 2^z * r` and `r` odd.
///
/// Zero maps to `(0, 0)`.
pub fn factor_two(m: u64) -> (u32, u64) {
    if m == 0 {
        return (0, 0);
    }
    let z = m.trailing_zeros();
    (z, m >> z)
}
