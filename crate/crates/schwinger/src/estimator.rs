//! Closed-form T counts and qubit counts for the block-encoding, time
//! evolution and vacuum persistence estimation, plus the surface-code
//! footprint model.

use serde::{Deserialize, Serialize};

use crate::circuit::cost::{ceil_total, synthesis_constant};
use crate::error::{invalid, Result};
use crate::model::{normalization, ModelParams};
use crate::subroutines::p2::iterations;
use crate::{bits_for, ceil_log2, factor_two};

/// Output schema version of CSV and JSON records.
pub const SCHEMA_VERSION: u32 = 1;

/// T rate used for runtimes, in T gates per second.
pub const DEFAULT_T_RATE: f64 = 1e6;

/// Target error of the vacuum persistence estimate's evolution step.
pub const VPA_EVOLUTION_EPSILON: f64 = 0.005;

/// Empirical `Q_psi + Q_Pi` of the amplitude estimation.
pub const VPA_QUERIES: u64 = 2000;

/// T count (real total and its ceiling) with ancilla qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub t_count: u64,
    pub t_exact: f64,
    pub ancilla: u64,
}

fn lg(x: f64) -> f64 {
    ceil_log2(x) as f64
}

fn check_size(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if params.n_sites < 8 {
        return invalid("cost formulas need N >= 8");
    }
    Ok(())
}

/// `(z(M), ceil(log2 r(M)))` with `M = 2^z r`, `r` odd.
fn zr(m: u64) -> (f64, f64) {
    let (z, r) = factor_two(m);
    (z as f64, bits_for(r) as f64)
}

/// Ancilla qubits of the block-encoding:
/// `6b + max(2 ceil(log2 N') + ceil(log2(N' - 1)), 3 ceil(log2 N'')) + 6`.
pub fn block_encoding_ancilla(n: u64) -> u64 {
    let b = bits_for(n) as u64;
    let (np, npp) = (n.div_ceil(2), n / 2);
    let a = 2 * bits_for(np) as u64 + bits_for(np - 1) as u64;
    6 * b + a.max(3 * bits_for(npp) as u64) + 6
}

/// The `f` term of the block-encoding count.
pub fn f_term(n: u64) -> f64 {
    let (np, npp) = (n.div_ceil(2), n / 2);
    let (eta, l) = zr(n);
    let (etap, lp) = zr(np);
    let (etapp, lpp) = zr(npp);
    let (mu, k) = zr(n - 1);
    let (mup, kp) = zr(np - 1);
    16.0 * eta + 8.0 * mu + 8.0 * etap + 8.0 * mup + 16.0 * etapp
        + 256.0 * l + 32.0 * k + 32.0 * lp + 32.0 * kp + 64.0 * lpp
}

/// Odd number of amplification slots `d` at target error `eps`.
pub fn block_encoding_d(params: &ModelParams, eps: f64) -> Result<u64> {
    let alpha = normalization(params)?.alpha_s;
    Ok(iterations(eps / (14.0 * alpha)))
}

/// T count and ancillas of the block-encoding at target error `eps`.
pub fn block_encoding_cost(params: &ModelParams, eps: f64) -> Result<CostReport> {
    check_size(params)?;
    if !(eps > 0.0) || !eps.is_finite() {
        return invalid(format!("epsilon must be positive, got {eps}"));
    }
    let n = params.n_sites as u64;
    let alpha = normalization(params)?.alpha_s;
    let c = synthesis_constant();
    let d = block_encoding_d(params, eps)? as f64;
    let b = bits_for(n) as f64;
    let bp = bits_for(n.div_ceil(2)) as f64;
    let bpp = bits_for(n / 2) as f64;
    let t = 20.0 * n as f64
        + 4.0 * d * (8.0 * lg(28.0 * d * alpha / eps) + 8.0 * b + 2.0 * c - 2.0)
        + 312.0 * lg(546.0 * alpha / eps)
        + 124.0 * b
        + 38.0 * bp
        + 38.0 * bpp
        + f_term(n)
        + 78.0 * c
        + 216.0;
    Ok(CostReport { t_count: ceil_total(t), t_exact: t, ancilla: block_encoding_ancilla(n) })
}

/// Number of QSVT steps: smallest even `r >= 2 alpha |t| + 3 ln(9 / eps)`.
pub fn evolution_steps(alpha: f64, t: f64, eps: f64) -> u64 {
    let bound = 2.0 * alpha * t.abs() + 3.0 * (9.0 / eps).ln();
    let r = bound.ceil() as u64;
    r + r % 2
}

/// T count and ancillas of the `(1, 2b+5, eps)` block-encoding of `e^{-iHt}`.
pub fn evolution_cost(params: &ModelParams, t: f64, eps: f64) -> Result<CostReport> {
    check_size(params)?;
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("epsilon must lie in (0, 1), got {eps}"));
    }
    if !t.is_finite() {
        return invalid("evolution time must be finite");
    }
    let n = params.n_sites as u64;
    if t == 0.0 {
        return Ok(CostReport { t_count: 0, t_exact: 0.0, ancilla: 0 });
    }
    let alpha = normalization(params)?.alpha_s;
    let r = evolution_steps(alpha, t, eps) as f64;
    let ch = block_encoding_cost(params, eps / (3.0 * t.abs()))?.t_count as f64;
    let c = synthesis_constant();
    let b = bits_for(n) as f64;
    let rot = lg(18.0 * (2.0 * r + 1.0) / eps);
    let total = r * (3.0 * ch + 48.0 * rot + 24.0 * b + 12.0 * c + 24.0)
        + 3.0 * ch
        + 24.0 * rot
        + 40.0 * b
        + 6.0 * c
        + 120.0;
    Ok(CostReport { t_count: ceil_total(total), t_exact: total, ancilla: block_encoding_ancilla(n) })
}

/// Ancillas of the vacuum persistence estimate: `max(N + 2b + 3, block-encoding ancillas)`.
pub fn vpa_ancilla(n: u64) -> u64 {
    (n + 2 * bits_for(n) as u64 + 3).max(block_encoding_ancilla(n))
}

/// T count of estimating `|<vac|e^{-iHt}|vac>|` to 0.01 with confidence 0.95:
/// `2000 (C_time + 4N + 8b + 12)`.
pub fn vpa_cost(params: &ModelParams, t: f64) -> Result<CostReport> {
    let time = evolution_cost(params, t, VPA_EVOLUTION_EPSILON)?;
    let n = params.n_sites as u64;
    let b = bits_for(n) as u64;
    let t_count = VPA_QUERIES * (time.t_count + 4 * n + 8 * b + 12);
    Ok(CostReport { t_count, t_exact: t_count as f64, ancilla: vpa_ancilla(n) })
}

/// Logical qubits of the estimate: system, `2b + 5` encoding ancillas and
/// the estimate's own ancillas.
pub fn logical_qubits(n: u64) -> u64 {
    n + 2 * bits_for(n) as u64 + 5 + vpa_ancilla(n)
}

/// Runtime in days at `rate` T gates per second.
pub fn runtime_days(t_count: u64, rate: f64) -> f64 {
    t_count as f64 / rate / 86400.0
}

/// One line of the end-to-end table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub wt: f64,
    pub epsilon: f64,
    pub t_count: u64,
    pub runtime_days: f64,
    pub ancilla: u64,
    pub logical_qubits: u64,
}

/// Default table grid.
pub const TABLE_SIZES: [usize; 5] = [16, 32, 64, 128, 256];
pub const TABLE_TIMES: [f64; 3] = [1.0, 10.0, 100.0];

/// Published T counts of the default grid, rows by size, columns by `wt`.
pub const PUBLISHED_T_COUNTS: [[f64; 3]; 5] = [
    [9.11e9, 7.77e10, 8.25e11],
    [3.00e10, 3.25e11, 3.83e12],
    [1.88e11, 2.19e12, 2.54e13],
    [1.60e12, 1.72e13, 1.97e14],
    [1.41e13, 1.61e14, 1.82e15],
];

/// Vacuum persistence estimates over `sizes x times` (`wt` is dimensionless),
/// with the remaining parameters taken from `base`.
pub fn table3(base: &ModelParams, sizes: &[usize], times: &[f64], rate: f64) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::new();
    for &n in sizes {
        let params = ModelParams { n_sites: n, ..*base };
        for &wt in times {
            let t = params.time_from_wt(wt);
            let c = vpa_cost(&params, t)?;
            rows.push(EstimateRow {
                n,
                wt,
                epsilon: 0.01,
                t_count: c.t_count,
                runtime_days: runtime_days(c.t_count, rate),
                ancilla: c.ancilla,
                logical_qubits: logical_qubits(n as u64),
            });
        }
    }
    Ok(rows)
}

/// Surface-code footprint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalEstimate {
    pub p_phys: f64,
    pub code_distance: u64,
    pub logical_qubits: u64,
    pub physical_qubits: u64,
}

/// Logical error rate `0.1 (100 p)^((d + 1) / 2)` at code distance `d`.
pub fn logical_error_rate(p_phys: f64, d: u64) -> f64 {
    0.1 * (100.0 * p_phys).powf((d as f64 + 1.0) / 2.0)
}

/// Smallest odd distance with `p_L(d) < 1 / (100 t_count)`; the footprint
/// is `4 n_logical 2 d^2`.
pub fn physical_qubits(t_count: u64, n_logical: u64, p_phys: f64) -> Result<PhysicalEstimate> {
    if !(p_phys > 0.0 && p_phys < 0.01) {
        return invalid(format!("physical error rate must lie in (0, 0.01), got {p_phys}"));
    }
    let target = 1.0 / (100.0 * t_count.max(1) as f64);
    let mut d = 1u64;
    while logical_error_rate(p_phys, d) >= target {
        d += 2;
    }
    Ok(PhysicalEstimate {
        p_phys,
        code_distance: d,
        logical_qubits: n_logical,
        physical_qubits: 8 * n_logical * d * d,
    })
}

/// CSV rendering of table rows, led by a schema comment.
pub fn rows_to_csv(rows: &[EstimateRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| crate::Error::InvalidParameter(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| crate::Error::InvalidParameter(e.to_string()))?;
    Ok(format!("# schema_version={SCHEMA_VERSION}\n{}", String::from_utf8_lossy(&body)))
}

/// JSON rendering of table rows.
pub fn rows_to_json(rows: &[EstimateRow]) -> serde_json::Value {
    serde_json::json!({ "schema_version": SCHEMA_VERSION, "rows": rows })
}
