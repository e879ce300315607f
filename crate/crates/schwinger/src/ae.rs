//! Amplitude-estimation query models and an adaptive estimator simulated
//! over exact Grover measurement statistics.
//!
//! The estimator keeps an interval `[theta_lo, theta_hi]` for
//! `theta = asin(omega)`. Each round picks the largest odd multiplier
//! `K = 2k + 1` for which `K theta` stays inside one quarter period, where
//! `sin^2(K theta)` is monotone, samples at depth `k` and intersects the
//! interval with the Clopper-Pearson bound mapped back through that branch.
//! The run stops once the induced `omega` interval is at most `2 eps` wide.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;

use crate::error::{invalid, Result};
use crate::model::{self, ModelParams};

/// `ceil(ln(2 / delta) / (2 eps^2))` samples for an `eps`-accurate
/// estimate by plain sampling.
pub fn hoeffding_queries(eps: f64, delta: f64) -> Result<u64> {
    check_unit("epsilon", eps)?;
    check_unit("delta", delta)?;
    let q = (2.0 / delta).ln() / (2.0 * eps * eps);
    Ok(crate::circuit::cost::ceil_total(q))
}

/// Worst-case query formula `ceil(5.874534 / eps ln(2.08 ln(2 / eps)))`.
pub fn chebae_query_formula(eps: f64) -> Result<u64> {
    check_unit("epsilon", eps)?;
    Ok((5.874534 / eps * (2.08 * (2.0 / eps).ln()).ln()).ceil() as u64)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return invalid(format!("{name} must lie in (0, 1), got {x}"));
    }
    Ok(())
}

/// Probability of outcome 1 after `k` Grover iterations at amplitude `omega`.
pub fn grover_probability(omega: f64, k: u64) -> f64 {
    let theta = omega.clamp(0.0, 1.0).asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// Samples the good-subspace indicator after `k` Grover iterations.
pub fn grover_outcome(omega: f64, k: u64, rng: &mut impl Rng) -> Result<bool> {
    if !(0.0..=1.0).contains(&omega) {
        return invalid(format!("amplitude must lie in [0, 1], got {omega}"));
    }
    Ok(rng.gen::<f64>() < grover_probability(omega, k))
}

/// Outcome of one estimation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AERunStats {
    pub seed: u64,
    pub q_psi: u64,
    pub q_pi: u64,
    pub estimate: f64,
    pub true_amplitude: f64,
    pub tolerance: f64,
    pub succeeded: bool,
    pub max_depth: u64,
    /// Number of state preparations and measurements.
    pub shots: u64,
}

impl AERunStats {
    /// `q_psi + q_pi`.
    pub fn queries(&self) -> u64 {
        self.q_psi + self.q_pi
    }

    /// Reflection queries plus one query-equivalent per shot for the
    /// preparation and measurement.
    pub fn total_cost(&self) -> u64 {
        self.queries() + self.shots
    }

    /// JSON-lines record for violin plots.
    pub fn record(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.seed,
            "omega": self.true_amplitude,
            "omega_hat": self.estimate,
            "q_psi": self.q_psi,
            "q_pi": self.q_pi,
            "succeeded": self.succeeded,
        })
    }
}

/// Batch sizes of the adaptive estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// Largest batch drawn in one stage.
    pub max_batch: u64,
    /// Smallest batch drawn in one stage.
    pub min_batch: u64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { max_batch: 24, min_batch: 4 }
    }
}

/// Hard cap on stages per run.
const MAX_STAGES: u64 = 10_000;

/// Smallest `p` in `[0, 1]` with `I_p(a, b) >= target`, by bisection.
fn beta_quantile(a: f64, b: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..52 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided Clopper-Pearson interval for `x` successes in `n` trials at
/// confidence `1 - delta`.
pub fn clopper_pearson(x: u64, n: u64, delta: f64) -> (f64, f64) {
    let lo = if x == 0 { 0.0 } else { beta_quantile(x as f64, (n - x + 1) as f64, delta / 2.0) };
    let hi = if x == n { 1.0 } else { beta_quantile((x + 1) as f64, (n - x) as f64, 1.0 - delta / 2.0) };
    (lo, hi)
}

/// Quarter-period segment of `x` (with a tolerance at the right boundary).
fn segment(x: f64) -> i64 {
    (x / FRAC_PI_2 - 1e-12).floor().max(0.0) as i64
}

/// Largest odd `K >= current` with `K [lo, hi]` inside one quarter period.
fn next_multiplier(current: u64, lo: f64, hi: f64) -> u64 {
    let width = (hi - lo).max(1e-300);
    let mut k = ((FRAC_PI_2 / width).floor() as u64).max(current);
    if k % 2 == 0 {
        k -= 1;
    }
    while k > current {
        if segment(k as f64 * lo) == segment(k as f64 * hi) {
            return k;
        }
        k -= 2;
    }
    current
}

/// Maps an interval of `sin^2(K theta)` back to `theta` on segment `j`.
fn invert(p_lo: f64, p_hi: f64, k: u64, j: i64) -> (f64, f64) {
    let base = j as f64 * FRAC_PI_2;
    let (a, b) = (p_lo.sqrt().clamp(0.0, 1.0).asin(), p_hi.sqrt().clamp(0.0, 1.0).asin());
    let (x_lo, x_hi) = if j % 2 == 0 { (base + a, base + b) } else { (base + FRAC_PI_2 - b, base + FRAC_PI_2 - a) };
    (x_lo / k as f64, x_hi / k as f64)
}

/// Confidence budget of the `look`-th interval (from 1) at the `level`-th
/// depth (from 1). Levels get `delta / (L + 1)` for the first `L` and halve
/// afterwards; looks within a level split that budget as `6 / (pi^2 l^2)`.
/// The budgets sum to at most `delta`.
fn look_delta(delta: f64, planned: u64, level: u64, look: u64) -> f64 {
    let base = delta / (planned + 1) as f64;
    let lvl = if level <= planned { base } else { base * 0.5f64.powi((level - planned).min(1000) as i32) };
    lvl * 6.0 / (std::f64::consts::PI.powi(2) * (look * look) as f64)
}

/// Normal quantile `z` with `P(|Z| > z) = p`, by bisection on `erfc`.
fn two_sided_z(p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 40.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if erfc(mid / std::f64::consts::SQRT_2) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Adaptive estimate of `omega` to `eps` with failure probability `delta`.
///
/// Each stage draws a batch of shots at the current depth, with the batch
/// size planned from the current interval before sampling. Every interval
/// holds with its own budget from [`look_delta`], so all hold jointly with
/// probability at least `1 - delta`. A shot at depth `k` counts `k` queries to each
/// reflection; preparations and measurements are counted in `shots`.
pub fn simulate_adaptive_ae(omega: f64, eps: f64, delta: f64, seed: u64) -> Result<AERunStats> {
    simulate_with(omega, eps, delta, seed, Schedule::default())
}

pub fn simulate_with(omega: f64, eps: f64, delta: f64, seed: u64, schedule: Schedule) -> Result<AERunStats> {
    if schedule.min_batch == 0 || schedule.min_batch > schedule.max_batch {
        return invalid("batch bounds must satisfy 1 <= min <= max");
    }
    check_unit("epsilon", eps)?;
    check_unit("delta", delta)?;
    if !(0.0..=1.0).contains(&omega) {
        return invalid(format!("amplitude must lie in [0, 1], got {omega}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planned = crate::ceil_log2(FRAC_PI_2 / eps).max(1) as u64 + 2;
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
    let (mut mult, mut ones, mut shots) = (1u64, 0u64, 0u64);
    let (mut queries, mut max_depth, mut stage) = (0u64, 0u64, 0u64);
    let (mut level, mut look, mut total_shots) = (1u64, 0u64, 0u64);

    while hi.sin() - lo.sin() > 2.0 * eps && stage < MAX_STAGES {
        stage += 1;
        let next = next_multiplier(mult, lo, hi);
        if next != mult {
            mult = next;
            ones = 0;
            shots = 0;
            level += 1;
            look = 0;
        }
        look += 1;
        let k = (mult - 1) / 2;
        max_depth = max_depth.max(k);
        let ds = look_delta(delta, planned, level, look);
        let target = 2.0 * eps / lo.cos().max(1e-12);
        let want = (two_sided_z(ds) / (mult as f64 * target)).powi(2).ceil() as u64;
        let batch = want.clamp(schedule.min_batch, schedule.max_batch);
        for _ in 0..batch {
            ones += u64::from(grover_outcome(omega, k, &mut rng)?);
        }
        shots += batch;
        queries += batch * k;
        total_shots += batch;
        let (p_lo, p_hi) = clopper_pearson(ones, shots, ds);
        let j = segment(mult as f64 * lo);
        let (t_lo, t_hi) = invert(p_lo, p_hi, mult, j);
        let (new_lo, new_hi) = (lo.max(t_lo), hi.min(t_hi));
        if new_lo <= new_hi {
            lo = new_lo;
            hi = new_hi;
        } else {
            let edge = if t_lo > hi { hi } else { lo };
            lo = edge;
            hi = edge;
        }
    }
    let estimate = (lo.sin() + hi.sin()) / 2.0;
    Ok(AERunStats {
        seed,
        q_psi: queries,
        q_pi: queries,
        estimate,
        true_amplitude: omega,
        tolerance: eps,
        succeeded: (estimate - omega).abs() <= eps,
        max_depth,
        shots: total_shots,
    })
}

/// Estimates `|<vac|e^{-iHt}|vac>|` to `eps`, giving the amplitude
/// estimation `eps / 2` and leaving `eps / 2` to the evolution.
pub fn end_to_end_vpa(params: &ModelParams, t: f64, eps: f64, delta: f64, seed: u64) -> Result<AERunStats> {
    let omega = model::vacuum_persistence(params, t)?.norm().min(1.0);
    let mut stats = simulate_adaptive_ae(omega, eps / 2.0, delta, seed)?;
    stats.tolerance = eps;
    stats.succeeded = (stats.estimate - omega).abs() <= eps;
    Ok(stats)
}

/// Runs `runs` seeded estimates starting at `seed0`.
pub fn batch(omega: f64, eps: f64, delta: f64, seed0: u64, runs: u64) -> Result<Vec<AERunStats>> {
    (seed0..seed0 + runs).map(|s| simulate_adaptive_ae(omega, eps, delta, s)).collect()
}
