//! Simulation checks of the subroutines against classical references and
//! closed-form target distributions.

use serde::{Deserialize, Serialize};

use super::arith::{arithmetic, ArithKind};
use super::p2::{iterations, p2};
use super::ps::{ps1, ps2, ps3};
use super::uni::uni;
use crate::circuit::sim::{check_basis_permutation, read_register, simulate_statevector, write_register, SparseState};
use crate::circuit::{Circuit, Qubit};
use crate::error::{Error, Result};

/// Result of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Largest deviation found (0 for exact basis checks).
    pub deviation: f64,
    pub cases: usize,
}

fn qubits(c: &Circuit, name: &str) -> Result<Vec<Qubit>> {
    c.register(name)
        .map(|r| r.qubits.clone())
        .ok_or_else(|| Error::MalformedCircuit(format!("missing register `{name}`")))
}

/// Weight of each index value of a preparation on `n_sites` sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Uniform over `0..n`.
    Uniform,
    /// `n` on even `n` in `1..N`.
    Even,
    /// `n` on odd `n` in `1..N`.
    Odd,
    /// `n^2` on `n` in `1..N`.
    Square,
}

/// Normalized target distribution of a profile over `0..n`.
pub fn target_distribution(profile: Profile, n: u64) -> Vec<f64> {
    let w: Vec<f64> = (0..n)
        .map(|v| {
            let x = v as f64;
            match profile {
                Profile::Uniform => 1.0,
                Profile::Even if v > 0 && v % 2 == 0 => x,
                Profile::Odd if v % 2 == 1 => x,
                Profile::Square => x * x,
                _ => 0.0,
            }
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Index distribution conditioned on the success flag, with the control (if
/// any) set, plus the success probability.
pub fn prepared_distribution(c: &Circuit, index: &[Qubit], input: u128) -> Result<(Vec<f64>, f64)> {
    let succ = qubits(c, "succ")?[0];
    let out = simulate_statevector(c, SparseState::basis(c.n_qubits, input))?;
    let mut dist = vec![0.0; 1 << index.len()];
    let mut p_succ = 0.0;
    for (k, a) in &out.amps {
        if (k >> succ) & 1 == 1 {
            let p = a.norm_sqr();
            dist[read_register(*k, index) as usize] += p;
            p_succ += p;
        }
    }
    if p_succ > 0.0 {
        dist.iter_mut().for_each(|x| *x /= p_succ);
    }
    Ok((dist, p_succ))
}

fn max_gap(got: &[f64], want: &[f64]) -> f64 {
    (0..got.len().max(want.len()))
        .map(|i| (got.get(i).copied().unwrap_or(0.0) - want.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn profile_check(name: String, c: &Circuit, profile: Profile, n: u64, tol: f64) -> Result<CheckOutcome> {
    let index = qubits(c, "index")?;
    let input = match c.register("ctrl") {
        Some(r) => write_register(0, &r.qubits, 1),
        None => 0,
    };
    let (dist, p) = prepared_distribution(c, &index, input)?;
    let mut dev = max_gap(&dist, &target_distribution(profile, n)).max((1.0 - p).abs());
    if let Some(r) = c.register("ctrl") {
        let off = simulate_statevector(c, SparseState::basis(c.n_qubits, 0))?;
        let mut watch = index.clone();
        watch.push(qubits(c, "succ")?[0]);
        watch.extend(r.qubits.iter().copied());
        let stay = off.probability(|k| read_register(k, &watch) == 0);
        dev = dev.max((1.0 - stay).abs());
    }
    Ok(CheckOutcome { name, passed: dev <= tol, deviation: dev, cases: 1 })
}

/// Post-selected index distributions of UNI, `P_S1`, `P_S2` and `P_S3`
/// (both plain and controlled) for every even size in `sizes`, plus the
/// per-input distributions of `P_2`, against their closed forms.
pub fn prepare_suite(sizes: &[u64], eps: f64, tol: f64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for &n in sizes {
        for controlled in [false, true] {
            let tag = if controlled { "c" } else { "" };
            for m in [n - 1, n] {
                let (c, _) = uni(m, eps, controlled)?;
                out.push(profile_check(format!("{tag}uni({m})"), &c, Profile::Uniform, m, tol)?);
            }
            if n >= 4 && n % 2 == 0 {
                let (c, _) = ps1(n, eps, controlled)?;
                out.push(profile_check(format!("{tag}ps1({n})"), &c, Profile::Even, n, tol)?);
                let (c, _) = ps2(n, eps, controlled)?;
                out.push(profile_check(format!("{tag}ps2({n})"), &c, Profile::Odd, n, tol)?);
            }
            if n >= 8 {
                let (c, _) = ps3(n, eps, controlled)?;
                out.push(profile_check(format!("{tag}ps3({n})"), &c, Profile::Square, n, tol)?);
            }
        }
        out.push(p2_check(n, eps, 1e-3, tol)?);
    }
    Ok(out)
}

/// `P_2` on every input `1 <= m < n`: the success probability is at least
/// `1 - Delta` and the post-selected state is uniform over `i < m`.
pub fn p2_check(n: u64, eps: f64, delta: f64, tol: f64) -> Result<CheckOutcome> {
    let (c, _) = p2(n, eps, delta, false)?;
    let nreg = qubits(&c, "n")?;
    let ireg = qubits(&c, "i")?;
    let mut dev = 0.0f64;
    let mut cases = 0;
    for m in 1..n {
        let (dist, p) = prepared_distribution(&c, &ireg, write_register(0, &nreg, m))?;
        dev = dev.max(max_gap(&dist, &target_distribution(Profile::Uniform, m)));
        dev = dev.max((1.0 - delta - p).max(0.0));
        cases += 1;
    }
    Ok(CheckOutcome { name: format!("p2({n}, d={})", iterations(delta)), passed: dev <= tol, deviation: dev, cases })
}

fn reg_or_empty(c: &Circuit, name: &str) -> Vec<Qubit> {
    c.register(name).map(|r| r.qubits.clone()).unwrap_or_default()
}

/// Exhaustive basis checks of the comparator, subtractor, leading-one mask
/// (on a clean output register) and controlled swaps on every width up to
/// `max_bits`, plus the phase of the reflection on every basis state.
pub fn arithmetic_suite(max_bits: usize) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for s in 1..=max_bits {
        let mask = (1u64 << s) - 1;
        for (kind, controlled) in [
            (ArithKind::Ineq, false),
            (ArithKind::Sub, false),
            (ArithKind::Una, false),
            (ArithKind::Cswap, false),
            (ArithKind::Cswap, true),
        ] {
            let (c, _) = arithmetic(kind, s, controlled)?;
            let data: Vec<Qubit> = c.registers.iter().filter(|r| r.role == crate::circuit::Role::Data).flat_map(|r| r.qubits.clone()).collect();
            let width = data.len();
            let u = reg_or_empty(&c, "u");
            let inputs: Vec<u128> = (0..1u64 << width)
                .map(|v| write_register(0, &data, v))
                .filter(|&k| read_register(k, &u) == 0)
                .collect();
            let reference = |k: u128| -> u128 {
                let get = |name: &str| read_register(k, &reg_or_empty(&c, name));
                let put = |k: u128, name: &str, v: u64| write_register(k, &reg_or_empty(&c, name), v);
                match kind {
                    ArithKind::Ineq => {
                        let bit = u64::from(get("a") <= get("b"));
                        put(k, "out", get("out") ^ bit)
                    }
                    ArithKind::Sub => put(k, "a", get("a").wrapping_sub(get("b")) & mask),
                    ArithKind::Una => {
                        let a = get("a");
                        let m = if a == 0 { 0 } else { (1u64 << (64 - a.leading_zeros())) - 1 };
                        put(k, "u", get("u") ^ m)
                    }
                    ArithKind::Cswap => {
                        let on = get("ctrl") == 1 && (!controlled || get("ctrl2") == 1);
                        if on {
                            put(put(k, "x", get("y")), "y", get("x"))
                        } else {
                            k
                        }
                    }
                    ArithKind::Reflection => k,
                }
            };
            let verdict = check_basis_permutation(&c, inputs, reference)?;
            out.push(CheckOutcome {
                name: format!("{}{kind:?}({s})", if controlled { "c-" } else { "" }).to_lowercase(),
                passed: verdict.passed(),
                deviation: verdict.mismatches.len() as f64,
                cases: verdict.checked,
            });
        }
        for controlled in [false, true] {
            let (c, _) = arithmetic(ArithKind::Reflection, s, controlled)?;
            let q = qubits(&c, "q")?;
            let ctrl = reg_or_empty(&c, "ctrl");
            let mut dev = 0.0f64;
            let mut cases = 0;
            for v in 0..1u64 << (s + ctrl.len()) {
                let k = write_register(write_register(0, &q, v & mask), &ctrl, v >> s);
                let st = simulate_statevector(&c, SparseState::basis(c.n_qubits, k))?;
                let on = ctrl.is_empty() || v >> s == 1;
                let want = if on && v & mask != 0 { -1.0 } else { 1.0 };
                dev = dev.max((st.amplitude(k).re - want).abs()).max(1.0 - st.amplitude(k).norm_sqr());
                cases += 1;
            }
            out.push(CheckOutcome {
                name: format!("{}reflection({s})", if controlled { "c-" } else { "" }),
                passed: dev <= 1e-12,
                deviation: dev,
                cases,
            });
        }
    }
    Ok(out)
}
