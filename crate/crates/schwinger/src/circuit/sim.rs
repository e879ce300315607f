//! Exact evaluators: a sparse statevector simulator and a classical
//! basis-permutation checker.
//!
//! The state is a map from basis index (bit `q` is qubit `q`) to amplitude,
//! so circuits with many ancillas but small superposition support stay
//! cheap. Rotations are applied as exact matrices.

use num_complex::Complex64;
use std::collections::{BTreeMap, HashMap};

use super::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};

/// Widest circuit the simulator accepts.
pub const SIMULATION_LIMIT: usize = 128;

const PRUNE: f64 = 1e-14;

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bit(k: u128, q: Qubit) -> bool {
    (k >> q) & 1 == 1
}

fn all_set(k: u128, qs: &[Qubit]) -> bool {
    qs.iter().all(|&q| bit(k, q))
}

/// Sparse state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    pub n_qubits: usize,
    pub amps: HashMap<u128, Complex64>,
}

impl SparseState {
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: u128) -> Self {
        let mut amps = HashMap::new();
        amps.insert(index, c(1.0, 0.0));
        Self { n_qubits, amps }
    }

    pub fn from_pairs(n_qubits: usize, pairs: impl IntoIterator<Item = (u128, Complex64)>) -> Self {
        let mut amps = HashMap::new();
        for (k, a) in pairs {
            *amps.entry(k).or_insert(c(0.0, 0.0)) += a;
        }
        Self { n_qubits, amps }
    }

    pub fn amplitude(&self, index: u128) -> Complex64 {
        self.amps.get(&index).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SparseState) -> Complex64 {
        self.amps.iter().map(|(k, a)| a.conj() * other.amplitude(*k)).sum()
    }

    /// Unnormalized projection onto basis states satisfying `keep`.
    pub fn project(&self, keep: impl Fn(u128) -> bool) -> SparseState {
        Self {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().filter(|(k, _)| keep(**k)).map(|(k, a)| (*k, *a)).collect(),
        }
    }

    /// Total probability of basis states satisfying `pred`.
    pub fn probability(&self, pred: impl Fn(u128) -> bool) -> f64 {
        self.amps.iter().filter(|(k, _)| pred(**k)).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Distribution of the value held in `qubits` (little-endian).
    pub fn marginal(&self, qubits: &[Qubit]) -> BTreeMap<u64, f64> {
        let mut out = BTreeMap::new();
        for (k, a) in &self.amps {
            *out.entry(read_register(*k, qubits)).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() > PRUNE);
    }

    fn map_keys(&mut self, f: impl Fn(u128) -> u128) {
        let old = std::mem::take(&mut self.amps);
        self.amps.reserve(old.len());
        for (k, a) in old {
            self.amps.insert(f(k), a);
        }
    }

    fn phase(&mut self, f: impl Fn(u128) -> Complex64) {
        for (k, a) in self.amps.iter_mut() {
            *a *= f(*k);
        }
    }

    fn apply_1q(&mut self, q: Qubit, m: Mat2, controls: &[Qubit]) {
        let old = std::mem::take(&mut self.amps);
        let mut out: HashMap<u128, Complex64> = HashMap::with_capacity(old.len() * 2);
        let mask = 1u128 << q;
        for (k, a) in old {
            if !all_set(k, controls) {
                *out.entry(k).or_insert(c(0.0, 0.0)) += a;
                continue;
            }
            let b = bit(k, q) as usize;
            let k0 = k & !mask;
            let k1 = k | mask;
            if m[0][b] != c(0.0, 0.0) {
                *out.entry(k0).or_insert(c(0.0, 0.0)) += m[0][b] * a;
            }
            if m[1][b] != c(0.0, 0.0) {
                *out.entry(k1).or_insert(c(0.0, 0.0)) += m[1][b] * a;
            }
        }
        self.amps = out;
        self.prune();
    }

    /// Applies one gate.
    pub fn apply(&mut self, g: &Gate) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match g {
            Gate::H(q) => self.apply_1q(*q, [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]], &[]),
            Gate::S(q) => self.phase(|k| if bit(k, *q) { c(0.0, 1.0) } else { c(1.0, 0.0) }),
            Gate::Sdg(q) => self.phase(|k| if bit(k, *q) { c(0.0, -1.0) } else { c(1.0, 0.0) }),
            Gate::T(q) => self.phase(|k| if bit(k, *q) { Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4) } else { c(1.0, 0.0) }),
            Gate::Tdg(q) => self.phase(|k| if bit(k, *q) { Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4) } else { c(1.0, 0.0) }),
            Gate::X(q) => self.map_keys(|k| k ^ (1u128 << q)),
            Gate::Y(q) => self.apply_1q(*q, y_matrix(), &[]),
            Gate::Z(q) => self.phase(|k| if bit(k, *q) { c(-1.0, 0.0) } else { c(1.0, 0.0) }),
            Gate::Cnot { control, target } => {
                self.map_keys(|k| if bit(k, *control) { k ^ (1u128 << target) } else { k })
            }
            Gate::Cz { a, b } => self.phase(|k| if bit(k, *a) && bit(k, *b) { c(-1.0, 0.0) } else { c(1.0, 0.0) }),
            Gate::Cy { control, target } => self.apply_1q(*target, y_matrix(), &[*control]),
            Gate::Toffoli { c1, c2, target, .. } => {
                self.map_keys(|k| if bit(k, *c1) && bit(k, *c2) { k ^ (1u128 << target) } else { k })
            }
            Gate::Ry { q, angle, .. } => self.apply_1q(*q, ry_matrix(*angle), &[]),
            Gate::Rz { q, angle, .. } => {
                let (p0, p1) = (Complex64::from_polar(1.0, -angle / 2.0), Complex64::from_polar(1.0, angle / 2.0));
                self.phase(|k| if bit(k, *q) { p1 } else { p0 })
            }
            Gate::ControlledRy { control, q, angle, .. } => self.apply_1q(*q, ry_matrix(*angle), &[*control]),
            Gate::Mcx { controls, target, .. } => {
                self.map_keys(|k| if all_set(k, controls) { k ^ (1u128 << target) } else { k })
            }
            Gate::Reflection { qubits, controls } => self.phase(|k| {
                if !all_set(k, controls) || qubits.iter().all(|&q| !bit(k, q)) {
                    c(1.0, 0.0)
                } else {
                    c(-1.0, 0.0)
                }
            }),
            Gate::Composite(comp) => {
                for g in &comp.body {
                    self.apply(g);
                }
            }
        }
    }

    pub fn apply_all(&mut self, gates: &[Gate]) {
        for g in gates {
            self.apply(g);
        }
    }
}

fn y_matrix() -> Mat2 {
    [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]
}

fn ry_matrix(angle: f64) -> Mat2 {
    let (s, co) = (angle / 2.0).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

/// Little-endian integer held in `qubits` of basis state `k`.
pub fn read_register(k: u128, qubits: &[Qubit]) -> u64 {
    qubits.iter().enumerate().fold(0u64, |acc, (i, &q)| acc | ((bit(k, q) as u64) << i))
}

/// Basis index with `value` written into `qubits` on top of `k`.
pub fn write_register(k: u128, qubits: &[Qubit], value: u64) -> u128 {
    let mut out = k;
    for (i, &q) in qubits.iter().enumerate() {
        if (value >> i) & 1 == 1 {
            out |= 1u128 << q;
        } else {
            out &= !(1u128 << q);
        }
    }
    out
}

/// Runs `circuit` on `input`.
pub fn simulate_statevector(circuit: &Circuit, input: SparseState) -> Result<SparseState> {
    if circuit.n_qubits > SIMULATION_LIMIT {
        return Err(Error::DimensionLimit { qubits: circuit.n_qubits, limit: SIMULATION_LIMIT });
    }
    let mut st = input;
    st.n_qubits = st.n_qubits.max(circuit.n_qubits);
    st.apply_all(&circuit.gates);
    Ok(st)
}

/// Outcome of an exhaustive or sampled basis check.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationVerdict {
    pub checked: usize,
    /// `(input, expected, actual)` for each disagreement.
    pub mismatches: Vec<(u128, u128, u128)>,
}

impl PermutationVerdict {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn eval_classical(gates: &[Gate], mut k: u128) -> u128 {
    for g in gates {
        k = match g {
            Gate::X(q) => k ^ (1u128 << q),
            Gate::Cnot { control, target } => {
                if bit(k, *control) {
                    k ^ (1u128 << target)
                } else {
                    k
                }
            }
            Gate::Toffoli { c1, c2, target, .. } => {
                if bit(k, *c1) && bit(k, *c2) {
                    k ^ (1u128 << target)
                } else {
                    k
                }
            }
            Gate::Mcx { controls, target, .. } => {
                if all_set(k, controls) {
                    k ^ (1u128 << target)
                } else {
                    k
                }
            }
            Gate::Composite(comp) => eval_classical(&comp.body, k),
            _ => unreachable!("checked classical"),
        };
    }
    k
}

/// Compares the circuit's action on each basis input with `reference`.
pub fn check_basis_permutation(
    circuit: &Circuit,
    inputs: impl IntoIterator<Item = u128>,
    reference: impl Fn(u128) -> u128,
) -> Result<PermutationVerdict> {
    if let Some(g) = circuit.gates.iter().find(|g| !g.is_classical()) {
        return Err(Error::NotPermutation(format!("{g:?}")));
    }
    if circuit.n_qubits > SIMULATION_LIMIT {
        return Err(Error::DimensionLimit { qubits: circuit.n_qubits, limit: SIMULATION_LIMIT });
    }
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for k in inputs {
        checked += 1;
        let got = eval_classical(&circuit.gates, k);
        let want = reference(k);
        if got != want {
            mismatches.push((k, want, got));
        }
    }
    Ok(PermutationVerdict { checked, mismatches })
}
