//! T-count cost model.
//!
//! Rotations cost `4 log2(1/eps) + C`, controlled rotations twice a
//! rotation at half the budget, compute-ANDs 4, `m`-controlled X `4m - 4`
//! and a reflection on `s` targets with `c` controls `4(s + c) - 8`.

use serde::{Deserialize, Serialize};

use super::{Circuit, CostAnnotation, Gate};

/// Rotation synthesis constant `5 + 4 log2(1 + sqrt 2)`.
pub fn synthesis_constant() -> f64 {
    5.0 + 4.0 * (1.0 + std::f64::consts::SQRT_2).log2()
}

/// Rounding applied to rotation costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rounding {
    /// Real-valued `log2`; only the circuit total is ceiled.
    Real,
    /// `ceil(log2(1/eps))` per rotation.
    PerRotation,
}

/// Parameters of the T-count accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Budget for rotations that do not carry their own.
    pub rotation_epsilon: f64,
    pub constant_c: f64,
    pub rounding: Rounding,
    /// Clamps negative reflection and MCX costs at zero.
    pub clamp_negative: bool,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            rotation_epsilon: 1e-10,
            constant_c: synthesis_constant(),
            rounding: Rounding::Real,
            clamp_negative: false,
        }
    }
}

impl CostModel {
    pub fn per_rotation() -> Self {
        Self { rounding: Rounding::PerRotation, ..Self::default() }
    }

    pub fn with_epsilon(eps: f64) -> Self {
        Self { rotation_epsilon: eps, ..Self::default() }
    }

    /// Cost of one rotation at synthesis error `eps`.
    pub fn rotation(&self, eps: f64) -> f64 {
        let l = match self.rounding {
            Rounding::Real => (1.0 / eps).log2(),
            Rounding::PerRotation => crate::ceil_log2(1.0 / eps) as f64,
        };
        4.0 * l + self.constant_c
    }

    fn clamp(&self, x: f64) -> f64 {
        if self.clamp_negative {
            x.max(0.0)
        } else {
            x
        }
    }

    /// Real-valued cost of one gate.
    pub fn gate_cost(&self, g: &Gate) -> f64 {
        match g {
            Gate::T(_) | Gate::Tdg(_) => 1.0,
            Gate::Toffoli { uncompute, .. } => {
                if *uncompute {
                    0.0
                } else {
                    4.0
                }
            }
            Gate::Ry { eps, .. } | Gate::Rz { eps, .. } => self.rotation(eps.unwrap_or(self.rotation_epsilon)),
            Gate::ControlledRy { eps, .. } => 2.0 * self.rotation(eps.unwrap_or(self.rotation_epsilon) / 2.0),
            Gate::Mcx { controls, uncompute, .. } => {
                if *uncompute {
                    0.0
                } else {
                    self.clamp(4.0 * controls.len() as f64 - 4.0)
                }
            }
            Gate::Reflection { qubits, controls } => self.clamp(4.0 * (qubits.len() + controls.len()) as f64 - 8.0),
            Gate::Composite(c) => match c.cost {
                CostAnnotation::Fixed(v) => v,
                CostAnnotation::Body => self.tally(&c.body),
            },
            _ => 0.0,
        }
    }

    /// Real-valued sum over a gate list.
    pub fn tally(&self, gates: &[Gate]) -> f64 {
        gates.iter().map(|g| self.gate_cost(g)).sum()
    }
}

/// Resource summary of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub t_count: u64,
    /// Real-valued total before the final ceiling.
    pub t_exact: f64,
    pub ancilla_reusable: usize,
    pub ancilla_unreusable: usize,
    pub total_qubits: usize,
}

/// Ceils a real T total, absorbing floating-point noise.
pub fn ceil_total(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() < 1e-6 {
        r.max(0.0) as u64
    } else {
        x.ceil().max(0.0) as u64
    }
}

/// Tallies T gates and ancilla usage.
pub fn count_resources(circuit: &Circuit, cost: &CostModel) -> ResourceReport {
    let t_exact = cost.tally(&circuit.gates);
    ResourceReport {
        t_count: ceil_total(t_exact),
        t_exact,
        ancilla_reusable: circuit.peak_reusable,
        ancilla_unreusable: circuit.junk_count(),
        total_qubits: circuit.peak_total,
    }
}

/// Real-valued cost per composite name, summed over every occurrence at any depth.
pub fn breakdown(gates: &[Gate], cost: &CostModel) -> std::collections::BTreeMap<String, f64> {
    fn walk(gates: &[Gate], cost: &CostModel, out: &mut std::collections::BTreeMap<String, f64>) {
        for g in gates {
            if let Gate::Composite(c) = g {
                *out.entry(c.name.clone()).or_insert(0.0) += cost.gate_cost(g);
                if c.cost == CostAnnotation::Body {
                    walk(&c.body, cost, out);
                }
            }
        }
    }
    let mut out = std::collections::BTreeMap::new();
    walk(gates, cost, &mut out);
    out
}
