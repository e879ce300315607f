//! Gate-level circuit IR with ancilla lifecycle tracking.
//!
//! Qubits are plain indices. A [`Builder`] hands out qubits from a free
//! pool, records allocation and release events, and nests named
//! [`Composite`] blocks whose cost may be annotated independently of their
//! body. Composite bodies are always exact, so simulation never depends on
//! cost annotations.

pub mod cost;
pub mod sim;
pub mod text;

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub use cost::{count_resources, CostModel, ResourceReport, Rounding};
pub use sim::{check_basis_permutation, simulate_statevector, PermutationVerdict, SparseState};

pub type Qubit = usize;

/// Cost attached to a composite block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CostAnnotation {
    /// Sum of the body under the active cost model.
    Body,
    /// Fixed T count regardless of the body.
    Fixed(f64),
}

/// Named subcircuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Composite {
    pub name: String,
    pub cost: CostAnnotation,
    pub body: Vec<Gate>,
    /// Qubits allocated and released inside the block.
    pub scratch: Vec<Qubit>,
    /// Largest number of scratch qubits live at once inside the block.
    pub scratch_peak: usize,
}

/// One gate. Controls are positive; negative controls are built from X
/// conjugation.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(Qubit),
    S(Qubit),
    Sdg(Qubit),
    T(Qubit),
    Tdg(Qubit),
    X(Qubit),
    Y(Qubit),
    Z(Qubit),
    Cnot { control: Qubit, target: Qubit },
    Cz { a: Qubit, b: Qubit },
    Cy { control: Qubit, target: Qubit },
    /// Toffoli; `uncompute` marks a measurement-based uncomputation costed 0.
    Toffoli { c1: Qubit, c2: Qubit, target: Qubit, uncompute: bool },
    /// `exp(-i angle Y / 2)`; `eps` is the synthesis budget.
    Ry { q: Qubit, angle: f64, eps: Option<f64> },
    /// `exp(-i angle Z / 2)`.
    Rz { q: Qubit, angle: f64, eps: Option<f64> },
    /// Controlled R_Y; `eps` is the total budget of both constituent rotations.
    ControlledRy { control: Qubit, q: Qubit, angle: f64, eps: Option<f64> },
    /// X on `target` when all controls are 1.
    Mcx { controls: Vec<Qubit>, target: Qubit, uncompute: bool },
    /// `2|0^s><0^s| - I` on `qubits` when all `controls` are 1.
    Reflection { qubits: Vec<Qubit>, controls: Vec<Qubit> },
    Composite(Box<Composite>),
}

impl Gate {
    /// Qubits touched by this gate (composites: the whole body).
    pub fn qubits(&self) -> Vec<Qubit> {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => vec![*q],
            Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![*q],
            Gate::Cnot { control, target } | Gate::Cy { control, target } => vec![*control, *target],
            Gate::Cz { a, b } => vec![*a, *b],
            Gate::Toffoli { c1, c2, target, .. } => vec![*c1, *c2, *target],
            Gate::Ry { q, .. } | Gate::Rz { q, .. } => vec![*q],
            Gate::ControlledRy { control, q, .. } => vec![*control, *q],
            Gate::Mcx { controls, target, .. } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
            Gate::Reflection { qubits, controls } => {
                let mut v = qubits.clone();
                v.extend(controls);
                v
            }
            Gate::Composite(c) => {
                let mut set = BTreeSet::new();
                for g in &c.body {
                    set.extend(g.qubits());
                }
                set.into_iter().collect()
            }
        }
    }

    /// Exact inverse. Cost flags and annotations are preserved.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::T(q) => Gate::Tdg(*q),
            Gate::Tdg(q) => Gate::T(*q),
            Gate::Ry { q, angle, eps } => Gate::Ry { q: *q, angle: -angle, eps: *eps },
            Gate::Rz { q, angle, eps } => Gate::Rz { q: *q, angle: -angle, eps: *eps },
            Gate::ControlledRy { control, q, angle, eps } => {
                Gate::ControlledRy { control: *control, q: *q, angle: -angle, eps: *eps }
            }
            Gate::Composite(c) => Gate::Composite(Box::new(c.inverse())),
            g => g.clone(),
        }
    }

    /// True when the gate maps basis states to basis states without phases.
    pub fn is_classical(&self) -> bool {
        match self {
            Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. } | Gate::Mcx { .. } => true,
            Gate::Composite(c) => c.body.iter().all(Gate::is_classical),
            _ => false,
        }
    }
}

impl Composite {
    pub fn new(name: impl Into<String>, cost: CostAnnotation, body: Vec<Gate>) -> Self {
        Self { name: name.into(), cost, body, scratch: Vec::new(), scratch_peak: 0 }
    }

    /// Reversed body of inverted gates under the name `name†`.
    pub fn inverse(&self) -> Composite {
        let name = match self.name.strip_suffix('†') {
            Some(n) => n.to_string(),
            None => format!("{}†", self.name),
        };
        Composite {
            name,
            cost: self.cost,
            body: self.body.iter().rev().map(Gate::inverse).collect(),
            scratch: self.scratch.clone(),
            scratch_peak: self.scratch_peak,
        }
    }
}

/// Role of an allocated qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    /// Input or output register owned by the caller.
    Data,
    /// Ancilla returned to |0> and released for reuse.
    Reusable,
    /// Garbage left entangled; never released.
    Junk,
}

/// Named group of qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub qubits: Vec<Qubit>,
    pub role: Role,
}

/// Allocation or release of ancilla qubits, positioned by top-level gate index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AncillaEvent {
    Alloc { at: usize, qubits: Vec<Qubit>, role: Role },
    Release { at: usize, qubits: Vec<Qubit> },
}

/// Finished circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub registers: Vec<Register>,
    pub gates: Vec<Gate>,
    pub ancilla_log: Vec<AncillaEvent>,
    /// Peak simultaneously live reusable ancillas.
    pub peak_reusable: usize,
    /// Peak simultaneously live qubits of any role.
    pub peak_total: usize,
}

impl Circuit {
    /// Circuit from a bare gate list over `n_qubits` data qubits.
    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Self {
        Self {
            n_qubits,
            registers: vec![Register { name: "q".into(), qubits: (0..n_qubits).collect(), role: Role::Data }],
            gates,
            ancilla_log: Vec::new(),
            peak_reusable: 0,
            peak_total: n_qubits,
        }
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Inverse circuit with the same registers. Cost annotations are kept.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            ancilla_log: Vec::new(),
            ..self.clone()
        }
    }

    /// Concatenation over the wider of the two qubit ranges.
    pub fn then(&self, other: &Circuit) -> Circuit {
        let mut out = self.clone();
        out.n_qubits = self.n_qubits.max(other.n_qubits);
        out.gates.extend(other.gates.iter().cloned());
        out.peak_total = self.peak_total.max(other.peak_total);
        out.peak_reusable = self.peak_reusable.max(other.peak_reusable);
        out
    }

    /// Number of junk qubits allocated.
    pub fn junk_count(&self) -> usize {
        self.registers.iter().filter(|r| r.role == Role::Junk).map(|r| r.qubits.len()).sum()
    }

    /// Checks operand distinctness and range for every gate.
    pub fn validate(&self) -> crate::Result<()> {
        fn walk(gates: &[Gate], n: usize) -> crate::Result<()> {
            for g in gates {
                if let Gate::Composite(c) = g {
                    walk(&c.body, n)?;
                    continue;
                }
                let qs = g.qubits();
                let set: BTreeSet<_> = qs.iter().collect();
                if set.len() != qs.len() {
                    return Err(crate::Error::MalformedCircuit(format!("repeated operand in {g:?}")));
                }
                if let Some(q) = qs.iter().find(|&&q| q >= n) {
                    return Err(crate::Error::MalformedCircuit(format!("qubit {q} out of range {n}")));
                }
                let angle = match g {
                    Gate::Ry { angle, .. } | Gate::Rz { angle, .. } | Gate::ControlledRy { angle, .. } => *angle,
                    _ => 0.0,
                };
                if !angle.is_finite() {
                    return Err(crate::Error::MalformedCircuit(format!("non-finite angle in {g:?}")));
                }
            }
            Ok(())
        }
        walk(&self.gates, self.n_qubits)
    }
}

struct Frame {
    name: String,
    cost: CostAnnotation,
    gates: Vec<Gate>,
    allocated: BTreeSet<Qubit>,
    scratch: BTreeSet<Qubit>,
    base_live: usize,
    peak_live: usize,
}

/// Incremental circuit constructor with a reusable qubit pool.
pub struct Builder {
    n_qubits: usize,
    free: BTreeSet<Qubit>,
    live_reusable: usize,
    live_total: usize,
    peak_reusable: usize,
    peak_total: usize,
    registers: Vec<Register>,
    log: Vec<AncillaEvent>,
    frames: Vec<Frame>,
}

impl Default for Builder {
    fn default() -> Self {
        Self::new()
    }
}

impl Builder {
    pub fn new() -> Self {
        Self {
            n_qubits: 0,
            free: BTreeSet::new(),
            live_reusable: 0,
            live_total: 0,
            peak_reusable: 0,
            peak_total: 0,
            registers: Vec::new(),
            log: Vec::new(),
            frames: vec![Frame {
                name: String::new(),
                cost: CostAnnotation::Body,
                gates: Vec::new(),
                allocated: BTreeSet::new(),
                scratch: BTreeSet::new(),
                base_live: 0,
                peak_live: 0,
            }],
        }
    }

    fn take(&mut self, width: usize) -> Vec<Qubit> {
        let mut out = Vec::with_capacity(width);
        for _ in 0..width {
            let q = match self.free.iter().next().copied() {
                Some(q) => {
                    self.free.remove(&q);
                    q
                }
                None => {
                    self.n_qubits += 1;
                    self.n_qubits - 1
                }
            };
            out.push(q);
        }
        out
    }

    fn position(&self) -> usize {
        self.frames[0].gates.len()
    }

    fn note_alloc(&mut self, qubits: &[Qubit], role: Role) {
        self.live_total += qubits.len();
        if role == Role::Reusable {
            self.live_reusable += qubits.len();
        }
        self.peak_total = self.peak_total.max(self.live_total);
        self.peak_reusable = self.peak_reusable.max(self.live_reusable);
        for f in self.frames.iter_mut() {
            f.peak_live = f.peak_live.max(self.live_total);
        }
        if let Some(f) = self.frames.last_mut() {
            f.allocated.extend(qubits.iter().copied());
        }
        let at = self.position();
        self.log.push(AncillaEvent::Alloc { at, qubits: qubits.to_vec(), role });
    }

    /// Allocates a named register of the given role.
    pub fn alloc_role(&mut self, name: &str, width: usize, role: Role) -> Vec<Qubit> {
        let qs = self.take(width);
        self.note_alloc(&qs, role);
        self.registers.push(Register { name: name.to_string(), qubits: qs.clone(), role });
        qs
    }

    /// Caller-owned data register.
    pub fn data(&mut self, name: &str, width: usize) -> Vec<Qubit> {
        self.alloc_role(name, width, Role::Data)
    }

    /// Reusable ancillas, to be returned with [`Builder::release`].
    pub fn alloc(&mut self, name: &str, width: usize) -> Vec<Qubit> {
        self.alloc_role(name, width, Role::Reusable)
    }

    /// Unreusable junk qubits.
    pub fn junk(&mut self, name: &str, width: usize) -> Vec<Qubit> {
        self.alloc_role(name, width, Role::Junk)
    }

    pub fn alloc1(&mut self, name: &str) -> Qubit {
        self.alloc(name, 1)[0]
    }

    pub fn junk1(&mut self, name: &str) -> Qubit {
        self.junk(name, 1)[0]
    }

    /// Returns reusable ancillas (assumed |0>) to the pool.
    pub fn release(&mut self, qubits: &[Qubit]) {
        for &q in qubits {
            let role = self
                .registers
                .iter()
                .rev()
                .find(|r| r.qubits.contains(&q))
                .map(|r| r.role)
                .unwrap_or(Role::Reusable);
            assert!(role == Role::Reusable, "released qubit {q} is not a reusable ancilla");
            assert!(self.free.insert(q), "qubit {q} released twice");
            self.live_total -= 1;
            self.live_reusable -= 1;
            for f in self.frames.iter_mut().rev() {
                if f.allocated.remove(&q) {
                    f.scratch.insert(q);
                    break;
                }
            }
        }
        let at = self.position();
        self.log.push(AncillaEvent::Release { at, qubits: qubits.to_vec() });
    }

    pub fn push(&mut self, g: Gate) {
        self.frames.last_mut().expect("frame").gates.push(g);
    }

    /// Opens a named block.
    pub fn begin(&mut self, name: impl Into<String>, cost: CostAnnotation) {
        self.frames.push(Frame {
            name: name.into(),
            cost,
            gates: Vec::new(),
            allocated: BTreeSet::new(),
            scratch: BTreeSet::new(),
            base_live: self.live_total,
            peak_live: self.live_total,
        });
    }

    /// Closes the innermost block, appends it to its parent and returns a copy.
    pub fn end(&mut self) -> Composite {
        self.close(true)
    }

    /// Builds a block without emitting it, for later use with
    /// [`Builder::push_again`] or [`Builder::push_inverse`]. The block must
    /// release every ancilla it allocates.
    pub fn detached<R>(&mut self, name: &str, cost: CostAnnotation, f: impl FnOnce(&mut Builder) -> R) -> (R, Composite) {
        self.begin(name, cost);
        let r = f(self);
        let comp = self.close(false);
        (r, comp)
    }

    fn close(&mut self, emit: bool) -> Composite {
        assert!(self.frames.len() > 1, "end without begin");
        let f = self.frames.pop().expect("frame");
        let comp = Composite {
            name: f.name,
            cost: f.cost,
            body: f.gates,
            scratch: f.scratch.difference(&f.allocated).copied().collect(),
            scratch_peak: f.peak_live.saturating_sub(f.base_live),
        };
        let parent = self.frames.last_mut().expect("parent");
        if emit {
            parent.allocated.extend(f.allocated);
            parent.scratch.extend(f.scratch);
            parent.gates.push(Gate::Composite(Box::new(comp.clone())));
        } else {
            assert!(f.allocated.is_empty(), "detached block {} leaks qubits", comp.name);
        }
        comp
    }

    /// Runs `f` inside a named block.
    pub fn block<R>(&mut self, name: &str, cost: CostAnnotation, f: impl FnOnce(&mut Builder) -> R) -> (R, Composite) {
        self.begin(name, cost);
        let r = f(self);
        (r, self.end())
    }

    /// Emits the inverse of a previously built block, optionally overriding its cost.
    ///
    /// Panics if any scratch qubit of the block is currently live.
    pub fn push_inverse(&mut self, block: &Composite, cost: Option<CostAnnotation>) {
        for q in &block.scratch {
            assert!(
                self.free.contains(q),
                "scratch qubit {q} of {} is live at inversion",
                block.name
            );
        }
        let mut inv = block.inverse();
        if let Some(c) = cost {
            inv.cost = c;
        }
        let reach = self.live_total + block.scratch_peak;
        self.peak_total = self.peak_total.max(reach);
        self.peak_reusable = self.peak_reusable.max(self.live_reusable + block.scratch_peak);
        for f in self.frames.iter_mut() {
            f.peak_live = f.peak_live.max(reach);
        }
        if let Some(f) = self.frames.last_mut() {
            f.scratch.extend(block.scratch.iter().copied());
        }
        self.push(Gate::Composite(Box::new(inv)));
    }

    /// Re-emits a previously built block unchanged.
    pub fn push_again(&mut self, block: &Composite) {
        let reach = self.live_total + block.scratch_peak;
        self.peak_total = self.peak_total.max(reach);
        self.peak_reusable = self.peak_reusable.max(self.live_reusable + block.scratch_peak);
        self.push(Gate::Composite(Box::new(block.clone())));
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Freezes the builder into a circuit.
    pub fn finish(mut self) -> Circuit {
        assert_eq!(self.frames.len(), 1, "unclosed block");
        let f = self.frames.pop().expect("root");
        Circuit {
            n_qubits: self.n_qubits,
            registers: self.registers,
            gates: f.gates,
            ancilla_log: self.log,
            peak_reusable: self.peak_reusable,
            peak_total: self.peak_total,
        }
    }

    // Gate emitters.

    pub fn h(&mut self, q: Qubit) {
        self.push(Gate::H(q));
    }
    pub fn x(&mut self, q: Qubit) {
        self.push(Gate::X(q));
    }
    pub fn z(&mut self, q: Qubit) {
        self.push(Gate::Z(q));
    }
    pub fn xs(&mut self, qs: &[Qubit]) {
        for &q in qs {
            self.x(q);
        }
    }
    pub fn cnot(&mut self, control: Qubit, target: Qubit) {
        self.push(Gate::Cnot { control, target });
    }
    pub fn cz(&mut self, a: Qubit, b: Qubit) {
        self.push(Gate::Cz { a, b });
    }
    pub fn cy(&mut self, control: Qubit, target: Qubit) {
        self.push(Gate::Cy { control, target });
    }
    /// Compute-AND into a fresh |0> target (4 T).
    pub fn and(&mut self, c1: Qubit, c2: Qubit, target: Qubit) {
        self.push(Gate::Toffoli { c1, c2, target, uncompute: false });
    }
    /// Measurement-based AND uncomputation (0 T).
    pub fn and_dagger(&mut self, c1: Qubit, c2: Qubit, target: Qubit) {
        self.push(Gate::Toffoli { c1, c2, target, uncompute: true });
    }
    pub fn ry(&mut self, q: Qubit, angle: f64, eps: f64) {
        self.push(Gate::Ry { q, angle, eps: Some(eps) });
    }
    pub fn rz(&mut self, q: Qubit, angle: f64, eps: f64) {
        self.push(Gate::Rz { q, angle, eps: Some(eps) });
    }
    pub fn cry(&mut self, control: Qubit, q: Qubit, angle: f64, eps: f64) {
        self.push(Gate::ControlledRy { control, q, angle, eps: Some(eps) });
    }
    pub fn mcx(&mut self, controls: &[Qubit], target: Qubit) {
        self.push(Gate::Mcx { controls: controls.to_vec(), target, uncompute: false });
    }
    pub fn mcx_dagger(&mut self, controls: &[Qubit], target: Qubit) {
        self.push(Gate::Mcx { controls: controls.to_vec(), target, uncompute: true });
    }
    pub fn reflection(&mut self, qubits: &[Qubit], controls: &[Qubit]) {
        self.push(Gate::Reflection { qubits: qubits.to_vec(), controls: controls.to_vec() });
    }

    /// Controlled Hadamard, costed 4 T.
    pub fn ch(&mut self, control: Qubit, target: Qubit) {
        use std::f64::consts::FRAC_PI_4;
        let body = vec![
            Gate::Ry { q: target, angle: -FRAC_PI_4, eps: None },
            Gate::Cz { a: control, b: target },
            Gate::Ry { q: target, angle: FRAC_PI_4, eps: None },
        ];
        self.push(Gate::Composite(Box::new(Composite::new("ch", CostAnnotation::Fixed(4.0), body))));
    }

    /// Hadamard, controlled when `ctrl` is given.
    pub fn h_ctrl(&mut self, ctrl: Option<Qubit>, q: Qubit) {
        match ctrl {
            Some(c) => self.ch(c, q),
            None => self.h(q),
        }
    }

    /// Register swap controlled on `c`, costed 7 T per bit.
    pub fn cswap(&mut self, c: Qubit, xs: &[Qubit], ys: &[Qubit]) {
        assert_eq!(xs.len(), ys.len());
        let mut body = Vec::new();
        for (&x, &y) in xs.iter().zip(ys) {
            body.push(Gate::Cnot { control: y, target: x });
            body.push(Gate::Toffoli { c1: c, c2: x, target: y, uncompute: false });
            body.push(Gate::Cnot { control: y, target: x });
        }
        let cost = CostAnnotation::Fixed(7.0 * xs.len() as f64);
        self.push(Gate::Composite(Box::new(Composite::new("cswap", cost, body))));
    }

    /// Writes the classical constant `value` into |0> qubits with X gates.
    pub fn load_const(&mut self, qs: &[Qubit], value: u64) {
        for (k, &q) in qs.iter().enumerate() {
            if (value >> k) & 1 == 1 {
                self.x(q);
            }
        }
    }
}
