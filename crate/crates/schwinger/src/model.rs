//! Qubit Schwinger Hamiltonian, its LCU term groups, normalization
//! constants and the exact small-N dynamics oracle.
//!
//! Site `n` is bit `n` of a computational-basis index and `Z|0> = +|0>`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Default cap on system qubits for dense evaluation.
pub const DEFAULT_DENSE_LIMIT: usize = 14;

/// Lattice parameters of the Schwinger model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_sites: usize,
    pub spacing: f64,
    pub mass: f64,
    pub coupling: f64,
    pub theta: f64,
}

impl ModelParams {
    /// Validated constructor.
    pub fn new(n_sites: usize, spacing: f64, mass: f64, coupling: f64, theta: f64) -> Result<Self> {
        let p = Self { n_sites, spacing, mass, coupling, theta };
        p.validate()?;
        Ok(p)
    }

    /// Benchmark point a = 0.2, m = 0.1, g = 1, θ = π.
    pub fn benchmark(n_sites: usize) -> Self {
        Self { n_sites, spacing: 0.2, mass: 0.1, coupling: 1.0, theta: PI }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites % 2 != 0 {
            return invalid(format!("N must be even and >= 2, got {}", self.n_sites));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return invalid(format!("spacing must be positive, got {}", self.spacing));
        }
        if !(self.mass >= 0.0) || !self.mass.is_finite() {
            return invalid(format!("mass must be finite and >= 0, got {}", self.mass));
        }
        if !self.coupling.is_finite() || !self.theta.is_finite() {
            return invalid("coupling and theta must be finite");
        }
        Ok(())
    }

    /// Hopping strength w = 1/(2a).
    pub fn w(&self) -> f64 {
        1.0 / (2.0 * self.spacing)
    }

    /// Electric coupling J = g²a/2.
    pub fn j(&self) -> f64 {
        self.coupling * self.coupling * self.spacing / 2.0
    }

    /// θ/2π.
    pub fn theta_frac(&self) -> f64 {
        self.theta / (2.0 * PI)
    }

    /// Index register width b = ⌈log2 N⌉.
    pub fn b(&self) -> u32 {
        crate::bits_for(self.n_sites as u64)
    }

    /// Converts the dimensionless time w·t to t.
    pub fn time_from_wt(&self, wt: f64) -> f64 {
        wt / self.w()
    }
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Real-weighted tensor product of Paulis over all sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    pub coefficient: f64,
    pub letters: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n: usize, coefficient: f64) -> Self {
        Self { coefficient, letters: vec![Pauli::I; n] }
    }

    /// String with the given letters on the listed sites and I elsewhere.
    pub fn from_sites(n: usize, coefficient: f64, sites: &[(usize, Pauli)]) -> Self {
        let mut letters = vec![Pauli::I; n];
        for &(s, p) in sites {
            letters[s] = p;
        }
        Self { coefficient, letters }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Image of basis state `k` as `(k', phase)` with unit coefficient.
    pub fn apply_basis(&self, k: usize) -> (usize, Complex64) {
        let mut out = k;
        let mut phase = Complex64::new(1.0, 0.0);
        for (s, &p) in self.letters.iter().enumerate() {
            let bit = (k >> s) & 1;
            match p {
                Pauli::I => {}
                Pauli::X => out ^= 1 << s,
                Pauli::Y => {
                    out ^= 1 << s;
                    phase *= if bit == 0 { Complex64::i() } else { -Complex64::i() };
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        (out, phase)
    }

    /// Adds `coefficient * P` into `m`.
    pub fn accumulate(&self, m: &mut DMatrix<Complex64>) {
        for k in 0..m.ncols() {
            let (r, ph) = self.apply_basis(k);
            m[(r, k)] += ph * self.coefficient;
        }
    }
}

/// The six LCU term groups plus the scalar separating H_S from H_{S,mod}.
///
/// `z_squared` carries the identity offset `-(J/8) Σ l²`, so the six groups
/// sum to H_{S,mod} and adding `constant_shift` gives H_S.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianTerms {
    pub n_sites: usize,
    pub xx: Vec<PauliString>,
    pub yy: Vec<PauliString>,
    pub z: Vec<PauliString>,
    pub z_even: Vec<PauliString>,
    pub z_odd: Vec<PauliString>,
    pub z_squared: Vec<PauliString>,
    pub constant_shift: f64,
}

impl HamiltonianTerms {
    /// Groups in canonical order with their names.
    pub fn groups(&self) -> [(&'static str, &[PauliString]); 6] {
        [
            ("xx", &self.xx),
            ("yy", &self.yy),
            ("z", &self.z),
            ("z_even", &self.z_even),
            ("z_odd", &self.z_odd),
            ("z_squared", &self.z_squared),
        ]
    }

    pub fn strings(&self) -> impl Iterator<Item = &PauliString> {
        self.xx
            .iter()
            .chain(&self.yy)
            .chain(&self.z)
            .chain(&self.z_even)
            .chain(&self.z_odd)
            .chain(&self.z_squared)
    }
}

/// Builds the six term groups and the constant shift.
pub fn build_hamiltonian(params: &ModelParams) -> Result<HamiltonianTerms> {
    params.validate()?;
    let n = params.n_sites;
    let (w, m, j, tf) = (params.w(), params.mass, params.j(), params.theta_frac());

    let mut xx = Vec::new();
    let mut yy = Vec::new();
    for s in 0..n - 1 {
        xx.push(PauliString::from_sites(n, w / 2.0, &[(s, Pauli::X), (s + 1, Pauli::X)]));
        yy.push(PauliString::from_sites(n, w / 2.0, &[(s, Pauli::Y), (s + 1, Pauli::Y)]));
    }
    let z = (0..n)
        .map(|s| {
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            PauliString::from_sites(n, sign * m / 2.0, &[(s, Pauli::Z)])
        })
        .collect();

    let mut z_even = Vec::new();
    let mut z_odd = Vec::new();
    let mut z_squared = Vec::new();
    let mut constant_shift = 0.0;
    if j != 0.0 {
        for l in 1..n {
            let (group, coeff) = if l % 2 == 0 {
                (&mut z_even, j * tf)
            } else {
                (&mut z_odd, j * (0.5 + tf))
            };
            for i in 0..l {
                group.push(PauliString::from_sites(n, coeff, &[(i, Pauli::Z)]));
            }
        }
        let sum_l: f64 = (1..n).map(|l| l as f64).sum();
        let sum_l2: f64 = (1..n).map(|l| (l * l) as f64).sum();
        z_squared.push(PauliString::identity(n, j / 4.0 * sum_l - j / 8.0 * sum_l2));
        for a in 0..n {
            for b in a + 1..n {
                // pair (a, b) appears in every prefix of length l > b
                let count = (n - 1 - b) as f64;
                if count > 0.0 {
                    z_squared.push(PauliString::from_sites(
                        n,
                        j / 2.0 * count,
                        &[(a, Pauli::Z), (b, Pauli::Z)],
                    ));
                }
            }
        }
        let offset: f64 = (1..n)
            .map(|l| {
                let c = if l % 2 == 1 { 0.5 } else { 0.0 } + tf;
                c * c
            })
            .sum();
        constant_shift = j / 8.0 * sum_l2 + j * offset;
    }
    // zero-weight strings are omitted
    let nz = |v: Vec<PauliString>| -> Vec<PauliString> {
        v.into_iter().filter(|p| p.coefficient != 0.0).collect()
    };
    Ok(HamiltonianTerms {
        n_sites: n,
        xx: nz(xx),
        yy: nz(yy),
        z: nz(z),
        z_even: nz(z_even),
        z_odd: nz(z_odd),
        z_squared: nz(z_squared),
        constant_shift,
    })
}

/// LCU 1-norm α_S and its three lattice sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConstants {
    pub alpha_s: f64,
    pub alpha_s1: f64,
    pub alpha_s2: f64,
    pub alpha_s3: f64,
}

/// Evaluates α_S, Σ even l, Σ odd l and Σ l² over l = 1..N−1.
pub fn normalization(params: &ModelParams) -> Result<NormalizationConstants> {
    params.validate()?;
    let n = params.n_sites as u64;
    let alpha_s1: u64 = (1..n).filter(|l| l % 2 == 0).sum();
    let alpha_s2: u64 = (1..n).filter(|l| l % 2 == 1).sum();
    let alpha_s3: u64 = (1..n).map(|l| l * l).sum();
    let (w, m, j, tf) = (params.w(), params.mass, params.j(), params.theta_frac());
    let (s1, s2, s3) = (alpha_s1 as f64, alpha_s2 as f64, alpha_s3 as f64);
    let alpha_s = w * (n - 1) as f64
        + m / 2.0 * n as f64
        + j * tf * s1
        + (j * tf + j / 2.0) * s2
        + j / 8.0 * s3;
    Ok(NormalizationConstants { alpha_s, alpha_s1: s1, alpha_s2: s2, alpha_s3: s3 })
}

/// Exact complex operator on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub n_qubits: usize,
    pub matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn identity(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        Self { n_qubits, matrix: DMatrix::identity(d, d) }
    }

    pub fn from_real(n_qubits: usize, m: &DMatrix<f64>) -> Self {
        Self { n_qubits, matrix: m.map(|x| Complex64::new(x, 0.0)) }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest entrywise deviation from the Hermitian conjugate.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation of `U U†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dimension();
        let p = &self.matrix * self.matrix.adjoint();
        (p - DMatrix::<Complex64>::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Spectral norm.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }

    /// Entrywise maximum of `|self - other|`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Spectral norm via eigenvalues when Hermitian, singular values otherwise.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    let herm = (m - m.adjoint()).iter().all(|z| z.norm() < 1e-13);
    if herm {
        SymmetricEigen::new(m.clone()).eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    } else {
        m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
    }
}

/// Spectral norm of a real symmetric matrix.
pub fn symmetric_norm(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::DimensionLimit { qubits: n, limit })
    } else {
        Ok(())
    }
}

/// Dense Hermitian form of a list of Pauli strings.
pub fn strings_to_dense(n: usize, strings: &[PauliString], limit: usize) -> Result<DenseOperator> {
    check_limit(n, limit)?;
    let d = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for p in strings {
        p.accumulate(&mut m);
    }
    Ok(DenseOperator { n_qubits: n, matrix: m })
}

/// Dense sum of all groups, with the constant shift added when requested.
pub fn to_dense(terms: &HamiltonianTerms, include_shift: bool, limit: usize) -> Result<DenseOperator> {
    let n = terms.n_sites;
    check_limit(n, limit)?;
    let mut op = strings_to_dense(n, &[], limit)?;
    for p in terms.strings() {
        p.accumulate(&mut op.matrix);
    }
    if include_shift {
        for k in 0..op.dimension() {
            op.matrix[(k, k)] += terms.constant_shift;
        }
    }
    Ok(op)
}

/// Real matrix of H_S (or H_{S,mod} when `include_shift` is false).
///
/// Every term is real, so the result is real symmetric.
pub fn hamiltonian_matrix(params: &ModelParams, include_shift: bool, limit: usize) -> Result<DMatrix<f64>> {
    let terms = build_hamiltonian(params)?;
    let op = to_dense(&terms, include_shift, limit)?;
    Ok(op.matrix.map(|z| z.re))
}

/// Basis index of the Néel vacuum |1010…>: site n occupied for even n.
pub fn neel_index(n_sites: usize) -> usize {
    (0..n_sites).step_by(2).map(|s| 1usize << s).sum()
}

/// Eigendecomposition of H_S reused across time grids.
#[derive(Debug, Clone)]
pub struct DynamicsOracle {
    pub params: ModelParams,
    pub hamiltonian: DMatrix<f64>,
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl DynamicsOracle {
    pub fn new(params: &ModelParams, limit: usize) -> Result<Self> {
        let h = hamiltonian_matrix(params, true, limit)?;
        let eig = SymmetricEigen::new(h.clone());
        Ok(Self {
            params: *params,
            hamiltonian: h,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.params.n_sites
    }

    /// e^{−iH_S t}.
    pub fn evolution(&self, t: f64) -> DenseOperator {
        let v = self.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let phases = self.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t));
        let mut vd = v.clone();
        for (k, mut col) in vd.column_iter_mut().enumerate() {
            col *= phases[k];
        }
        DenseOperator { n_qubits: self.n_qubits(), matrix: vd * v.transpose() }
    }

    /// e^{−iH_S t}|vac> via the spectral decomposition.
    pub fn evolved_vacuum(&self, t: f64) -> DVector<Complex64> {
        let vac = neel_index(self.n_qubits());
        let row = self.eigenvectors.row(vac);
        let mut out = DVector::<Complex64>::zeros(self.eigenvalues.len());
        for k in 0..self.eigenvalues.len() {
            let c = Complex64::from_polar(row[k], -self.eigenvalues[k] * t);
            for r in 0..out.len() {
                out[r] += c * self.eigenvectors[(r, k)];
            }
        }
        out
    }

    /// G(t) = Σ_k |<vac|k>|² e^{−iλ_k t}.
    pub fn vacuum_persistence(&self, t: f64) -> Complex64 {
        let vac = neel_index(self.n_qubits());
        self.eigenvectors
            .row(vac)
            .iter()
            .zip(self.eigenvalues.iter())
            .map(|(&c, &l)| Complex64::from_polar(c * c, -l * t))
            .sum()
    }

    /// ν(t) from the evolved state.
    pub fn particle_density(&self, t: f64) -> f64 {
        density_from_state(self.n_qubits(), &self.evolved_vacuum(t))
    }

    /// ν(t) from the Heisenberg-picture operators U† Z_n U.
    pub fn particle_density_heisenberg(&self, t: f64) -> f64 {
        let n = self.n_qubits();
        let u = self.evolution(t).matrix;
        let ud = u.adjoint();
        let vac = neel_index(n);
        let d = u.nrows();
        let mut acc = 0.0;
        for s in 0..n {
            let mut zu = u.clone();
            for r in 0..d {
                if (r >> s) & 1 == 1 {
                    zu.row_mut(r).neg_mut();
                }
            }
            let op = &ud * zu;
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * op[(vac, vac)].re + 1.0;
        }
        acc / (2.0 * n as f64)
    }
}

/// ν from a state vector: (1/2N) Σ_n ((−1)^n <Z_n> + 1).
pub fn density_from_state(n: usize, psi: &DVector<Complex64>) -> f64 {
    let mut acc = 0.0;
    for s in 0..n {
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        let z: f64 = psi
            .iter()
            .enumerate()
            .map(|(k, a)| if (k >> s) & 1 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum();
        acc += sign * z + 1.0;
    }
    acc / (2.0 * n as f64)
}

/// e^{−iHt}ψ by time-sliced Taylor series, independent of any eigensolver.
pub fn taylor_evolve(h: &DMatrix<f64>, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
    let hc = h.map(|x| Complex64::new(x, 0.0));
    let bound = h.iter().map(|x| x.abs()).sum::<f64>().max(1e-300);
    let norm_bound = h
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        .min(bound);
    let steps = ((norm_bound * t.abs()) / 0.25).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut out = psi.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut sum = out.clone();
        for k in 1..60 {
            term = (&hc * &term) * Complex64::new(0.0, -dt / k as f64);
            sum += &term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        out = sum;
    }
    out
}

/// G(t) through the Taylor propagator.
pub fn vacuum_persistence_taylor(params: &ModelParams, t: f64, limit: usize) -> Result<Complex64> {
    let h = hamiltonian_matrix(params, true, limit)?;
    let vac = neel_index(params.n_sites);
    let mut psi = DVector::<Complex64>::zeros(h.nrows());
    psi[vac] = Complex64::new(1.0, 0.0);
    Ok(taylor_evolve(&h, &psi, t)[vac])
}

/// e^{−iH_S t} via eigendecomposition.
pub fn exact_evolution(params: &ModelParams, t: f64) -> Result<DenseOperator> {
    Ok(DynamicsOracle::new(params, DEFAULT_DENSE_LIMIT)?.evolution(t))
}

/// <vac|e^{−iH_S t}|vac>.
pub fn vacuum_persistence(params: &ModelParams, t: f64) -> Result<Complex64> {
    Ok(DynamicsOracle::new(params, DEFAULT_DENSE_LIMIT)?.vacuum_persistence(t))
}

/// ν(t) evaluated by conjugating each Z_n with the exact evolution.
pub fn particle_density(params: &ModelParams, t: f64) -> Result<f64> {
    Ok(DynamicsOracle::new(params, DEFAULT_DENSE_LIMIT)?.particle_density_heisenberg(t))
}
