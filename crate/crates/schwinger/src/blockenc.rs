//! Full block-encoding of `H_{S,mod}`: circuit assembly, the Chebyshev
//! squaring identity, the error budget and a semantic LCU evaluator.
//!
//! Register layout of the assembled circuit: label qubits `q` (three),
//! index registers `n` and `i` (`b` bits each), flags `succ_p1`, `succ_p2`
//! and the `system` register (site `s` on qubit `system[s]`).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::sim::{simulate_statevector, write_register, SparseState};
use crate::circuit::{cost::count_resources, Builder, Circuit, CostModel, Qubit, ResourceReport};
use crate::error::{invalid, Error, Result};
use crate::model::{self, DenseOperator, ModelParams, DEFAULT_DENSE_LIMIT};
use crate::subroutines::p1::{branch_weights, emit_p1, split_angles};
use crate::subroutines::p2::{emit_p2, failure_probability, iterations};
use crate::subroutines::select::{emit_select, SelectKind};
use crate::subroutines::uni::emit_uni;
use crate::subroutines::BuildOptions;

/// Shape of the encoding: `H_{S,mod} ~ alpha <0|U|0>` with `ancilla_width`
/// encoding ancillas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockEncodingSpec {
    pub alpha: f64,
    pub ancilla_width: usize,
    pub epsilon: f64,
}

/// Error split between `P_1` synthesis, `P_2` synthesis and the
/// amplification residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub eps1: f64,
    pub eps2: f64,
    pub delta: f64,
}

impl ErrorBudget {
    pub fn zero() -> Self {
        Self { eps1: 0.0, eps2: 0.0, delta: 0.0 }
    }

    /// `eps1 = eps2 = delta = eps / (14 alpha)`.
    pub fn split(eps: f64, alpha: f64) -> Self {
        let e = eps / (14.0 * alpha);
        Self { eps1: e, eps2: e, delta: e }
    }

    /// `(2 eps1 + 4 eps2 + 8 delta) alpha`.
    pub fn bound(&self, alpha: f64) -> f64 {
        (2.0 * self.eps1 + 4.0 * self.eps2 + 8.0 * self.delta) * alpha
    }

    pub fn is_sound(&self, eps: f64, alpha: f64) -> bool {
        self.bound(alpha) <= eps * (1.0 + 1e-12)
    }
}

fn check_assembly(params: &ModelParams, eps: f64) -> Result<()> {
    params.validate()?;
    if params.n_sites < 8 {
        return invalid("the block-encoding needs N >= 8");
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return invalid(format!("epsilon must be positive, got {eps}"));
    }
    Ok(())
}

fn negated(b: &mut Builder, neg: &[Qubit], f: impl FnOnce(&mut Builder)) {
    b.xs(neg);
    f(b);
    b.xs(neg);
}

/// Builds the block-encoding circuit under the default budget split.
pub fn assemble(params: &ModelParams, eps: f64) -> Result<(Circuit, BlockEncodingSpec, ResourceReport)> {
    assemble_with(params, eps, BuildOptions::literal(), &CostModel::per_rotation())
}

pub fn assemble_with(
    params: &ModelParams,
    eps: f64,
    opts: BuildOptions,
    cost: &CostModel,
) -> Result<(Circuit, BlockEncodingSpec, ResourceReport)> {
    check_assembly(params, eps)?;
    let alpha = model::normalization(params)?.alpha_s;
    let budget = ErrorBudget::split(eps, alpha);
    let bw = params.b() as usize;
    let mut b = Builder::new();
    let q = b.data("q", 3);
    let n = b.data("n", bw);
    let i = b.data("i", bw);
    let s1 = b.data("succ_p1", 1)[0];
    let s2 = b.data("succ_p2", 1)[0];
    let sys = b.data("system", params.n_sites);
    let (q0, q1, q2) = (q[0], q[1], q[2]);

    let p1 = emit_p1(&mut b, &[q0, q1, q2], &n, params, budget.eps1, s1, opts)?;
    let cp2_a = emit_p2(&mut b, &n, &i, budget.eps2, budget.delta, Some(q0), s2);
    negated(&mut b, &[q0, q1, q2], |b| {
        emit_select(b, SelectKind::Xx, &n, &sys, &[q0, q1, q2], false);
    });
    negated(&mut b, &[q0, q1], |b| {
        emit_select(b, SelectKind::Yy, &n, &sys, &[q0, q1, q2], false);
    });
    negated(&mut b, &[q0], |b| {
        emit_select(b, SelectKind::Z, &n, &sys, &[q0, q1], false);
    });
    emit_select(&mut b, SelectKind::Z2, &i, &sys, &[q0, s2, s1], false);
    b.push_inverse(&cp2_a, None);
    b.reflection(&i, &[q0, q1, s1]);
    let cp2_b = emit_p2(&mut b, &n, &i, budget.eps2, budget.delta, Some(q1), s2);
    emit_select(&mut b, SelectKind::Z2, &i, &sys, &[q0, q1, s2, s1], false);
    b.push_inverse(&cp2_b, None);
    b.push_inverse(&p1, None);

    let c = b.finish();
    let report = count_resources(&c, cost);
    let spec = BlockEncodingSpec { alpha, ancilla_width: 2 * bw + 3, epsilon: eps };
    Ok((c, spec, report))
}

/// Reads the `<0|U|0>` block of a circuit on the register named `system`,
/// with every other qubit starting and ending in |0>.
pub fn circuit_block(c: &Circuit) -> Result<DenseOperator> {
    let sys = c.register("system").ok_or_else(|| Error::MalformedCircuit("no system register".into()))?.qubits.clone();
    if sys.len() > DEFAULT_DENSE_LIMIT {
        return Err(Error::DimensionLimit { qubits: sys.len(), limit: DEFAULT_DENSE_LIMIT });
    }
    let d = 1usize << sys.len();
    let mut sys_mask = 0u128;
    for &s in &sys {
        sys_mask |= 1u128 << s;
    }
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for x in 0..d {
        let input = SparseState::basis(c.n_qubits, write_register(0, &sys, x as u64));
        let out = simulate_statevector(c, input)?;
        for (k, a) in &out.amps {
            if k & !sys_mask == 0 {
                let y = crate::circuit::sim::read_register(*k, &sys) as usize;
                m[(y, x)] += *a;
            }
        }
    }
    Ok(DenseOperator { n_qubits: sys.len(), matrix: m })
}

/// Encoding of `H_XX + H_YY + H_Z` alone on two label qubits, small enough
/// to simulate in full for `N >= 4`. Its normalization is `w (N - 1) + m N / 2`.
pub fn kinetic_fragment(params: &ModelParams, opts: BuildOptions) -> Result<(Circuit, f64)> {
    params.validate()?;
    if params.n_sites < 4 {
        return invalid("the fragment needs N >= 4");
    }
    let w = branch_weights(params)?;
    let norm = w[0] + w[1] + w[2];
    let theta = 2.0 * (w[2] / norm).sqrt().asin();
    let nn = params.n_sites as u64;
    let bw = params.b() as usize;
    let mut b = Builder::new();
    let q = b.data("q", 2);
    let n = b.data("n", bw);
    let succ = b.data("succ", 1)[0];
    let sys = b.data("system", params.n_sites);
    let (q1, q2) = (q[0], q[1]);

    b.begin("prep", crate::circuit::CostAnnotation::Body);
    b.ry(q1, theta, 1e-10);
    negated(&mut b, &[q1], |b| {
        b.ch(q1, q2);
        emit_uni(b, &n, None, nn - 1, 1e-10, Some(q1), succ, opts);
    });
    emit_uni(&mut b, &n, None, nn, 1e-10, Some(q1), succ, opts);
    let prep = b.end();
    negated(&mut b, &[q1, q2], |b| {
        emit_select(b, SelectKind::Xx, &n, &sys, &[q1, q2], false);
    });
    negated(&mut b, &[q1], |b| {
        emit_select(b, SelectKind::Yy, &n, &sys, &[q1, q2], false);
    });
    emit_select(&mut b, SelectKind::Z, &n, &sys, &[q1], false);
    b.push_inverse(&prep, None);
    Ok((b.finish(), norm))
}

/// Synthetic one-ancilla dilation `[[H, S], [S, -H]]` with `S = sqrt(I - H^2)`,
/// ancilla as the most significant qubit.
pub fn dilation(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if h.nrows() != h.ncols() {
        return invalid("block must be square");
    }
    let d = h.nrows();
    let eig = SymmetricEigen::new(h.clone());
    if eig.eigenvalues.iter().any(|l| l.abs() > 1.0 + 1e-12) {
        return invalid("block norm exceeds 1");
    }
    let v = &eig.eigenvectors;
    let s_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new((1.0 - l * l).max(0.0).sqrt(), 0.0)));
    let s = v * s_diag * v.adjoint();
    let mut u = DMatrix::<Complex64>::zeros(2 * d, 2 * d);
    u.view_mut((0, 0), (d, d)).copy_from(h);
    u.view_mut((0, d), (d, d)).copy_from(&s);
    u.view_mut((d, 0), (d, d)).copy_from(&s);
    u.view_mut((d, d), (d, d)).copy_from(&(-h));
    Ok(u)
}

/// `<0|U^dagger (R_0 x I) U|0>` for a unitary `u` whose top `2^n_anc`
/// ancilla values are the high bits of the index.
pub fn squared_block(u: &DMatrix<Complex64>, n_anc: usize) -> Result<DMatrix<Complex64>> {
    if u.nrows() != u.ncols() || u.nrows() % (1 << n_anc) != 0 {
        return invalid("unitary dimension does not match the ancilla count");
    }
    let d = u.nrows() >> n_anc;
    let mut r = DMatrix::<Complex64>::identity(u.nrows(), u.nrows());
    for k in 0..u.nrows() {
        r[(k, k)] = if k < d { Complex64::new(1.0, 0.0) } else { Complex64::new(-1.0, 0.0) };
    }
    let full = u.adjoint() * r * u;
    Ok(full.view((0, 0), (d, d)).into_owned())
}

/// Block of `U^dagger (R_0 x I) U` for the synthetic dilation of `h`.
///
/// Returns an error when the result deviates from `2 h^2 - I` by more than
/// `1e-10` entrywise.
pub fn chebyshev_square(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let u = dilation(h)?;
    let sq = squared_block(&u, 1)?;
    let d = h.nrows();
    let want = h * h * Complex64::new(2.0, 0.0) - DMatrix::<Complex64>::identity(d, d);
    let dev = (&sq - &want).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > 1e-10 {
        return Err(Error::InvalidParameter(format!("squared block deviates from 2H^2 - I by {dev:e}")));
    }
    Ok(sq)
}

/// Operator-norm offset `4 asin(e / 2)` of a rotation angle with synthesis error `e`.
fn angle_offset(e: f64) -> f64 {
    4.0 * (e / 2.0).min(1.0).asin()
}

/// Branch probabilities of the splitter after offsetting each of its four
/// rotation angles by the synthesis error `eps1 / 39`.
pub fn split_probabilities(params: &ModelParams, eps1: f64) -> Result<[f64; 6]> {
    let w = branch_weights(params)?;
    let off = angle_offset(eps1 / 39.0);
    let [r1, r21, r22, r3] = split_angles(&w)?.map(|a| a + off);
    let p = |a: f64| (a / 2.0).sin().powi(2);
    let (e, kz, ez2, zo) = (p(r1), p(r21), p(r22), p(r3));
    let kin = 1.0 - e;
    let hop = kin * (1.0 - kz) / 2.0;
    let pre = e * (1.0 - ez2);
    Ok([hop, hop, kin * kz, pre * (1.0 - zo), pre * zo, e * ez2])
}

/// Amplification residual `delta_n` of the prefix preparation on input `n`
/// (zero for an ideal preparation).
pub fn prefix_residual(n: u64, delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let lambda = n as f64 / (1u64 << crate::bits_for(n)) as f64;
    failure_probability(iterations(delta), delta, lambda)
}

/// `alpha_S <0|U|0>` composed from the component blocks of each branch.
///
/// The prefix preparation on input `n` contributes
/// `(1 - delta_n) (1/n) sum_{i<n} Z_i + delta_n I`, with `delta_n` the
/// amplification residual plus `eps2`; the squared branch applies the
/// Chebyshev identity to that block.
pub fn semantic_block(params: &ModelParams, budget: &ErrorBudget) -> Result<DenseOperator> {
    semantic_block_limited(params, budget, DEFAULT_DENSE_LIMIT)
}

pub fn semantic_block_limited(params: &ModelParams, budget: &ErrorBudget, limit: usize) -> Result<DenseOperator> {
    params.validate()?;
    let n = params.n_sites;
    if n > limit {
        return Err(Error::DimensionLimit { qubits: n, limit });
    }
    let norm = model::normalization(params)?;
    let alpha = norm.alpha_s;
    let p = split_probabilities(params, budget.eps1)?;
    let terms = model::build_hamiltonian(params)?;
    let dim = 1usize << n;

    let unit = |strings: &[model::PauliString], scale: f64| -> Result<DMatrix<Complex64>> {
        let mut op = model::strings_to_dense(n, strings, limit)?.matrix;
        op *= Complex64::new(scale, 0.0);
        Ok(op)
    };
    let w = params.w();
    let m = params.mass;
    let mut block = DMatrix::<Complex64>::zeros(dim, dim);
    if w > 0.0 {
        block += unit(&terms.xx, p[0] / (w / 2.0) / (n - 1) as f64)?;
        block += unit(&terms.yy, p[1] / (w / 2.0) / (n - 1) as f64)?;
    }
    if m > 0.0 {
        block += unit(&terms.z, p[2] / (m / 2.0) / n as f64)?;
    }

    let mut diag = vec![0.0f64; dim];
    for nn in 1..n {
        let dn = (prefix_residual(nn as u64, budget.delta) + budget.eps2).min(1.0);
        let nf = nn as f64;
        let (w_even, w_odd) = if nn % 2 == 0 {
            (p[3] * nf / norm.alpha_s1, 0.0)
        } else {
            (0.0, p[4] * nf / norm.alpha_s2)
        };
        let w_sq = p[5] * nf * nf / norm.alpha_s3;
        for (x, slot) in diag.iter_mut().enumerate() {
            let zsum: f64 = (0..nn).map(|s| if (x >> s) & 1 == 1 { -1.0 } else { 1.0 }).sum();
            let bn = (1.0 - dn) * zsum / nf + dn;
            *slot += (w_even + w_odd) * bn + w_sq * (2.0 * bn * bn - 1.0);
        }
    }
    for (x, v) in diag.iter().enumerate() {
        block[(x, x)] += Complex64::new(*v, 0.0);
    }
    block *= Complex64::new(alpha, 0.0);
    Ok(DenseOperator { n_qubits: n, matrix: block })
}

/// Evaluation mode of [`verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyMode {
    Semantic,
    FullStatevector,
}

/// Outcome of one block-encoding check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    pub mode: VerifyMode,
    pub measured_error: f64,
    pub bound: f64,
    pub t_count_formula: Option<u64>,
    pub t_count_tally: Option<u64>,
    pub pass: bool,
}

/// Numerical floor used when `eps = 0`.
pub const EXACT_TOLERANCE: f64 = 1e-10;

/// Checks `||H_{S,mod} - alpha <0|U|0>|| <= eps`.
///
/// Semantic mode composes the component blocks under the default budget
/// split (zero budget when `eps = 0`). Full-statevector mode simulates the
/// kinetic and mass fragment and compares it with the semantic block of
/// the same parameters at zero coupling.
pub fn verify(params: &ModelParams, eps: f64, mode: VerifyMode) -> Result<VerificationReport> {
    params.validate()?;
    if !(eps >= 0.0) || !eps.is_finite() {
        return invalid(format!("epsilon must be non-negative, got {eps}"));
    }
    match mode {
        VerifyMode::Semantic => {
            let alpha = model::normalization(params)?.alpha_s;
            let budget = if eps == 0.0 { ErrorBudget::zero() } else { ErrorBudget::split(eps, alpha) };
            let h = model::to_dense(&model::build_hamiltonian(params)?, false, DEFAULT_DENSE_LIMIT)?;
            let s = semantic_block(params, &budget)?;
            let measured = model::spectral_norm(&(&h.matrix - &s.matrix));
            let (formula, tally) = if eps > 0.0 && params.n_sites >= 8 {
                let (_, _, r) = assemble(params, eps)?;
                (Some(crate::estimator::block_encoding_cost(params, eps)?.t_count), Some(r.t_count))
            } else {
                (None, None)
            };
            let bound = budget.bound(alpha);
            Ok(VerificationReport {
                n: params.n_sites,
                epsilon: eps,
                mode,
                measured_error: measured,
                bound,
                t_count_formula: formula,
                t_count_tally: tally,
                pass: measured <= eps.max(EXACT_TOLERANCE) && formula == tally,
            })
        }
        VerifyMode::FullStatevector => {
            let (c, norm) = kinetic_fragment(params, BuildOptions::default())?;
            let mut blk = circuit_block(&c)?;
            blk.matrix *= Complex64::new(norm, 0.0);
            let free = ModelParams { coupling: 0.0, ..*params };
            let s = semantic_block(&free, &ErrorBudget::zero())?;
            let measured = model::spectral_norm(&(&blk.matrix - &s.matrix));
            Ok(VerificationReport {
                n: params.n_sites,
                epsilon: eps,
                mode,
                measured_error: measured,
                bound: 0.0,
                t_count_formula: None,
                t_count_tally: None,
                pass: measured <= eps.max(EXACT_TOLERANCE),
            })
        }
    }
}
