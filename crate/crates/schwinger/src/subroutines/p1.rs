//! `P_1`: the term splitter over three label qubits followed by the
//! controlled index preparations of each branch.
//!
//! Label `q0 q1 q2` selects the branch: `000` hopping XX, `001` hopping YY,
//! `010` mass, `100` even prefix sums, `101` odd prefix sums, `110` squared
//! prefix sums. Every rotation runs at `eps / 39`.

use super::ps::{emit_ps1, emit_ps2, emit_ps3};
use super::uni::emit_uni;
use super::{check_eps, BuildOptions};
use crate::circuit::{cost::count_resources, Builder, Circuit, Composite, CostAnnotation, CostModel, Qubit, ResourceReport};
use crate::error::{invalid, Result};
use crate::model::{normalization, ModelParams};

/// Branch weights in label order `000, 001, 010, 100, 101, 110`; they sum
/// to `alpha_S`.
pub fn branch_weights(params: &ModelParams) -> Result<[f64; 6]> {
    let c = normalization(params)?;
    let n = params.n_sites as f64;
    let (w, m, j, tf) = (params.w(), params.mass, params.j(), params.theta_frac());
    let hop = w * (n - 1.0) / 2.0;
    Ok([hop, hop, m * n / 2.0, c.alpha_s1 * j * tf, c.alpha_s2 * (j * tf + j / 2.0), c.alpha_s3 * j / 8.0])
}

/// Label value `4 q0 + 2 q1 + q2` of each branch in [`branch_weights`] order.
pub const BRANCH_LABELS: [u8; 6] = [0b000, 0b001, 0b010, 0b100, 0b101, 0b110];

fn split_angle(part: f64, whole: f64) -> Result<f64> {
    if part < 0.0 || whole < 0.0 {
        return invalid("branch weights must be non-negative");
    }
    if whole == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * (part / whole).clamp(0.0, 1.0).sqrt().asin())
}

/// Rotation angles `(R1, R21, R22, R3)` of the splitter tree.
pub fn split_angles(weights: &[f64; 6]) -> Result<[f64; 4]> {
    let [xx, yy, z, ze, zo, z2] = *weights;
    let kinetic = xx + yy + z;
    let electric = ze + zo + z2;
    Ok([
        split_angle(electric, kinetic + electric)?,
        split_angle(z, kinetic)?,
        split_angle(z2, electric)?,
        split_angle(zo, ze + zo)?,
    ])
}

fn flagged(b: &mut Builder, label: [Option<bool>; 3], q: &[Qubit; 3], body: impl FnOnce(&mut Builder, Qubit)) {
    let mut negate = Vec::new();
    let mut controls = Vec::new();
    for k in 0..3 {
        if let Some(v) = label[k] {
            controls.push(q[k]);
            if !v {
                negate.push(q[k]);
            }
        }
    }
    b.xs(&negate);
    let g = b.alloc1("p1.flag");
    b.mcx(&controls, g);
    b.xs(&negate);
    body(b, g);
    b.xs(&negate);
    b.mcx_dagger(&controls, g);
    b.xs(&negate);
    b.release(&[g]);
}

/// Emits `P_1` on label qubits `q`, index register `index` (width
/// `ceil(log2 N)`) and success flag `succ`.
pub fn emit_p1(
    b: &mut Builder,
    q: &[Qubit; 3],
    index: &[Qubit],
    params: &ModelParams,
    eps: f64,
    succ: Qubit,
    opts: BuildOptions,
) -> Result<Composite> {
    let n = params.n_sites as u64;
    let e = eps / 39.0;
    let [r1, r21, r22, r3] = split_angles(&branch_weights(params)?)?;
    let [q0, q1, q2] = *q;
    b.begin("p1", CostAnnotation::Body);

    b.begin("split", CostAnnotation::Body);
    b.ry(q0, r1, e);
    b.x(q0);
    b.cry(q0, q1, r21, 2.0 * e);
    b.x(q0);
    b.cry(q0, q1, r22, 2.0 * e);
    let f0 = b.alloc1("p1.hop");
    b.xs(&[q0, q1]);
    b.and(q0, q1, f0);
    b.xs(&[q0, q1]);
    b.ch(f0, q2);
    let f1 = b.alloc1("p1.prefix");
    b.x(q1);
    b.and(q0, q1, f1);
    b.cry(f1, q2, r3, 2.0 * e);
    b.and_dagger(q0, q1, f1);
    b.x(q1);
    b.release(&[f1]);
    b.end();

    emit_uni(b, index, None, n - 1, 2.0 * e, Some(f0), succ, opts);
    b.xs(&[q0, q1]);
    b.and_dagger(q0, q1, f0);
    b.xs(&[q0, q1]);
    b.release(&[f0]);

    flagged(b, [Some(false), Some(true), Some(false)], q, |b, g| {
        emit_uni(b, index, None, n, 2.0 * e, Some(g), succ, opts);
    });
    flagged(b, [Some(true), Some(false), Some(false)], q, |b, g| {
        emit_ps1(b, index, n, 4.0 * e, Some(g), succ, opts);
    });
    flagged(b, [Some(true), Some(false), Some(true)], q, |b, g| {
        emit_ps2(b, index, n, 4.0 * e, Some(g), succ, opts);
    });
    flagged(b, [Some(true), Some(true), Some(false)], q, |b, g| {
        emit_ps3(b, index, n, 20.0 * e, Some(g), succ, opts);
    });
    Ok(b.end())
}

/// Standalone `P_1` with registers `q` (three label qubits, `q0` first),
/// `index` and `succ`.
pub fn p1(params: &ModelParams, eps: f64) -> Result<(Circuit, ResourceReport)> {
    p1_with(params, eps, BuildOptions::default(), &CostModel::per_rotation())
}

pub fn p1_with(params: &ModelParams, eps: f64, opts: BuildOptions, cost: &CostModel) -> Result<(Circuit, ResourceReport)> {
    params.validate()?;
    check_eps(eps)?;
    if params.n_sites < 8 {
        return invalid("P_1 needs N >= 8");
    }
    let mut b = Builder::new();
    let q = b.data("q", 3);
    let index = b.data("index", params.b() as usize);
    let succ = b.data("succ", 1)[0];
    emit_p1(&mut b, &[q[0], q[1], q[2]], &index, params, eps, succ, opts)?;
    let c = b.finish();
    let r = count_resources(&c, cost);
    Ok((c, r))
}
