//! The `Sp₄` pipeline: `V`, `L(ω₂) = Λ²V / 𝕜`, `N = V ⊗ L(ω₂)`, the submodule
//! `M` generated by the highest weight vector, its socle `S`, `U = M/S`, and
//! the equivariant bracket `Sym²(U) → sp₄` solved from the Hom space.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use super::{adjoint_families, arc, matrix_superalgebra, ConstructionError, SuperMatrix};
use crate::field::{FieldCtx, Scalar};
use crate::hcpair::{assemble_pair, HCPair};
use crate::linalg::{Matrix, Subspace};
use crate::modrep::{hom_space, socle_via_homs, CoeffFamily, GModule, HomMode};
use crate::superalg::{LieSuperalgebra, Parity, SDim, SimplicityOptions, Sparse};

/// Expected stage dimensions over 𝔽₅.
pub const BRJ_STAGES: [(&str, usize); 9] = [
    ("V", 4),
    ("Lambda2(V)", 6),
    ("L(w2)", 5),
    ("N", 20),
    ("M", 16),
    ("S", 4),
    ("U", 12),
    ("Sym2(U)", 78),
    ("Hom", 1),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BrjOptions {
    pub p: u64,
    pub skip_simplicity: bool,
    pub seed: u64,
}

impl Default for BrjOptions {
    fn default() -> Self {
        BrjOptions { p: 5, skip_simplicity: false, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: String,
    pub expected: usize,
    pub got: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub p: u64,
    pub stages: Vec<StageRecord>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hom_algebra_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_dims: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobi_triples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cubic_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplicity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sas: Option<(bool, bool)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halted: Option<String>,
}

impl PipelineReport {
    fn new(p: u64) -> Self {
        PipelineReport {
            p,
            stages: Vec::new(),
            checks: Vec::new(),
            hom_algebra_dim: None,
            normalization: None,
            final_dims: None,
            jacobi_triples: None,
            cubic_holds: None,
            simplicity: None,
            sas: None,
            halted: None,
        }
    }

    pub fn stage_dims(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.got).collect()
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.stage == name)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check == name)
    }

    /// Every stage matched, every check passed, nothing halted, and the final
    /// verdicts (when computed) are positive.
    pub fn all_pass(&self) -> bool {
        self.halted.is_none()
            && self.stages.len() == BRJ_STAGES.len()
            && self.stages.iter().all(|s| s.ok)
            && self.checks.iter().all(|c| c.ok)
            && self.cubic_holds != Some(false)
            && self.simplicity.as_deref().is_none_or(|s| s == "GradedSimple")
            && self.sas.is_none_or(|(a, b)| a && b)
    }

    fn stage_record(&mut self, idx: usize, got: usize) -> bool {
        let (name, expected) = BRJ_STAGES[idx];
        let ok = got == expected;
        self.stages.push(StageRecord { stage: name.into(), expected, got, ok });
        ok
    }

    fn check_record(&mut self, name: &str, ok: bool, detail: Option<String>) -> bool {
        self.checks.push(CheckRecord { check: name.into(), ok, detail });
        ok
    }
}

#[derive(Clone, Debug)]
pub struct BrjOutput {
    pub report: PipelineReport,
    pub pair: Option<HCPair>,
}

const SP4_LABELS: [&str; 10] =
    ["x_2e1", "x_2e2", "x_e1-e2", "x_e1+e2", "h1", "h2", "x_-2e1", "x_-2e2", "x_-e1+e2", "x_-e1-e2"];
const SP4_WEIGHTS: [[i64; 2]; 10] = [[2, 0], [0, 2], [1, -1], [1, 1], [0, 0], [0, 0], [-2, 0], [0, -2], [-1, 1], [-1, -1]];
const V_LABELS: [&str; 4] = ["v_e1", "v_e2", "v_-e1", "v_-e2"];
const V_WEIGHTS: [[i64; 2]; 4] = [[1, 0], [0, 1], [-1, 0], [0, -1]];
const W_LABELS: [&str; 5] = ["w_e1+e2", "w_e1-e2", "w_0", "w_-e1+e2", "w_-e1-e2"];
const W_WEIGHTS: [[i64; 2]; 5] = [[1, 1], [1, -1], [0, 0], [-1, 1], [-1, -1]];

// (coefficient, v index, w index)
type TensorTerms = &'static [(i64, usize, usize)];

const Y_VECTORS: [TensorTerms; 4] = [
    &[(1, 0, 2), (1, 1, 1), (-1, 3, 0)],
    &[(-1, 1, 2), (-1, 0, 3), (1, 2, 0)],
    &[(-1, 3, 2), (-1, 0, 4), (1, 2, 1)],
    &[(1, 2, 2), (1, 1, 4), (-1, 3, 3)],
];

const U_VECTORS: [(&str, [i64; 2], TensorTerms); 12] = [
    ("u_2e1+e2", [2, 1], &[(1, 0, 0)]),
    ("u_2e1-e2", [2, -1], &[(1, 0, 1)]),
    ("u_e1+2e2", [1, 2], &[(1, 1, 0)]),
    ("u_e1-2e2", [1, -2], &[(1, 3, 1)]),
    ("u_-2e1+e2", [-2, 1], &[(1, 2, 3)]),
    ("u_-2e1-e2", [-2, -1], &[(1, 2, 4)]),
    ("u_-e1-2e2", [-1, -2], &[(1, 3, 4)]),
    ("u_-e1+2e2", [-1, 2], &[(1, 1, 3)]),
    ("u_e1", [1, 0], &[(1, 1, 1), (-2, 0, 2)]),
    ("u_e2", [0, 1], &[(1, 0, 3), (-2, 1, 2)]),
    ("u_-e2", [0, -1], &[(1, 0, 4), (-2, 3, 2)]),
    ("u_-e1", [-1, 0], &[(1, 1, 4), (-2, 2, 2)]),
];

fn mat4(ctx: FieldCtx, terms: &[(i64, usize, usize)]) -> Matrix {
    let mut m = Matrix::zeros(ctx, 4, 4);
    for &(c, i, j) in terms {
        m.set(i - 1, j - 1, ctx.from_i64(c));
    }
    m
}

/// `sp₄` matrices in the order of the root labels.
pub(crate) fn sp4_matrices(ctx: FieldCtx) -> Vec<Matrix> {
    vec![
        mat4(ctx, &[(1, 1, 3)]),
        mat4(ctx, &[(1, 2, 4)]),
        mat4(ctx, &[(1, 1, 2), (-1, 4, 3)]),
        mat4(ctx, &[(1, 1, 4), (1, 2, 3)]),
        mat4(ctx, &[(1, 1, 1), (-1, 3, 3)]),
        mat4(ctx, &[(1, 2, 2), (-1, 4, 4)]),
        mat4(ctx, &[(1, 3, 1)]),
        mat4(ctx, &[(1, 4, 2)]),
        mat4(ctx, &[(1, 2, 1), (-1, 3, 4)]),
        mat4(ctx, &[(1, 4, 1), (1, 3, 2)]),
    ]
}

/// Root subgroups of `±α₁ = ±(ε₁-ε₂)` and `±α₂ = ±2ε₂`, as indices into the
/// `sp₄` basis.
const ROOT_FAMILIES: [(&str, usize); 4] = [("X_a1", 2), ("X_-a1", 8), ("X_a2", 1), ("X_-a2", 7)];

fn weights(w: &[[i64; 2]]) -> Vec<Vec<i64>> {
    w.iter().map(|x| x.to_vec()).collect()
}

pub fn sp4(ctx: FieldCtx) -> Result<Arc<LieSuperalgebra>, ConstructionError> {
    let elems: Vec<SuperMatrix> =
        SP4_LABELS.iter().zip(sp4_matrices(ctx)).map(|(l, m)| SuperMatrix::new(*l, Parity::Even, m)).collect();
    Ok(arc(matrix_superalgebra(ctx, &elems, json!({"family": "sp4"}), true)?))
}

/// The standard module with `X_α(t) = I + t x_α`.
pub fn sp4_standard(ctx: FieldCtx, g: &Arc<LieSuperalgebra>) -> Result<GModule, ConstructionError> {
    let mats = sp4_matrices(ctx);
    let fams = ROOT_FAMILIES
        .iter()
        .map(|&(l, k)| CoeffFamily::new(l, vec![Matrix::identity(ctx, 4), mats[k].clone()]))
        .collect();
    let labels = V_LABELS.iter().map(|s| s.to_string()).collect();
    Ok(GModule::new(ctx, labels, Some(g.clone()), mats, fams)?.with_weights(weights(&V_WEIGHTS))?)
}

pub fn sp4_adjoint(ctx: FieldCtx, g: &Arc<LieSuperalgebra>) -> Result<GModule, ConstructionError> {
    let mats = sp4_matrices(ctx);
    let gens: Vec<(String, Matrix)> = ROOT_FAMILIES.iter().map(|&(l, k)| (l.to_string(), mats[k].clone())).collect();
    let fams = adjoint_families(ctx, &mats, &gens)?;
    let labels = SP4_LABELS.iter().map(|s| s.to_string()).collect();
    Ok(GModule::new(ctx, labels, Some(g.clone()), g.ad_matrices().to_vec(), fams)?.with_weights(weights(&SP4_WEIGHTS))?)
}

fn wedge(v: &GModule, i: usize, j: usize) -> Vec<Scalar> {
    let ctx = v.ctx();
    let mut out = vec![ctx.zero(); v.dim() * (v.dim() - 1) / 2];
    let (pos, s) = v.square_index(false, i, j).expect("distinct indices");
    out[pos] = ctx.from_i64(s);
    out
}

fn tensor_vec(ctx: FieldCtx, terms: &[(i64, usize, usize)]) -> Vec<Scalar> {
    let mut out = vec![ctx.zero(); 20];
    for &(c, a, b) in terms {
        out[a * 5 + b] = ctx.add(&out[a * 5 + b], &ctx.from_i64(c));
    }
    out
}

/// Vectors fixed by the Lie action and by every group element.
fn invariants(m: &GModule) -> Result<Subspace, ConstructionError> {
    let ctx = m.ctx();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for op in m.lie_action() {
        rows.extend(op.to_rows());
    }
    for f in m.families() {
        for k in 1..=f.degree() {
            if let Some(op) = f.op(k) {
                rows.extend(op.to_rows());
            }
        }
    }
    Ok(Matrix::from_rows(ctx, m.dim(), rows)?.kernel())
}

/// `L(ω₂)` as `Λ²V` modulo its invariant line, on the representatives
/// `v_{ε₁}∧v_{ε₂}, v_{ε₁}∧v_{-ε₂}, v_{ε₁}∧v_{-ε₁}, v_{-ε₁}∧v_{ε₂}, v_{-ε₁}∧v_{-ε₂}`.
fn l_omega2(v: &GModule, report: &mut PipelineReport) -> Result<GModule, ConstructionError> {
    let ctx = v.ctx();
    let l2 = v.lambda2()?;
    report.stage_record(1, l2.dim());
    let inv = invariants(&l2)?;
    let mut omega = wedge(v, 0, 2);
    for (x, y) in omega.iter_mut().zip(wedge(v, 1, 3)) {
        *x = ctx.add(x, &y);
    }
    let expected_line = Subspace::from_vectors(ctx, 6, vec![omega])?;
    let same = inv == expected_line;
    report.check_record("invariant line of Lambda2(V) is v_e1^v_-e1 + v_e2^v_-e2", same, (!same).then(|| format!("invariant dimension {}", inv.dim())));
    if inv.dim() != 1 {
        report.stage_record(2, 6 - inv.dim());
        return Err(ConstructionError::PipelineAssertion { stage: "L(w2)".into(), expected: 5, got: 6 - inv.dim() });
    }
    let reps = vec![wedge(v, 0, 1), wedge(v, 0, 3), wedge(v, 0, 2), wedge(v, 2, 1), wedge(v, 2, 3)];
    let labels = W_LABELS.iter().map(|s| s.to_string()).collect();
    let l = l2.subquotient(&Subspace::full(ctx, 6), &inv, reps, labels)?.with_weights(weights(&W_WEIGHTS))?;
    report.stage_record(2, l.dim());
    Ok(l)
}

/// Express each vector of `sub` (ambient coordinates) in the echelon basis of `w`.
fn to_sub_coords(w: &Subspace, vs: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, ConstructionError> {
    vs.iter()
        .map(|v| {
            w.coordinates(v)?.ok_or_else(|| ConstructionError::PipelineCheck {
                stage: "U".into(),
                detail: "representative outside M".into(),
            })
        })
        .collect()
}

fn from_sub_coords(ctx: FieldCtx, w: &Subspace, c: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![ctx.zero(); w.ambient()];
    for (row, x) in w.basis_rows().iter().zip(c) {
        for (o, r) in out.iter_mut().zip(row) {
            *o = ctx.add(o, &ctx.mul(x, r));
        }
    }
    out
}

/// Bracket table of `φ`, scaled so that the first nonzero coefficient in the
/// scan over pairs `i <= j` (then over `sp₄` coordinates) is 1.
fn normalized_entries(
    ctx: FieldCtx,
    u: &GModule,
    phi: &Matrix,
) -> Result<(Vec<(usize, usize, Sparse)>, String), ConstructionError> {
    let pairs = u.square_basis(true);
    let mut first = None;
    'scan: for (pos, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..phi.nrows() {
            if !ctx.is_zero(phi.get(k, pos)) {
                first = Some((i, j, k, phi.get(k, pos).clone()));
                break 'scan;
            }
        }
    }
    let Some((i0, j0, k0, c)) = first else {
        return Err(ConstructionError::PipelineCheck { stage: "Hom".into(), detail: "generator is zero".into() });
    };
    let scale = ctx.inv(&c)?;
    let mut out = Vec::new();
    for (pos, &(i, j)) in pairs.iter().enumerate() {
        let sp: Sparse = (0..phi.nrows())
            .filter(|&k| !ctx.is_zero(phi.get(k, pos)))
            .map(|k| (k, ctx.mul(phi.get(k, pos), &scale)))
            .collect();
        if !sp.is_empty() {
            out.push((i, j, sp));
        }
    }
    let note = format!("[{}, {}] has coefficient 1 on {}", u.labels()[i0], u.labels()[j0], SP4_LABELS[k0]);
    Ok((out, note))
}

fn intertwines(f: &Matrix, src: &GModule, dst: &GModule) -> Result<bool, ConstructionError> {
    for (a, b) in src.lie_action().iter().zip(dst.lie_action()) {
        if f.mul(a)? != b.mul(f)? {
            return Ok(false);
        }
    }
    for fa in src.families() {
        let Some(fb) = dst.family(&fa.label) else { continue };
        for k in 0..=fa.degree().max(fb.degree()) {
            let id_a = Matrix::zeros(src.ctx(), src.dim(), src.dim());
            let id_b = Matrix::zeros(dst.ctx(), dst.dim(), dst.dim());
            let a = fa.op(k).unwrap_or(&id_a);
            let b = fb.op(k).unwrap_or(&id_b);
            if f.mul(a)? != b.mul(f)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Runs every stage, recording dimensions and checks. Mismatched dimensions
/// do not stop the run unless a later stage cannot be formed; the halting
/// reason is then stored in the report.
pub fn run_brj(opts: BrjOptions) -> BrjOutput {
    let mut report = PipelineReport::new(opts.p);
    let pair = match pipeline(opts, &mut report) {
        Ok(p) => p,
        Err(e) => {
            report.halted = Some(e.to_string());
            None
        }
    };
    BrjOutput { report, pair }
}

fn pipeline(opts: BrjOptions, report: &mut PipelineReport) -> Result<Option<HCPair>, ConstructionError> {
    let ctx = FieldCtx::from_characteristic(opts.p)?;
    let g = sp4(ctx)?;
    let v = sp4_standard(ctx, &g)?;
    report.stage_record(0, v.dim());
    let l = l_omega2(&v, report)?;

    let n = v.tensor(&l)?;
    report.stage_record(3, n.dim());
    let m = n.submodule_generated(&[tensor_vec(ctx, &[(1, 0, 0)])])?;
    report.stage_record(4, m.dim());
    let m_mod = n.submodule(&m)?;

    let s_in_m = socle_via_homs(&m_mod, &[&v])?;
    let s_vecs: Vec<Vec<Scalar>> = s_in_m.basis_rows().iter().map(|c| from_sub_coords(ctx, &m, c)).collect();
    let s = Subspace::from_vectors(ctx, 20, s_vecs)?;
    let s_ok = report.stage_record(5, s.dim());
    let y_span = Subspace::from_vectors(ctx, 20, Y_VECTORS.iter().map(|t| tensor_vec(ctx, t)).collect())?;
    let y_eq = s == y_span;
    report.check_record("socle equals the span of the y-vectors", y_eq, (!y_eq).then(|| format!("socle dimension {}", s.dim())));
    let soc_n = socle_via_homs(&n, &[&v])?;
    let soc_ok = soc_n == s;
    report.check_record("socle of N equals socle of M", soc_ok, (!soc_ok).then(|| format!("socle of N has dimension {}", soc_n.dim())));

    let u = if s_ok {
        let reps: Vec<Vec<Scalar>> = U_VECTORS.iter().map(|(_, _, t)| tensor_vec(ctx, t)).collect();
        let inside = reps.iter().all(|r| m.contains(r).unwrap_or(false));
        report.check_record("u-vectors lie in M", inside, None);
        let labels = U_VECTORS.iter().map(|(l, _, _)| l.to_string()).collect();
        let ws = U_VECTORS.iter().map(|(_, w, _)| w.to_vec()).collect();
        n.subquotient(&m, &s, reps, labels)?.with_weights(ws)?
    } else {
        // generic quotient on the non-pivot basis vectors of the submodule
        let s_sub = Subspace::from_vectors(ctx, m.dim(), to_sub_coords(&m, s.basis_rows())?)?;
        m_mod.quotient_module(&s_sub)?
    };
    report.stage_record(6, u.dim());
    let back = hom_space(&u, &m_mod, HomMode::Group)?;
    report.check_record("Hom(U, M) = 0", back.dim == 0, (back.dim != 0).then(|| format!("dimension {}", back.dim)));

    let sym = u.sym2()?;
    report.stage_record(7, sym.dim());
    let adj = sp4_adjoint(ctx, &g)?;
    let hom = hom_space(&sym, &adj, HomMode::Group)?;
    let hom_ok = report.stage_record(8, hom.dim);
    report.hom_algebra_dim = Some(hom_space(&sym, &adj, HomMode::Algebra)?.dim);
    if !hom_ok {
        return Err(ConstructionError::PipelineAssertion { stage: "Hom".into(), expected: 1, got: hom.dim });
    }
    let phi = &hom.basis[0];
    report.check_record("generator intertwines every coefficient operator", intertwines(phi, &sym, &adj)?, None);

    let (entries, note) = normalized_entries(ctx, &u, phi)?;
    report.normalization = Some(note);
    let meta = json!({
        "family": "brj",
        "p": opts.p,
        "assumed": ["Sp_4 is generated by the root subgroups of the simple roots and the torus", "Sp_4 is almost-simple"],
    });
    let pair = assemble_pair(g.clone(), adj.families().to_vec(), u, &entries, meta)?;
    let cert = pair.certificate();
    report.check_record("pair equivariance in t", cert.equivariance_identities > 0, None);
    report.jacobi_triples = Some(cert.jacobi_triples);
    report.cubic_holds = Some(pair.total().validate_cubic_odd().holds);
    report.final_dims = Some(pair.total().dims().to_string());
    if pair.total().dims() != SDim::new(10, 12) {
        report.check_record("final dimensions 10|12", false, report.final_dims.clone());
    }
    if !opts.skip_simplicity {
        let verdict = pair.total().is_graded_simple(SimplicityOptions { seed: opts.seed, ..SimplicityOptions::default() });
        report.simplicity = Some(verdict.summary());
    }
    let sas = pair.check_sas_conditions()?;
    report.sas = Some((sas.cond1, sas.cond2));
    Ok(Some(pair))
}

/// The pipeline over 𝔽₅; any failed stage or check is an error.
pub fn brj25() -> Result<(LieSuperalgebra, HCPair, PipelineReport), ConstructionError> {
    let out = run_brj(BrjOptions::default());
    let report = out.report;
    if let Some(st) = report.stages.iter().find(|s| !s.ok) {
        return Err(ConstructionError::PipelineAssertion { stage: st.stage.clone(), expected: st.expected, got: st.got });
    }
    if let Some(c) = report.checks.iter().find(|c| !c.ok) {
        return Err(ConstructionError::PipelineCheck { stage: c.check.clone(), detail: c.detail.clone().unwrap_or_default() });
    }
    if let Some(h) = &report.halted {
        return Err(ConstructionError::PipelineCheck { stage: "run".into(), detail: h.clone() });
    }
    let pair = out.pair.expect("a run without halting yields a pair");
    Ok((pair.total().clone(), pair, report))
}
