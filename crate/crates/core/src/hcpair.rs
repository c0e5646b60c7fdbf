//! Harish-Chandra pairs: an even Lie algebra with group families acting on
//! itself and on an odd module, plus a symmetric equivariant bracket on the
//! odd module.
//!
//! Group-level hypotheses (smoothness, connectedness, almost-simplicity of
//! the even group) are carried as declared metadata and never computed.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, Scalar};
use crate::json::{sparse_from_json, sparse_to_json, SparseJson};
use crate::linalg::{largest_invariant_within, LinalgError, Matrix, Subspace};
use crate::modrep::{CoeffFamily, FamilyJson, GModule, ModrepError, ModuleJson};
use crate::superalg::{AlgebraJson, BasisElem, LieSuperalgebra, Parity, Sparse, SuperIdeal, SuperalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HcError {
    #[error("bracket is not symmetric on odd basis pair ({0}, {1})")]
    SymmetryViolation(usize, usize),
    #[error("bracket is not equivariant for family {family} at t^{power} on odd basis pair ({i}, {j})")]
    EquivarianceViolation { family: String, power: usize, i: usize, j: usize },
    #[error("[[v,v],v] != 0: component {label} has {polynomial}")]
    CubicViolation { label: String, polynomial: String },
    #[error("invalid subpair: {0}")]
    InvalidSubpair(String),
    #[error("subpair is not normal: {0}")]
    NotNormal(String),
    #[error("inconsistent pair data: {0}")]
    Input(String),
    #[error(transparent)]
    Superalg(#[from] SuperalgError),
    #[error(transparent)]
    Modrep(#[from] ModrepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Symmetric bilinear map `V x V -> g`, stored on all ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearMap {
    ctx: FieldCtx,
    dim_v: usize,
    dim_g: usize,
    table: Vec<Sparse>,
}

impl BilinearMap {
    pub fn zero(ctx: FieldCtx, dim_v: usize, dim_g: usize) -> Self {
        BilinearMap { ctx, dim_v, dim_g, table: vec![Vec::new(); dim_v * dim_v] }
    }

    /// Entries may be given for `i <= j` only or for both orders; both orders
    /// must then agree.
    pub fn from_entries(ctx: FieldCtx, dim_v: usize, dim_g: usize, entries: &[(usize, usize, Sparse)]) -> Result<Self, HcError> {
        let mut given: Vec<Option<Vec<Scalar>>> = vec![None; dim_v * dim_v];
        for (i, j, v) in entries {
            if *i >= dim_v || *j >= dim_v || v.iter().any(|(k, _)| *k >= dim_g) {
                return Err(HcError::Input(format!("bracket entry ({i}, {j}) out of range")));
            }
            let slot = given[i * dim_v + j].get_or_insert_with(|| vec![ctx.zero(); dim_g]);
            for (k, c) in v {
                slot[*k] = ctx.add(&slot[*k], c);
            }
        }
        let mut table = vec![Vec::new(); dim_v * dim_v];
        for i in 0..dim_v {
            for j in i..dim_v {
                let a = &given[i * dim_v + j];
                let b = &given[j * dim_v + i];
                let v = match (a, b) {
                    (Some(x), Some(y)) if x != y => return Err(HcError::SymmetryViolation(i, j)),
                    (Some(x), _) | (None, Some(x)) => x.clone(),
                    (None, None) => continue,
                };
                let sp: Sparse = v.into_iter().enumerate().filter(|(_, c)| !ctx.is_zero(c)).collect();
                table[i * dim_v + j] = sp.clone();
                table[j * dim_v + i] = sp;
            }
        }
        Ok(BilinearMap { ctx, dim_v, dim_g, table })
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn get(&self, i: usize, j: usize) -> &Sparse {
        &self.table[i * self.dim_v + j]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| v.is_empty())
    }

    /// `[v, w]` in `g` coordinates.
    pub fn eval(&self, v: &[Scalar], w: &[Scalar]) -> Vec<Scalar> {
        let ctx = self.ctx;
        let mut out = vec![ctx.zero(); self.dim_g];
        for (i, a) in v.iter().enumerate().filter(|(_, a)| !ctx.is_zero(a)) {
            for (j, b) in w.iter().enumerate().filter(|(_, b)| !ctx.is_zero(b)) {
                let s = ctx.mul(a, b);
                for (k, c) in self.get(i, j) {
                    out[*k] = ctx.add(&out[*k], &ctx.mul(&s, c));
                }
            }
        }
        out
    }

    pub fn entries_upper(&self) -> Vec<(usize, usize, Sparse)> {
        let mut out = Vec::new();
        for i in 0..self.dim_v {
            for j in i..self.dim_v {
                let v = self.get(i, j);
                if !v.is_empty() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }
}

/// What `assemble_pair` verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCertificate {
    pub symmetric: bool,
    pub equivariance_identities: usize,
    pub cubic: bool,
    pub jacobi_triples: usize,
}

#[derive(Clone, Debug)]
pub struct HCPair {
    even: Arc<LieSuperalgebra>,
    adjoint: GModule,
    odd: GModule,
    bracket: BilinearMap,
    total: LieSuperalgebra,
    meta: serde_json::Value,
    certificate: PairCertificate,
}

/// Validates the pair axioms and assembles `g ⊕ V`. Checks run in the order
/// symmetry, equivariance, cubic identity, full Jacobi.
pub fn assemble_pair(
    even: Arc<LieSuperalgebra>,
    adjoint_families: Vec<CoeffFamily>,
    odd: GModule,
    bracket_entries: &[(usize, usize, Sparse)],
    meta: serde_json::Value,
) -> Result<HCPair, HcError> {
    let ctx = even.ctx();
    if !even.odd_indices().is_empty() {
        return Err(HcError::Input("even part has odd basis elements".into()));
    }
    match odd.algebra() {
        Some(a) if **a == *even => {}
        _ => return Err(HcError::Input("odd module does not act through the even part".into())),
    }
    let g = even.dim();
    let d = odd.dim();
    let bracket = BilinearMap::from_entries(ctx, d, g, bracket_entries)?;
    let labels = even.basis().iter().map(|b| b.label.clone()).collect();
    let adjoint = GModule::new(ctx, labels, Some(even.clone()), even.ad_matrices().to_vec(), adjoint_families)?;

    let equivariance_identities = check_equivariance(&adjoint, &odd, &bracket)?;

    let mut basis: Vec<BasisElem> = even.basis().to_vec();
    basis.extend(odd.labels().iter().map(|l| BasisElem { label: l.clone(), parity: Parity::Odd }));
    let mut entries: Vec<(usize, usize, Sparse)> = Vec::new();
    for i in 0..g {
        for j in i..g {
            let b = even.bracket_basis(i, j);
            if !b.is_empty() {
                entries.push((i, j, b.clone()));
            }
        }
        for j in 0..d {
            let col: Sparse = (0..d)
                .filter_map(|r| {
                    let c = odd.lie_action()[i].get(r, j);
                    (!ctx.is_zero(c)).then(|| (g + r, c.clone()))
                })
                .collect();
            if !col.is_empty() {
                entries.push((i, g + j, col));
            }
        }
    }
    for (i, j, v) in bracket.entries_upper() {
        entries.push((g + i, g + j, v));
    }
    let total = LieSuperalgebra::new_unchecked(ctx, basis, entries, meta.clone())?;
    let cubic = total.validate_cubic_odd();
    if let Some(w) = cubic.witness {
        return Err(HcError::CubicViolation { label: w.label, polynomial: w.polynomial });
    }
    let jr = total.validate_jacobi();
    if let Some((i, j, k, residual)) = jr.first_violation {
        return Err(SuperalgError::JacobiViolation { i, j, k, residual }.into());
    }
    let certificate = PairCertificate { symmetric: true, equivariance_identities, cubic: true, jacobi_triples: jr.triples_checked };
    Ok(HCPair { even, adjoint, odd, bracket, total, meta, certificate })
}

/// `Ad_k([e_i, e_j]) = Σ_{a+b=k} [op_a e_i, op_b e_j]` for every family,
/// power and odd basis pair. Returns the number of identities checked.
fn check_equivariance(adjoint: &GModule, odd: &GModule, bracket: &BilinearMap) -> Result<usize, HcError> {
    let ctx = odd.ctx();
    let d = odd.dim();
    let g = adjoint.dim();
    let mut labels: Vec<String> = odd.families().iter().map(|f| f.label.clone()).collect();
    for f in adjoint.families() {
        if !labels.contains(&f.label) {
            labels.push(f.label.clone());
        }
    }
    let mut count = 0;
    for label in labels {
        let vo: Vec<Matrix> = odd.family(&label).map_or_else(|| vec![Matrix::identity(ctx, d)], |f| f.ops.clone());
        let ad: Vec<Matrix> = adjoint.family(&label).map_or_else(|| vec![Matrix::identity(ctx, g)], |f| f.ops.clone());
        let top = (ad.len() - 1).max(2 * (vo.len() - 1));
        let cols: Vec<Vec<Vec<Scalar>>> = vo.iter().map(|m| (0..d).map(|c| m.column(c)).collect()).collect();
        for i in 0..d {
            for j in i..d {
                let mut bij = vec![ctx.zero(); g];
                for (k, c) in bracket.get(i, j) {
                    bij[*k] = c.clone();
                }
                for k in 0..=top {
                    let lhs = match ad.get(k) {
                        Some(m) => m.mul_vec(&bij)?,
                        None => vec![ctx.zero(); g],
                    };
                    let mut rhs = vec![ctx.zero(); g];
                    for a in 0..=k {
                        let (Some(x), Some(y)) = (cols.get(a), cols.get(k - a)) else { continue };
                        let b = bracket.eval(&x[i], &y[j]);
                        for (r, v) in rhs.iter_mut().zip(b) {
                            *r = ctx.add(r, &v);
                        }
                    }
                    count += 1;
                    if lhs != rhs {
                        return Err(HcError::EquivarianceViolation { family: label.clone(), power: k, i, j });
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Module-level SAS conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SasReport {
    /// `(G-1)V = V`.
    pub cond1: bool,
    /// No nonzero submodule of `V` is annihilated by the bracket.
    pub cond2: bool,
    pub defect: Subspace,
    pub annihilator: Subspace,
    pub annihilated_submodule: Subspace,
}

/// Selects a subpair: `h_lie` in even coordinates, the families generating
/// `H`, and `w` in odd-module coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubpairSpec {
    pub h_lie: Subspace,
    pub h_generators: Vec<String>,
    pub w: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityReport {
    /// `h_lie` is an ideal stable under every adjoint family.
    pub c1: bool,
    /// `w` is invariant under every operator of the pair.
    pub c2: bool,
    /// The generators of `H` and `h_lie` act trivially on `V / w`.
    pub c3: bool,
    /// `[V, w] ⊆ h_lie`.
    pub c4: bool,
    pub notes: Vec<String>,
}

impl NormalityReport {
    pub fn all_pass(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4
    }
}

impl HCPair {
    pub fn ctx(&self) -> FieldCtx {
        self.even.ctx()
    }

    pub fn even(&self) -> &Arc<LieSuperalgebra> {
        &self.even
    }

    pub fn adjoint(&self) -> &GModule {
        &self.adjoint
    }

    pub fn odd(&self) -> &GModule {
        &self.odd
    }

    pub fn bracket(&self) -> &BilinearMap {
        &self.bracket
    }

    /// The assembled superalgebra `g ⊕ V`.
    pub fn total(&self) -> &LieSuperalgebra {
        &self.total
    }

    pub fn meta(&self) -> &serde_json::Value {
        &self.meta
    }

    pub fn certificate(&self) -> &PairCertificate {
        &self.certificate
    }

    pub fn is_split(&self) -> bool {
        self.bracket.is_zero()
    }

    /// `{w : [v, w] = 0 for all v}`.
    pub fn bracket_annihilator(&self) -> Subspace {
        let ctx = self.ctx();
        let d = self.odd.dim();
        let g = self.even.dim();
        let mut rows = Vec::new();
        for i in 0..d {
            for k in 0..g {
                let row: Vec<Scalar> = (0..d)
                    .map(|j| self.bracket.get(i, j).iter().find(|(x, _)| *x == k).map_or_else(|| ctx.zero(), |(_, c)| c.clone()))
                    .collect();
                if row.iter().any(|x| !ctx.is_zero(x)) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return Subspace::full(ctx, d);
        }
        Matrix::from_rows(ctx, d, rows).expect("rows of length d").kernel()
    }

    pub fn check_sas_conditions(&self) -> Result<SasReport, HcError> {
        let defect = self.odd.trivial_quotient_defect()?;
        let annihilator = self.bracket_annihilator();
        let ops: Vec<Matrix> = self.odd.all_ops().into_iter().map(|(_, m)| m.clone()).collect();
        let annihilated_submodule = largest_invariant_within(&annihilator, &ops)?;
        Ok(SasReport {
            cond1: defect.is_full(),
            cond2: annihilated_submodule.is_zero(),
            defect,
            annihilator,
            annihilated_submodule,
        })
    }

    fn lie_combination(&self, x: &[Scalar]) -> Matrix {
        let ctx = self.ctx();
        let d = self.odd.dim();
        let mut m = Matrix::zeros(ctx, d, d);
        for (c, a) in x.iter().zip(self.odd.lie_action()) {
            if !ctx.is_zero(c) {
                m = m.add(&a.scale(c)).expect("square of size d");
            }
        }
        m
    }

    pub fn check_normality(&self, s: &SubpairSpec) -> Result<NormalityReport, HcError> {
        let ctx = self.ctx();
        let g = self.even.dim();
        let d = self.odd.dim();
        if s.h_lie.ambient() != g || s.w.ambient() != d {
            return Err(HcError::InvalidSubpair("subspace dimensions do not match the pair".into()));
        }
        for l in &s.h_generators {
            if self.odd.family(l).is_none() && self.adjoint.family(l).is_none() {
                return Err(HcError::InvalidSubpair(format!("unknown family {l}")));
            }
        }
        // h_lie must be a subalgebra and w an H-submodule
        let hb = s.h_lie.basis_rows();
        for x in hb {
            for y in hb {
                if !s.h_lie.contains(&self.even.bracket(x, y)?)? {
                    return Err(HcError::InvalidSubpair("h_lie is not a subalgebra".into()));
                }
            }
            if !s.w.is_invariant(&self.lie_combination(x))? {
                return Err(HcError::InvalidSubpair("w is not stable under h_lie".into()));
            }
        }
        for l in &s.h_generators {
            if let Some(f) = self.odd.family(l) {
                for op in &f.ops[1..] {
                    if !s.w.is_invariant(op)? {
                        return Err(HcError::InvalidSubpair(format!("w is not stable under {l}")));
                    }
                }
            }
        }
        let mut notes = Vec::new();

        let mut c1 = true;
        'ideal: for x in hb {
            for i in 0..g {
                if !s.h_lie.contains(&self.even.ad_apply(i, x))? {
                    c1 = false;
                    notes.push(format!("[{}, h_lie] leaves h_lie", self.even.label(i)));
                    break 'ideal;
                }
            }
        }
        if c1 {
            for (name, op) in self.adjoint.group_ops() {
                if !s.h_lie.is_invariant(op)? {
                    c1 = false;
                    notes.push(format!("h_lie not stable under {name}"));
                    break;
                }
            }
        }
        if c1 {
            notes.push("normality of H in G is assumed beyond the Lie-algebra level".into());
        }

        let mut c2 = true;
        for (name, op) in self.odd.all_ops() {
            if !s.w.is_invariant(op)? {
                c2 = false;
                notes.push(format!("w not stable under {name}"));
                break;
            }
        }

        let mut c3 = true;
        let all_v = Subspace::full(ctx, d);
        let mut acting: Vec<(String, Matrix)> = Vec::new();
        for l in &s.h_generators {
            if let Some(f) = self.odd.family(l) {
                for (k, op) in f.ops.iter().enumerate().skip(1) {
                    acting.push((format!("{l}[{k}]"), op.clone()));
                }
            }
        }
        for (k, x) in hb.iter().enumerate() {
            acting.push((format!("h_lie basis {k}"), self.lie_combination(x)));
        }
        for (name, op) in &acting {
            if !all_v.image(op)?.leq(&s.w)? {
                c3 = false;
                notes.push(format!("{name} acts nontrivially on V/w"));
                break;
            }
        }

        let mut c4 = true;
        'br: for i in 0..d {
            for wv in s.w.basis_rows() {
                let mut e = vec![ctx.zero(); d];
                e[i] = ctx.one();
                if !s.h_lie.contains(&self.bracket.eval(&e, wv))? {
                    c4 = false;
                    notes.push(format!("[{}, w] leaves h_lie", self.odd.labels()[i]));
                    break 'br;
                }
            }
        }
        Ok(NormalityReport { c1, c2, c3, c4, notes })
    }

    /// `(G/H, V/w)`; requires the normality report to pass.
    pub fn quotient_pair(&self, s: &SubpairSpec) -> Result<HCPair, HcError> {
        let report = self.check_normality(s)?;
        if !report.all_pass() {
            return Err(HcError::NotNormal(report.notes.join("; ")));
        }
        let ctx = self.ctx();
        let ideal = SuperIdeal { even: s.h_lie.clone(), odd: Subspace::zero(ctx, 0) };
        let q = self.even.quotient(&ideal)?;
        let even_q = Arc::new(q.algebra.clone().with_meta(serde_json::json!({ "quotient_of": self.even.meta() })));
        let adj_q = self.adjoint.quotient_module(&s.h_lie)?;
        let odd_q = self.odd.quotient_module(&s.w)?;
        let lie: Vec<Matrix> = q.kept.iter().map(|&k| odd_q.lie_action()[k].clone()).collect();
        let odd_new = GModule::new(ctx, odd_q.labels().to_vec(), Some(even_q.clone()), lie, odd_q.families().to_vec())?;
        let kept_odd = s.w.non_pivots();
        let mut entries = Vec::new();
        for (a, &i) in kept_odd.iter().enumerate() {
            for (b, &j) in kept_odd.iter().enumerate().skip(a) {
                let mut v = vec![ctx.zero(); self.even.dim()];
                for (k, c) in self.bracket.get(i, j) {
                    v[*k] = c.clone();
                }
                let p = q.project(&v)?;
                let sp: Sparse = p.into_iter().enumerate().filter(|(_, c)| !ctx.is_zero(c)).collect();
                if !sp.is_empty() {
                    entries.push((a, b, sp));
                }
            }
        }
        let meta = serde_json::json!({ "quotient_of": self.meta });
        assemble_pair(even_q, adj_q.families().to_vec(), odd_new, &entries, meta)
    }

    /// The subpair spec of the whole pair.
    pub fn whole_subpair(&self) -> SubpairSpec {
        let ctx = self.ctx();
        SubpairSpec {
            h_lie: Subspace::full(ctx, self.even.dim()),
            h_generators: self.adjoint.families().iter().map(|f| f.label.clone()).collect(),
            w: Subspace::full(ctx, self.odd.dim()),
        }
    }

    pub fn zero_subpair(&self) -> SubpairSpec {
        let ctx = self.ctx();
        SubpairSpec { h_lie: Subspace::zero(ctx, self.even.dim()), h_generators: Vec::new(), w: Subspace::zero(ctx, self.odd.dim()) }
    }

    pub fn to_json(&self) -> PairJson {
        let mut odd_action = self.odd.to_json();
        odd_action.algebra = None;
        PairJson {
            algebra: self.total.to_json(),
            odd_action,
            odd_bracket: self.bracket.entries_upper().iter().map(|(i, j, v)| (*i, *j, sparse_to_json(v))).collect(),
            even_families: self.adjoint.to_json().families,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    /// Rebuilds and re-validates; the stored total algebra must agree with
    /// the reassembled one.
    pub fn from_json(j: &PairJson) -> Result<HCPair, HcError> {
        let ctx = j.algebra.field.to_ctx().map_err(SuperalgError::from)?;
        let (basis, entries) = j.algebra.parse_parts(ctx)?;
        let even_pos: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].parity == Parity::Even).collect();
        if even_pos.iter().enumerate().any(|(k, &i)| k != i) {
            return Err(HcError::Input("even basis elements must come first".into()));
        }
        let g = even_pos.len();
        let even_entries: Vec<(usize, usize, Sparse)> = entries.iter().filter(|(i, j, _)| *i < g && *j < g).cloned().collect();
        let even = Arc::new(LieSuperalgebra::new(ctx, basis[..g].to_vec(), even_entries, j.algebra.meta.clone())?);
        let odd = GModule::from_json_with_algebra(&j.odd_action, ctx, Some(even.clone()))?;
        let br = j
            .odd_bracket
            .iter()
            .map(|(a, b, v)| Ok((*a, *b, sparse_from_json(ctx, v)?)))
            .collect::<Result<Vec<_>, crate::field::FieldError>>()
            .map_err(SuperalgError::from)?;
        let fam_json = ModuleJson {
            field: j.algebra.field.clone(),
            dim: g,
            labels: basis[..g].iter().map(|b| b.label.clone()).collect(),
            weights: None,
            algebra: None,
            lie: Vec::new(),
            families: j.even_families.clone(),
        };
        let adj = GModule::from_json_with_algebra(&fam_json, ctx, None)?;
        let pair = assemble_pair(even, adj.families().to_vec(), odd, &br, j.algebra.meta.clone())?;
        let stored = LieSuperalgebra::new_unchecked(ctx, basis, entries, serde_json::Value::Null)?;
        if stored != pair.total {
            return Err(HcError::Input("stored bracket table disagrees with the assembled pair".into()));
        }
        Ok(pair)
    }

    pub fn from_json_str(s: &str) -> Result<HCPair, HcError> {
        let j: PairJson = serde_json::from_str(s).map_err(|e| HcError::Input(e.to_string()))?;
        Self::from_json(&j)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PairJson {
    #[serde(flatten)]
    pub algebra: AlgebraJson,
    pub odd_action: ModuleJson,
    pub odd_bracket: Vec<(usize, usize, SparseJson)>,
    #[serde(default)]
    pub even_families: Vec<FamilyJson>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2(ctx: FieldCtx) -> Arc<LieSuperalgebra> {
        let basis = vec![BasisElem::even("E12"), BasisElem::even("H"), BasisElem::even("E21")];
        let e = vec![
            (0, 2, vec![(1, ctx.one())]),
            (1, 0, vec![(0, ctx.from_i64(2))]),
            (1, 2, vec![(2, ctx.from_i64(-2))]),
        ];
        Arc::new(LieSuperalgebra::new(ctx, basis, e, serde_json::Value::Null).unwrap())
    }

    #[test]
    fn split_trivial_pair() {
        let ctx = FieldCtx::prime(5).unwrap();
        let g = sl2(ctx);
        let v = GModule::trivial(ctx, 1, Some(g.clone()));
        let p = assemble_pair(g, Vec::new(), v, &[], serde_json::Value::Null).unwrap();
        assert!(p.is_split());
        let s = p.check_sas_conditions().unwrap();
        assert_eq!((s.cond1, s.cond2), (false, false));
        assert!(p.check_normality(&p.whole_subpair()).unwrap().all_pass());
        assert!(p.check_normality(&p.zero_subpair()).unwrap().all_pass());
        let z = p.quotient_pair(&p.whole_subpair()).unwrap();
        assert_eq!(z.total().dim(), 0);
        let same = p.quotient_pair(&p.zero_subpair()).unwrap();
        assert_eq!(same.total(), p.total());
    }

    #[test]
    fn asymmetric_bracket_rejected() {
        let ctx = FieldCtx::prime(5).unwrap();
        let g = sl2(ctx);
        let v = GModule::trivial(ctx, 2, Some(g.clone()));
        let e = vec![(0, 1, vec![(1, ctx.one())]), (1, 0, vec![(0, ctx.one())])];
        assert_eq!(assemble_pair(g, Vec::new(), v, &e, serde_json::Value::Null).unwrap_err(), HcError::SymmetryViolation(0, 1));
    }

    #[test]
    fn json_round_trip() {
        let ctx = FieldCtx::prime(3).unwrap();
        let g = sl2(ctx);
        let v = GModule::trivial(ctx, 2, Some(g.clone()));
        let p = assemble_pair(g, Vec::new(), v, &[], serde_json::json!({"name": "split"})).unwrap();
        let back = HCPair::from_json_str(&p.to_json_string()).unwrap();
        assert_eq!(back.total(), p.total());
    }
}
