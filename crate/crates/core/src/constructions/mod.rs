//! Named builders for the matrix superalgebras, the `D(2,1;α)` family, the
//! `SL₂`-pairs on dual symmetric powers and the `10|12` pipeline over 𝔽₅.

mod brj;
mod catalog;
mod d21;
mod matrix_algebras;
mod sl2_family;

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Scalar};
use crate::hcpair::HcError;
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::modrep::{CoeffFamily, ModrepError};
use crate::superalg::{BasisElem, LieSuperalgebra, Parity, Sparse, SuperalgError};

pub use brj::{
    brj25, run_brj, sp4, sp4_adjoint, sp4_standard, BrjOptions, BrjOutput, CheckRecord, PipelineReport, StageRecord, BRJ_STAGES,
};
pub use catalog::{FamilySpec, FAMILY_NAMES};
pub use d21::{d21, d21_unchecked, D21Params};
pub use matrix_algebras::{
    gl, periplectic, periplectic_derived, pgl, pq, pq_pair, psl, psq, queer, sl, spo, OspForm,
};
pub use sl2_family::{
    adjoint_sl2, sl2, sl2_symn_candidate, sl2_symn_constants, sl2_symn_pair, sym_n_dual, sym_n_module, SL2FamilyConstants,
    SymnCandidate,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("the identity is not supertraceless in gl({m}|{n}) over characteristic {p}")]
    CenterNotInside { m: usize, n: usize, p: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bracket leaves the span of the basis: {0}")]
    NotClosed(String),
    #[error("pipeline stage {stage}: expected {expected}, got {got}")]
    PipelineAssertion { stage: String, expected: usize, got: usize },
    #[error("pipeline check failed at {stage}: {detail}")]
    PipelineCheck { stage: String, detail: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Superalg(#[from] SuperalgError),
    #[error(transparent)]
    Modrep(#[from] ModrepError),
    #[error(transparent)]
    Hc(#[from] HcError),
}

/// Coordinates with respect to a fixed linearly independent list of vectors.
pub(crate) struct Coordinatizer {
    span: Subspace,
    /// Inverse of the matrix whose rows are the basis coordinates in `span`.
    back: Matrix,
}

impl Coordinatizer {
    pub(crate) fn new(ctx: FieldCtx, ambient: usize, basis: &[Vec<Scalar>]) -> Result<Self, ConstructionError> {
        let span = Subspace::from_vectors(ctx, ambient, basis.to_vec())?;
        if span.dim() != basis.len() {
            return Err(ConstructionError::InvalidParameter("basis matrices are linearly dependent".into()));
        }
        let rows = basis.iter().map(|b| span.coordinates(b).map(|c| c.expect("in span"))).collect::<Result<Vec<_>, _>>()?;
        let c = Matrix::from_rows(ctx, basis.len(), rows)?;
        let back = c.inverse().expect("coordinates of a basis are invertible");
        Ok(Coordinatizer { span, back })
    }

    pub(crate) fn coords(&self, x: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        let Some(y) = self.span.coordinates(x)? else { return Ok(None) };
        // row vector y times back
        Ok(Some(self.back.transpose().mul_vec(&y)?))
    }
}

pub(crate) fn flatten(m: &Matrix) -> Vec<Scalar> {
    m.entries().to_vec()
}

pub(crate) fn to_sparse(ctx: FieldCtx, v: Vec<Scalar>) -> Sparse {
    v.into_iter().enumerate().filter(|(_, c)| !ctx.is_zero(c)).collect()
}

/// One basis element of a matrix superalgebra.
#[derive(Clone, Debug)]
pub(crate) struct SuperMatrix {
    pub label: String,
    pub parity: Parity,
    pub matrix: Matrix,
}

impl SuperMatrix {
    pub(crate) fn new(label: impl Into<String>, parity: Parity, matrix: Matrix) -> Self {
        SuperMatrix { label: label.into(), parity, matrix }
    }
}

/// `XY - (-1)^{|X||Y|} YX`.
pub(crate) fn supercommutator(x: &SuperMatrix, y: &SuperMatrix) -> Matrix {
    let xy = x.matrix.mul(&y.matrix).expect("square matrices of one size");
    let yx = y.matrix.mul(&x.matrix).expect("square matrices of one size");
    if x.parity == Parity::Odd && y.parity == Parity::Odd {
        xy.add(&yx).expect("same shape")
    } else {
        xy.sub(&yx).expect("same shape")
    }
}

/// Structure constants of the span of `elems` under the supercommutator.
pub(crate) fn matrix_superalgebra(
    ctx: FieldCtx,
    elems: &[SuperMatrix],
    meta: serde_json::Value,
    checked: bool,
) -> Result<LieSuperalgebra, ConstructionError> {
    let size = elems.first().map_or(0, |e| e.matrix.nrows());
    let flat: Vec<Vec<Scalar>> = elems.iter().map(|e| flatten(&e.matrix)).collect();
    let coord = Coordinatizer::new(ctx, size * size, &flat)?;
    let mut entries = Vec::new();
    for i in 0..elems.len() {
        for j in i..elems.len() {
            let b = supercommutator(&elems[i], &elems[j]);
            if b.is_zero() {
                continue;
            }
            let c = coord
                .coords(&flatten(&b))?
                .ok_or_else(|| ConstructionError::NotClosed(format!("[{}, {}]", elems[i].label, elems[j].label)))?;
            entries.push((i, j, to_sparse(ctx, c)));
        }
    }
    let basis = elems.iter().map(|e| BasisElem { label: e.label.clone(), parity: e.parity }).collect();
    Ok(if checked {
        LieSuperalgebra::new(ctx, basis, entries, meta)?
    } else {
        LieSuperalgebra::new_unchecked(ctx, basis, entries, meta)?
    })
}

/// `Y ↦ (I + tN) Y (I - tN)` on the span of `basis`, for `N² = 0`.
pub(crate) fn conjugation_family(
    ctx: FieldCtx,
    label: &str,
    n: &Matrix,
    basis: &[Matrix],
    coord: &Coordinatizer,
) -> Result<CoeffFamily, ConstructionError> {
    if !n.mul(n)?.is_zero() {
        return Err(ConstructionError::InvalidParameter(format!("{label}: generator is not square-zero")));
    }
    let d = basis.len();
    let mut op1 = Matrix::zeros(ctx, d, d);
    let mut op2 = Matrix::zeros(ctx, d, d);
    for (c, y) in basis.iter().enumerate() {
        let ny = n.mul(y)?;
        let yn = y.mul(n)?;
        let first = ny.sub(&yn)?;
        let second = ny.mul(n)?.neg();
        for (op, img) in [(&mut op1, first), (&mut op2, second)] {
            let v = coord
                .coords(&flatten(&img))?
                .ok_or_else(|| ConstructionError::NotClosed(format!("{label} conjugation")))?;
            for (r, x) in v.into_iter().enumerate() {
                op.set(r, c, x);
            }
        }
    }
    let mut ops = vec![Matrix::identity(ctx, d), op1, op2];
    while ops.len() > 1 && ops.last().is_some_and(|m| m.is_zero()) {
        ops.pop();
    }
    Ok(CoeffFamily::new(label, ops))
}

/// Adjoint families of a matrix Lie algebra given by square-zero generators.
pub(crate) fn adjoint_families(
    ctx: FieldCtx,
    basis: &[Matrix],
    generators: &[(String, Matrix)],
) -> Result<Vec<CoeffFamily>, ConstructionError> {
    let size = basis.first().map_or(0, |b| b.nrows());
    let coord = Coordinatizer::new(ctx, size * size, &basis.iter().map(flatten).collect::<Vec<_>>())?;
    generators.iter().map(|(l, n)| conjugation_family(ctx, l, n, basis, &coord)).collect()
}

pub(crate) fn arc(a: LieSuperalgebra) -> Arc<LieSuperalgebra> {
    Arc::new(a)
}

/// Block `diag(a, b)`.
pub(crate) fn block_diag(ctx: FieldCtx, a: &Matrix, b: &Matrix) -> Matrix {
    let (m, n) = (a.nrows(), b.nrows());
    let mut out = Matrix::zeros(ctx, m + n, m + n);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.set(m + i, m + j, b.get(i, j).clone());
        }
    }
    out
}

/// Block `[[0, b], [c, 0]]` with `b` of shape `m × n` and `c` of shape `n × m`.
pub(crate) fn block_off(ctx: FieldCtx, b: &Matrix, c: &Matrix) -> Matrix {
    let (m, n) = (b.nrows(), b.ncols());
    let mut out = Matrix::zeros(ctx, m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            out.set(i, m + j, b.get(i, j).clone());
            out.set(m + j, i, c.get(j, i).clone());
        }
    }
    out
}

pub(crate) fn rect_unit(ctx: FieldCtx, r: usize, c: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(ctx, r, c);
    m.set(i, j, ctx.one());
    m
}
