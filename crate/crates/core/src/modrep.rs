//! Finite-dimensional modules carrying a Lie-algebra action and a group
//! action given by the coefficient operators of one-parameter subgroups.
//!
//! A family `X(t) = Σ t^i op_i` stands for a one-parameter subgroup. Closure
//! or equivariance under every `op_i` is the same as under `X(t)` for all `t`
//! in the algebraic closure, so group-level questions reduce to finitely many
//! linear conditions.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Scalar};
use crate::json::{matrix_from_json, matrix_to_json, FieldJson};
use crate::linalg::{invariant_closure, LinalgError, Matrix, Subspace};
use crate::superalg::{AlgebraJson, LieSuperalgebra, SuperalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModrepError {
    #[error("subspace is not invariant under {0}")]
    NotInvariant(String),
    #[error("action fails the bracket relation on basis pair ({0}, {1})")]
    NotARepresentation(usize, usize),
    #[error("family {label}: {reason}")]
    BadFamily { label: String, reason: String },
    #[error("modules act through different algebras")]
    AlgebraMismatch,
    #[error("invalid module data: {0}")]
    Input(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Superalg(#[from] SuperalgError),
}

/// Coefficients of `X(t) = Σ t^i ops[i]`; `ops[0]` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffFamily {
    pub label: String,
    pub ops: Vec<Matrix>,
}

impl CoeffFamily {
    pub fn new(label: impl Into<String>, ops: Vec<Matrix>) -> Self {
        CoeffFamily { label: label.into(), ops }
    }

    /// `Σ t^k x^k / k!` for nilpotent `x`; needs `x^k = 0` for `k >= p`.
    pub fn exp_nilpotent(label: impl Into<String>, x: &Matrix) -> Result<Self, ModrepError> {
        let label = label.into();
        let ctx = x.ctx();
        let n = x.nrows();
        let mut ops = vec![Matrix::identity(ctx, n)];
        let mut pow = x.clone();
        let mut k = 1i64;
        while !pow.is_zero() {
            if k > n as i64 {
                return Err(ModrepError::BadFamily { label, reason: "not nilpotent".into() });
            }
            let fact = (1..=k).fold(ctx.one(), |acc, i| ctx.mul(&acc, &ctx.from_i64(i)));
            let inv = ctx.inv(&fact).map_err(|_| ModrepError::BadFamily {
                label: label.clone(),
                reason: format!("x^{k}/{k}! needs divided powers in this characteristic"),
            })?;
            ops.push(pow.scale(&inv));
            pow = pow.mul(x)?;
            k += 1;
        }
        Ok(CoeffFamily { label, ops })
    }

    pub fn degree(&self) -> usize {
        self.ops.len().saturating_sub(1)
    }

    pub fn op(&self, i: usize) -> Option<&Matrix> {
        self.ops.get(i)
    }

    /// Checks `op_0 = I` and `op_i op_j = C(i+j, i) op_{i+j}`, which is
    /// `X(t)X(s) = X(t+s)` read coefficientwise in `t` and `s`.
    pub fn check_group_law(&self) -> Result<(), ModrepError> {
        let bad = |reason: String| ModrepError::BadFamily { label: self.label.clone(), reason };
        let Some(first) = self.ops.first() else {
            return Err(bad("no operators".into()));
        };
        let ctx = first.ctx();
        let n = first.nrows();
        if *first != Matrix::identity(ctx, n) {
            return Err(bad("order-0 operator is not the identity".into()));
        }
        let d = self.degree();
        let zero = Matrix::zeros(ctx, n, n);
        for i in 1..=d {
            for j in i..=d {
                let lhs = self.ops[i].mul(&self.ops[j])?;
                let rhs = match self.ops.get(i + j) {
                    Some(m) => m.scale(&ctx.binomial((i + j) as i64, i as i64)),
                    None => zero.clone(),
                };
                if lhs != rhs {
                    return Err(bad(format!("X(t)X(s) != X(t+s) at t^{i} s^{j}")));
                }
            }
        }
        Ok(())
    }
}

/// A module over an even Lie algebra, with optional group families.
#[derive(Clone, Debug)]
pub struct GModule {
    ctx: FieldCtx,
    dim: usize,
    labels: Vec<String>,
    weights: Option<Vec<Vec<i64>>>,
    algebra: Option<Arc<LieSuperalgebra>>,
    lie: Vec<Matrix>,
    families: Vec<CoeffFamily>,
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx
            && self.dim == other.dim
            && self.lie == other.lie
            && self.families == other.families
            && match (&self.algebra, &other.algebra) {
                (Some(a), Some(b)) => a == b,
                (None, None) => true,
                _ => false,
            }
    }
}

/// Which generators define equivariance in [`hom_space`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMode {
    Algebra,
    Group,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub dim: usize,
    /// Intertwiners `F` with `F: m1 -> m2`, as `dim(m2) x dim(m1)` matrices.
    pub basis: Vec<Matrix>,
}

fn same_algebra(a: &Option<Arc<LieSuperalgebra>>, b: &Option<Arc<LieSuperalgebra>>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => Arc::ptr_eq(x, y) || x == y,
        (None, None) => true,
        _ => false,
    }
}

impl GModule {
    /// Validates shapes, the representation property of the Lie action and
    /// the group law of every family.
    pub fn new(
        ctx: FieldCtx,
        labels: Vec<String>,
        algebra: Option<Arc<LieSuperalgebra>>,
        lie: Vec<Matrix>,
        families: Vec<CoeffFamily>,
    ) -> Result<Self, ModrepError> {
        let m = Self::new_unchecked(ctx, labels, algebra, lie, families)?;
        m.validate()?;
        Ok(m)
    }

    fn new_unchecked(
        ctx: FieldCtx,
        labels: Vec<String>,
        algebra: Option<Arc<LieSuperalgebra>>,
        lie: Vec<Matrix>,
        families: Vec<CoeffFamily>,
    ) -> Result<Self, ModrepError> {
        let dim = labels.len();
        let alg_dim = algebra.as_ref().map_or(0, |a| a.dim());
        if lie.len() != alg_dim {
            return Err(ModrepError::Input(format!("{} action matrices for an algebra of dimension {alg_dim}", lie.len())));
        }
        if let Some(a) = &algebra {
            if !a.odd_indices().is_empty() {
                return Err(ModrepError::Input("acting algebra must be purely even".into()));
            }
        }
        for m in lie.iter().chain(families.iter().flat_map(|f| f.ops.iter())) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(LinalgError::DimensionMismatch { expected: dim, got: m.nrows().max(m.ncols()) }.into());
            }
            if m.ctx() != ctx {
                return Err(FieldError::ContextMismatch.into());
            }
        }
        Ok(GModule { ctx, dim, labels, weights: None, algebra, lie, families })
    }

    fn validate(&self) -> Result<(), ModrepError> {
        if let Some(a) = &self.algebra {
            let ctx = self.ctx;
            let n = a.dim();
            for i in 0..n {
                for j in i + 1..n {
                    let lhs = self.lie[i].mul(&self.lie[j])?.sub(&self.lie[j].mul(&self.lie[i])?)?;
                    let mut rhs = Matrix::zeros(ctx, self.dim, self.dim);
                    for (k, c) in a.bracket_basis(i, j) {
                        rhs = rhs.add(&self.lie[*k].scale(c))?;
                    }
                    if lhs != rhs {
                        return Err(ModrepError::NotARepresentation(i, j));
                    }
                }
            }
        }
        let mut seen = BTreeSet::new();
        for f in &self.families {
            if !seen.insert(f.label.clone()) {
                return Err(ModrepError::BadFamily { label: f.label.clone(), reason: "duplicate label".into() });
            }
            f.check_group_law()?;
        }
        Ok(())
    }

    pub fn with_weights(mut self, weights: Vec<Vec<i64>>) -> Result<Self, ModrepError> {
        if weights.len() != self.dim {
            return Err(ModrepError::Input(format!("{} weights for dimension {}", weights.len(), self.dim)));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, ModrepError> {
        if labels.len() != self.dim {
            return Err(ModrepError::Input(format!("{} labels for dimension {}", labels.len(), self.dim)));
        }
        self.labels = labels;
        Ok(self)
    }

    /// The `d`-dimensional trivial module.
    pub fn trivial(ctx: FieldCtx, d: usize, algebra: Option<Arc<LieSuperalgebra>>) -> Self {
        let n = algebra.as_ref().map_or(0, |a| a.dim());
        let labels = (0..d).map(|i| format!("t{i}")).collect();
        GModule { ctx, dim: d, labels, weights: None, algebra, lie: vec![Matrix::zeros(ctx, d, d); n], families: Vec::new() }
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn weights(&self) -> Option<&[Vec<i64>]> {
        self.weights.as_deref()
    }

    pub fn algebra(&self) -> Option<&Arc<LieSuperalgebra>> {
        self.algebra.as_ref()
    }

    pub fn lie_action(&self) -> &[Matrix] {
        &self.lie
    }

    pub fn families(&self) -> &[CoeffFamily] {
        &self.families
    }

    pub fn family(&self, label: &str) -> Option<&CoeffFamily> {
        self.families.iter().find(|f| f.label == label)
    }

    /// All coefficient operators of positive order, labelled `label[i]`.
    pub fn group_ops(&self) -> Vec<(String, &Matrix)> {
        self.families
            .iter()
            .flat_map(|f| f.ops.iter().enumerate().skip(1).map(move |(i, m)| (format!("{}[{i}]", f.label), m)))
            .collect()
    }

    /// Lie matrices followed by the positive-order group operators.
    pub fn all_ops(&self) -> Vec<(String, &Matrix)> {
        let mut out: Vec<(String, &Matrix)> = match &self.algebra {
            Some(a) => self.lie.iter().enumerate().map(|(i, m)| (a.label(i).to_string(), m)).collect(),
            None => Vec::new(),
        };
        out.extend(self.group_ops());
        out
    }

    fn family_ops_or_identity(&self, label: &str) -> Vec<Matrix> {
        match self.family(label) {
            Some(f) => f.ops.clone(),
            None => vec![Matrix::identity(self.ctx, self.dim)],
        }
    }

    fn family_labels(a: &GModule, b: &GModule) -> Vec<String> {
        let mut labels: Vec<String> = a.families.iter().map(|f| f.label.clone()).collect();
        for f in &b.families {
            if !labels.contains(&f.label) {
                labels.push(f.label.clone());
            }
        }
        labels
    }

    /// Every coefficient operator of family `X_alpha` sends weight `λ` to
    /// `λ + iα`.
    pub fn weight_compatible(&self, label: &str, alpha: &[i64]) -> bool {
        let (Some(w), Some(f)) = (&self.weights, self.family(label)) else {
            return false;
        };
        for (i, op) in f.ops.iter().enumerate() {
            for c in 0..self.dim {
                for r in 0..self.dim {
                    if self.ctx.is_zero(op.get(r, c)) {
                        continue;
                    }
                    let target: Vec<i64> = w[c].iter().zip(alpha).map(|(x, a)| x + i as i64 * a).collect();
                    if w[r] != target {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<GModule, ModrepError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(ModrepError::AlgebraMismatch);
        }
        let ctx = self.ctx;
        let d = self.dim + other.dim;
        let block = |a: &Matrix, b: &Matrix| {
            let mut m = Matrix::zeros(ctx, d, d);
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    m.set(self.dim + i, self.dim + j, b.get(i, j).clone());
                }
            }
            m
        };
        let lie = self.lie.iter().zip(&other.lie).map(|(a, b)| block(a, b)).collect();
        let mut families = Vec::new();
        for label in Self::family_labels(self, other) {
            let a = self.family_ops_or_identity(&label);
            let b = other.family_ops_or_identity(&label);
            let deg = a.len().max(b.len());
            let za = Matrix::zeros(ctx, self.dim, self.dim);
            let zb = Matrix::zeros(ctx, other.dim, other.dim);
            let ops = (0..deg).map(|k| block(a.get(k).unwrap_or(&za), b.get(k).unwrap_or(&zb))).collect();
            families.push(CoeffFamily::new(label, ops));
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut m = GModule::new(ctx, labels, self.algebra.clone(), lie, families)?;
        if let (Some(a), Some(b)) = (&self.weights, &other.weights) {
            m.weights = Some(a.iter().chain(b).cloned().collect());
        }
        Ok(m)
    }

    /// Contragredient module: `x ↦ -xᵀ`, `op_k ↦ (-1)^k op_kᵀ`.
    pub fn dual(&self) -> Result<GModule, ModrepError> {
        let lie = self.lie.iter().map(|m| m.transpose().neg()).collect();
        let families = self
            .families
            .iter()
            .map(|f| {
                let ops = f.ops.iter().enumerate().map(|(k, m)| if k % 2 == 0 { m.transpose() } else { m.transpose().neg() }).collect();
                CoeffFamily::new(f.label.clone(), ops)
            })
            .collect();
        let labels = self.labels.iter().map(|l| dual_label(l)).collect();
        let mut m = GModule::new(self.ctx, labels, self.algebra.clone(), lie, families)?;
        m.weights = self.weights.as_ref().map(|w| w.iter().map(|v| v.iter().map(|x| -x).collect()).collect());
        Ok(m)
    }

    /// `self ⊗ other` with basis `e_i ⊗ f_j` in row-major order.
    pub fn tensor(&self, other: &GModule) -> Result<GModule, ModrepError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(ModrepError::AlgebraMismatch);
        }
        let ctx = self.ctx;
        let ia = Matrix::identity(ctx, self.dim);
        let ib = Matrix::identity(ctx, other.dim);
        let lie = self
            .lie
            .iter()
            .zip(&other.lie)
            .map(|(a, b)| a.kron(&ib).add(&ia.kron(b)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut families = Vec::new();
        for label in Self::family_labels(self, other) {
            let a = self.family_ops_or_identity(&label);
            let b = other.family_ops_or_identity(&label);
            let deg = a.len() + b.len() - 2;
            let mut ops = Vec::with_capacity(deg + 1);
            for k in 0..=deg {
                let mut m = Matrix::zeros(ctx, self.dim * other.dim, self.dim * other.dim);
                for i in 0..=k {
                    if let (Some(x), Some(y)) = (a.get(i), b.get(k - i)) {
                        m = m.add(&x.kron(y))?;
                    }
                }
                ops.push(m);
            }
            while ops.len() > 1 && ops.last().is_some_and(|m| m.is_zero()) {
                ops.pop();
            }
            families.push(CoeffFamily::new(label, ops));
        }
        let mut labels = Vec::with_capacity(self.dim * other.dim);
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("{a}(x){b}"));
            }
        }
        let mut m = GModule::new(ctx, labels, self.algebra.clone(), lie, families)?;
        if let (Some(a), Some(b)) = (&self.weights, &other.weights) {
            let mut w = Vec::new();
            for x in a {
                for y in b {
                    w.push(x.iter().zip(y).map(|(p, q)| p + q).collect());
                }
            }
            m.weights = Some(w);
        }
        Ok(m)
    }

    pub fn sym2(&self) -> Result<GModule, ModrepError> {
        self.square(true)
    }

    pub fn lambda2(&self) -> Result<GModule, ModrepError> {
        self.square(false)
    }

    /// Basis pairs of the symmetric (`i <= j`) or exterior (`i < j`) square.
    pub fn square_basis(&self, symmetric: bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                if symmetric || i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn square(&self, symmetric: bool) -> Result<GModule, ModrepError> {
        let ctx = self.ctx;
        let pairs = self.square_basis(symmetric);
        let d = pairs.len();
        let mut index = vec![vec![usize::MAX; self.dim]; self.dim];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            index[i][j] = k;
        }
        // matrix of e_i∘e_j ↦ (A e_i)∘(B e_j)
        let pair_op = |a: &Matrix, b: &Matrix| -> Matrix {
            let mut m = Matrix::zeros(ctx, d, d);
            for (col, &(i, j)) in pairs.iter().enumerate() {
                for p in 0..self.dim {
                    let x = a.get(p, i);
                    if ctx.is_zero(x) {
                        continue;
                    }
                    for q in 0..self.dim {
                        let y = b.get(q, j);
                        if ctx.is_zero(y) {
                            continue;
                        }
                        let mut c = ctx.mul(x, y);
                        let row = if p <= q {
                            if p == q && !symmetric {
                                continue;
                            }
                            index[p][q]
                        } else {
                            if !symmetric {
                                c = ctx.neg(&c);
                            }
                            index[q][p]
                        };
                        m.set(row, col, ctx.add(m.get(row, col), &c));
                    }
                }
            }
            m
        };
        let id = Matrix::identity(ctx, self.dim);
        let lie = self
            .lie
            .iter()
            .map(|a| pair_op(a, &id).add(&pair_op(&id, a)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut families = Vec::new();
        for f in &self.families {
            let deg = 2 * f.degree();
            let mut ops = Vec::new();
            for k in 0..=deg {
                let mut m = Matrix::zeros(ctx, d, d);
                for i in 0..=k {
                    if let (Some(x), Some(y)) = (f.ops.get(i), f.ops.get(k - i)) {
                        m = m.add(&pair_op(x, y))?;
                    }
                }
                ops.push(m);
            }
            while ops.len() > 1 && ops.last().is_some_and(|m| m.is_zero()) {
                ops.pop();
            }
            families.push(CoeffFamily::new(f.label.clone(), ops));
        }
        let sep = if symmetric { "*" } else { "^" };
        let labels = pairs.iter().map(|&(i, j)| format!("{}{sep}{}", self.labels[i], self.labels[j])).collect();
        let mut m = GModule::new(ctx, labels, self.algebra.clone(), lie, families)?;
        if let Some(w) = &self.weights {
            m.weights = Some(pairs.iter().map(|&(i, j)| w[i].iter().zip(&w[j]).map(|(a, b)| a + b).collect()).collect());
        }
        Ok(m)
    }

    /// Index of `e_i∘e_j` in [`GModule::sym2`] / [`GModule::lambda2`] together
    /// with the sign needed to write it with `i <= j`.
    pub fn square_index(&self, symmetric: bool, i: usize, j: usize) -> Option<(usize, i64)> {
        if i == j && !symmetric {
            return None;
        }
        let (a, b, s) = if i <= j { (i, j, 1) } else { (j, i, if symmetric { 1 } else { -1 }) };
        let pos = self.square_basis(symmetric).iter().position(|&p| p == (a, b))?;
        Some((pos, s))
    }

    /// Checks that `w` is stable under every operator, naming the first
    /// violating one.
    pub fn check_invariant(&self, w: &Subspace) -> Result<(), ModrepError> {
        for (name, op) in self.all_ops() {
            if !w.is_invariant(op)? {
                return Err(ModrepError::NotInvariant(name));
            }
        }
        Ok(())
    }

    /// The module `upper / lower` on the given representatives (taken in
    /// `upper`, independent modulo `lower`).
    pub fn subquotient(
        &self,
        upper: &Subspace,
        lower: &Subspace,
        reps: Vec<Vec<Scalar>>,
        labels: Vec<String>,
    ) -> Result<GModule, ModrepError> {
        let ctx = self.ctx;
        if !lower.leq(upper)? {
            return Err(ModrepError::Input("lower subspace is not contained in upper".into()));
        }
        self.check_invariant(upper)?;
        self.check_invariant(lower)?;
        let d = upper.dim() - lower.dim();
        if reps.len() != d || labels.len() != d {
            return Err(ModrepError::Input(format!("expected {d} representatives and labels")));
        }
        for r in &reps {
            if !upper.contains(r)? {
                return Err(ModrepError::Input("representative outside the upper subspace".into()));
            }
        }
        let reduced: Vec<Vec<Scalar>> = reps.iter().map(|r| lower.reduce(r)).collect::<Result<_, _>>()?;
        // columns are the reduced representatives
        let mut basis_m = Matrix::zeros(ctx, self.dim, d);
        for (c, r) in reduced.iter().enumerate() {
            for (i, x) in r.iter().enumerate() {
                basis_m.set(i, c, x.clone());
            }
        }
        if basis_m.rank() != d {
            return Err(ModrepError::Input("representatives are dependent modulo the lower subspace".into()));
        }
        let induced = |op: &Matrix| -> Result<Matrix, ModrepError> {
            let mut out = Matrix::zeros(ctx, d, d);
            for (c, r) in reps.iter().enumerate() {
                let img = lower.reduce(&op.mul_vec(r)?)?;
                let x = basis_m.solve(&img)?.expect("image lies in upper by invariance");
                for (row, v) in x.into_iter().enumerate() {
                    out.set(row, c, v);
                }
            }
            Ok(out)
        };
        let lie = self.lie.iter().map(&induced).collect::<Result<Vec<_>, _>>()?;
        let mut families = Vec::new();
        for f in &self.families {
            let mut ops = f.ops.iter().map(&induced).collect::<Result<Vec<_>, _>>()?;
            while ops.len() > 1 && ops.last().is_some_and(|m| m.is_zero()) {
                ops.pop();
            }
            families.push(CoeffFamily::new(f.label.clone(), ops));
        }
        GModule::new(ctx, labels, self.algebra.clone(), lie, families)
    }

    /// Quotient by an invariant subspace, on the basis vectors at non-pivot
    /// coordinates.
    pub fn quotient_module(&self, w: &Subspace) -> Result<GModule, ModrepError> {
        let kept = w.non_pivots();
        let reps = kept
            .iter()
            .map(|&k| {
                let mut v = vec![self.ctx.zero(); self.dim];
                v[k] = self.ctx.one();
                v
            })
            .collect();
        let labels = kept.iter().map(|&k| self.labels[k].clone()).collect();
        let mut m = self.subquotient(&Subspace::full(self.ctx, self.dim), w, reps, labels)?;
        m.weights = self.weights.as_ref().map(|ws| kept.iter().map(|&k| ws[k].clone()).collect());
        Ok(m)
    }

    /// Restriction to an invariant subspace, on its echelon basis.
    pub fn submodule(&self, w: &Subspace) -> Result<GModule, ModrepError> {
        let labels = (0..w.dim()).map(|i| format!("b{i}")).collect();
        self.subquotient(w, &Subspace::zero(self.ctx, self.dim), w.basis_rows().to_vec(), labels)
    }

    /// Smallest subspace containing the seeds and stable under the Lie action
    /// and every coefficient operator.
    pub fn submodule_generated(&self, seeds: &[Vec<Scalar>]) -> Result<Subspace, ModrepError> {
        let ops: Vec<Matrix> = self.all_ops().into_iter().map(|(_, m)| m.clone()).collect();
        Ok(invariant_closure(self.ctx, self.dim, seeds, &ops)?)
    }

    /// Smallest submodule with trivial quotient: the closure of all images of
    /// positive-order coefficient operators and Lie matrices.
    pub fn trivial_quotient_defect(&self) -> Result<Subspace, ModrepError> {
        let mut seeds = Vec::new();
        for (_, op) in self.all_ops() {
            for c in 0..self.dim {
                let col = op.column(c);
                if col.iter().any(|x| !self.ctx.is_zero(x)) {
                    seeds.push(col);
                }
            }
        }
        self.submodule_generated(&seeds)
    }

    /// Evidence of irreducibility: every basis vector generates the module.
    pub fn basis_vectors_generate(&self) -> Result<bool, ModrepError> {
        for i in 0..self.dim {
            let mut v = vec![self.ctx.zero(); self.dim];
            v[i] = self.ctx.one();
            if !self.submodule_generated(&[v])?.is_full() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            field: FieldJson::from_ctx(self.ctx),
            dim: self.dim,
            labels: self.labels.clone(),
            weights: self.weights.clone(),
            algebra: self.algebra.as_ref().map(|a| a.to_json()),
            lie: self.lie.iter().map(matrix_to_json).collect(),
            families: self
                .families
                .iter()
                .map(|f| FamilyJson { label: f.label.clone(), ops: f.ops.iter().map(matrix_to_json).collect() })
                .collect(),
        }
    }

    pub fn from_json(j: &ModuleJson) -> Result<GModule, ModrepError> {
        let ctx = j.field.to_ctx()?;
        let algebra = match &j.algebra {
            Some(a) => Some(Arc::new(LieSuperalgebra::from_json(a)?)),
            None => None,
        };
        Self::from_json_with_algebra(j, ctx, algebra)
    }

    pub(crate) fn from_json_with_algebra(
        j: &ModuleJson,
        ctx: FieldCtx,
        algebra: Option<Arc<LieSuperalgebra>>,
    ) -> Result<GModule, ModrepError> {
        let lie = j.lie.iter().map(|m| matrix_from_json(ctx, m, j.dim)).collect::<Result<Vec<_>, _>>().map_err(ModrepError::Input)?;
        let families = j
            .families
            .iter()
            .map(|f| {
                let ops = f.ops.iter().map(|m| matrix_from_json(ctx, m, j.dim)).collect::<Result<Vec<_>, _>>()?;
                Ok(CoeffFamily::new(f.label.clone(), ops))
            })
            .collect::<Result<Vec<_>, String>>()
            .map_err(ModrepError::Input)?;
        if j.labels.len() != j.dim {
            return Err(ModrepError::Input("label count differs from dim".into()));
        }
        let m = GModule::new(ctx, j.labels.clone(), algebra, lie, families)?;
        match &j.weights {
            Some(w) => m.with_weights(w.clone()),
            None => Ok(m),
        }
    }
}

fn dual_label(l: &str) -> String {
    match l.strip_suffix('*') {
        Some(base) if !base.contains(['(', '*', '^']) => base.to_string(),
        _ => format!("{l}*"),
    }
}

/// Intertwiners `m1 -> m2` for the chosen generators, by successive kernel
/// refinement: each constraint pair cuts the current solution space down.
pub fn hom_space(m1: &GModule, m2: &GModule, mode: HomMode) -> Result<HomSpace, ModrepError> {
    if m1.ctx != m2.ctx {
        return Err(FieldError::ContextMismatch.into());
    }
    let ctx = m1.ctx;
    let (d1, d2) = (m1.dim, m2.dim);
    let mut pairs: Vec<(Matrix, Matrix)> = Vec::new();
    match mode {
        HomMode::Algebra => {
            if !same_algebra(&m1.algebra, &m2.algebra) {
                return Err(ModrepError::AlgebraMismatch);
            }
            pairs.extend(m1.lie.iter().cloned().zip(m2.lie.iter().cloned()));
        }
        HomMode::Group => {
            for label in GModule::family_labels(m1, m2) {
                let a = m1.family_ops_or_identity(&label);
                let b = m2.family_ops_or_identity(&label);
                for k in 1..a.len().max(b.len()) {
                    let x = a.get(k).cloned().unwrap_or_else(|| Matrix::zeros(ctx, d1, d1));
                    let y = b.get(k).cloned().unwrap_or_else(|| Matrix::zeros(ctx, d2, d2));
                    pairs.push((x, y));
                }
            }
        }
    }
    // unknown F is d2 x d1, flattened row-major
    let nvar = d1 * d2;
    let mut basis: Option<Vec<Vec<Scalar>>> = None;
    for (a1, a2) in &pairs {
        let residual = |f: &[Scalar]| -> Vec<Scalar> {
            // F·A1 − A2·F
            let mut out = vec![ctx.zero(); nvar];
            for r in 0..d2 {
                for k in 0..d1 {
                    let x = &f[r * d1 + k];
                    if ctx.is_zero(x) {
                        continue;
                    }
                    for c in 0..d1 {
                        let y = a1.get(k, c);
                        if !ctx.is_zero(y) {
                            out[r * d1 + c] = ctx.add(&out[r * d1 + c], &ctx.mul(x, y));
                        }
                    }
                }
            }
            for r in 0..d2 {
                for k in 0..d2 {
                    let y = a2.get(r, k);
                    if ctx.is_zero(y) {
                        continue;
                    }
                    for c in 0..d1 {
                        let x = &f[k * d1 + c];
                        if !ctx.is_zero(x) {
                            out[r * d1 + c] = ctx.sub(&out[r * d1 + c], &ctx.mul(y, x));
                        }
                    }
                }
            }
            out
        };
        let current: Vec<Vec<Scalar>> = match &basis {
            Some(b) => b.clone(),
            None => (0..nvar)
                .map(|i| {
                    let mut v = vec![ctx.zero(); nvar];
                    v[i] = ctx.one();
                    v
                })
                .collect(),
        };
        if current.is_empty() {
            break;
        }
        let s = current.len();
        // constraint columns: for each output coordinate, the coefficients
        // over the current basis
        let res: Vec<Vec<Scalar>> = current.iter().map(|f| residual(f)).collect();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for c in 0..nvar {
            if res.iter().any(|r| !ctx.is_zero(&r[c])) {
                rows.push(res.iter().map(|r| r[c].clone()).collect());
            }
        }
        if rows.is_empty() {
            basis = Some(current);
            continue;
        }
        let kernel = Matrix::from_rows(ctx, s, rows)?.kernel();
        let next: Vec<Vec<Scalar>> = kernel
            .basis_rows()
            .iter()
            .map(|coef| {
                let mut v = vec![ctx.zero(); nvar];
                for (a, f) in coef.iter().zip(&current) {
                    if ctx.is_zero(a) {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(f) {
                        if !ctx.is_zero(y) {
                            *x = ctx.add(x, &ctx.mul(a, y));
                        }
                    }
                }
                v
            })
            .collect();
        basis = Some(next);
    }
    let flat = basis.unwrap_or_else(|| Subspace::full(ctx, nvar).basis_rows().to_vec());
    let canon = Subspace::from_vectors(ctx, nvar, flat)?;
    let mats = canon
        .basis_rows()
        .iter()
        .map(|v| Matrix::from_rows(ctx, d1, v.chunks(d1).map(|c| c.to_vec()).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HomSpace { dim: mats.len(), basis: mats })
}

/// Sum of the images of all group-mode intertwiners from the listed
/// irreducibles into `m`.
pub fn socle_via_homs(m: &GModule, irreducibles: &[&GModule]) -> Result<Subspace, ModrepError> {
    let mut vs = Vec::new();
    for l in irreducibles {
        let h = hom_space(l, m, HomMode::Group)?;
        for f in &h.basis {
            for c in 0..f.ncols() {
                vs.push(f.column(c));
            }
        }
    }
    Ok(Subspace::from_vectors(m.ctx, m.dim, vs)?)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FamilyJson {
    pub label: String,
    pub ops: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModuleJson {
    pub field: FieldJson,
    pub dim: usize,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraJson>,
    #[serde(default)]
    pub lie: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub families: Vec<FamilyJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::BasisElem;

    fn sl2(ctx: FieldCtx) -> Arc<LieSuperalgebra> {
        // E, H, F with [E,F]=H, [H,E]=2E, [H,F]=-2F
        let basis = vec![BasisElem::even("E12"), BasisElem::even("H"), BasisElem::even("E21")];
        let e = vec![
            (0, 2, vec![(1, ctx.one())]),
            (1, 0, vec![(0, ctx.from_i64(2))]),
            (1, 2, vec![(2, ctx.from_i64(-2))]),
        ];
        Arc::new(LieSuperalgebra::new(ctx, basis, e, serde_json::Value::Null).unwrap())
    }

    fn standard(ctx: FieldCtx) -> GModule {
        let a = sl2(ctx);
        let e = Matrix::from_i64(ctx, &[&[0, 1], &[0, 0]]);
        let h = Matrix::from_i64(ctx, &[&[1, 0], &[0, -1]]);
        let f = Matrix::from_i64(ctx, &[&[0, 0], &[1, 0]]);
        let fam_e = CoeffFamily::exp_nilpotent("X_E12", &e).unwrap();
        let fam_f = CoeffFamily::exp_nilpotent("X_E21", &f).unwrap();
        GModule::new(ctx, vec!["v1".into(), "v2".into()], Some(a), vec![e, h, f], vec![fam_e, fam_f])
            .unwrap()
            .with_weights(vec![vec![1], vec![-1]])
            .unwrap()
    }

    #[test]
    fn group_law_detects_bad_family() {
        let ctx = FieldCtx::prime(5).unwrap();
        let e = Matrix::from_i64(ctx, &[&[0, 1], &[0, 0]]);
        let fam = CoeffFamily::new("bad", vec![Matrix::identity(ctx, 2), e.clone(), e]);
        assert!(fam.check_group_law().is_err());
    }

    #[test]
    fn dims_of_constructions() {
        let ctx = FieldCtx::prime(5).unwrap();
        let v = standard(ctx);
        let v2 = v.sym2().unwrap();
        assert_eq!(v2.dim(), 3);
        assert_eq!(v.tensor(&v2).unwrap().dim(), 6);
        assert_eq!(v.lambda2().unwrap().dim(), 1);
        assert_eq!(v.direct_sum(&v2).unwrap().dim(), 5);
    }

    #[test]
    fn double_dual_is_original() {
        let ctx = FieldCtx::prime(7).unwrap();
        let v = standard(ctx).sym2().unwrap();
        let dd = v.dual().unwrap().dual().unwrap();
        assert_eq!(dd, v);
        let t = GModule::trivial(ctx, 1, v.algebra().cloned());
        assert_eq!(t.dual().unwrap(), t);
    }

    #[test]
    fn lambda2_of_standard_is_trivial() {
        let ctx = FieldCtx::prime(3).unwrap();
        let l = standard(ctx).lambda2().unwrap();
        assert!(l.lie_action().iter().all(|m| m.is_zero()));
        assert!(l.trivial_quotient_defect().unwrap().is_zero());
        assert_eq!(hom_space(&l, &GModule::trivial(ctx, 1, l.algebra().cloned()), HomMode::Group).unwrap().dim, 1);
    }

    #[test]
    fn sym2_of_standard_has_highest_weight_two() {
        let ctx = FieldCtx::prime(5).unwrap();
        let s = standard(ctx).sym2().unwrap();
        let w = s.weights().unwrap();
        assert_eq!(w.iter().map(|x| x[0]).max(), Some(2));
        assert!(s.basis_vectors_generate().unwrap());
        assert!(s.weight_compatible("X_E12", &[2]));
    }

    #[test]
    fn hom_identity_and_modes() {
        let ctx = FieldCtx::prime(5).unwrap();
        let v = standard(ctx);
        for mode in [HomMode::Algebra, HomMode::Group] {
            let h = hom_space(&v, &v, mode).unwrap();
            assert_eq!(h.dim, 1);
            assert_eq!(h.basis[0], Matrix::identity(ctx, 2));
        }
        let t = GModule::trivial(ctx, 1, v.algebra().cloned());
        assert!(socle_via_homs(&t, &[&v]).unwrap().is_zero());
        assert!(socle_via_homs(&v, &[&v]).unwrap().is_full());
    }

    #[test]
    fn quotient_requires_invariance() {
        let ctx = FieldCtx::prime(5).unwrap();
        let v = standard(ctx);
        let line = Subspace::coordinate(ctx, 2, &[1]);
        assert!(matches!(v.quotient_module(&line), Err(ModrepError::NotInvariant(_))));
    }

    #[test]
    fn defect_of_sum_with_trivial() {
        let ctx = FieldCtx::prime(5).unwrap();
        let v = standard(ctx);
        let sum = GModule::trivial(ctx, 1, v.algebra().cloned()).direct_sum(&v).unwrap();
        let d = sum.trivial_quotient_defect().unwrap();
        assert_eq!(d, Subspace::coordinate(ctx, 3, &[1, 2]));
    }

    #[test]
    fn json_round_trip() {
        let ctx = FieldCtx::prime(5).unwrap();
        let v = standard(ctx).sym2().unwrap();
        let s = serde_json::to_string(&v.to_json()).unwrap();
        let back = GModule::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, v);
    }
}
