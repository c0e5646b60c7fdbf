//! `SL₂` with its root-subgroup families, `Symₙ(V)` in divided powers and
//! the equivariant bracket on `Symₙ(V)*`.

use std::sync::Arc;

use serde_json::json;

use super::{adjoint_families, arc, matrix_superalgebra, ConstructionError, SuperMatrix};
use crate::field::{FieldCtx, Scalar};
use crate::hcpair::{assemble_pair, HCPair};
use crate::linalg::Matrix;
use crate::modrep::{CoeffFamily, GModule};
use crate::superalg::{BasisElem, LieSuperalgebra, Parity, Sparse};

pub const E12: usize = 0;
pub const H: usize = 1;
pub const E21: usize = 2;

fn sl2_matrices(ctx: FieldCtx) -> Vec<Matrix> {
    vec![Matrix::unit(ctx, 2, 0, 1), Matrix::from_i64(ctx, &[&[1, 0], &[0, -1]]), Matrix::unit(ctx, 2, 1, 0)]
}

/// `sl₂` on `(E12, H, E21)`.
pub fn sl2(ctx: FieldCtx) -> Arc<LieSuperalgebra> {
    let elems: Vec<SuperMatrix> = ["E12", "H", "E21"]
        .iter()
        .zip(sl2_matrices(ctx))
        .map(|(l, m)| SuperMatrix::new(*l, Parity::Even, m))
        .collect();
    arc(matrix_superalgebra(ctx, &elems, json!({"family": "sl2"}), true).expect("sl2 is a Lie algebra"))
}

fn root_generators(ctx: FieldCtx) -> Vec<(String, Matrix)> {
    vec![("X_E12".into(), Matrix::unit(ctx, 2, 0, 1)), ("X_E21".into(), Matrix::unit(ctx, 2, 1, 0))]
}

/// `sl₂` as a module over itself, with the conjugation families of
/// `I + tE12` and `I + tE21`.
pub fn adjoint_sl2(ctx: FieldCtx, g: &Arc<LieSuperalgebra>) -> Result<GModule, ConstructionError> {
    let fams = adjoint_families(ctx, &sl2_matrices(ctx), &root_generators(ctx))?;
    let labels = g.basis().iter().map(|b| b.label.clone()).collect();
    Ok(GModule::new(ctx, labels, Some(g.clone()), g.ad_matrices().to_vec(), fams)?.with_weights(vec![vec![2], vec![0], vec![-2]])?)
}

fn trim(mut ops: Vec<Matrix>) -> Vec<Matrix> {
    while ops.len() > 1 && ops.last().is_some_and(|m| m.is_zero()) {
        ops.pop();
    }
    ops
}

/// `Symₙ(V)` on `s_i = v₁ⁱ v₂ⁿ⁻ⁱ`, with `E12⁽ᵏ⁾ s_i = C(n-i, k) s_{i+k}` and
/// `E21⁽ᵏ⁾ s_i = C(i, k) s_{i-k}`.
pub fn sym_n_module(n: usize, ctx: FieldCtx, g: &Arc<LieSuperalgebra>) -> Result<GModule, ConstructionError> {
    let d = n + 1;
    let ni = n as i64;
    let mut up = Vec::new();
    let mut down = Vec::new();
    for k in 0..=n {
        let mut u = Matrix::zeros(ctx, d, d);
        let mut w = Matrix::zeros(ctx, d, d);
        for i in 0..d {
            if i + k <= n {
                u.set(i + k, i, ctx.binomial(ni - i as i64, k as i64));
            }
            if i >= k {
                w.set(i - k, i, ctx.binomial(i as i64, k as i64));
            }
        }
        up.push(u);
        down.push(w);
    }
    let mut h = Matrix::zeros(ctx, d, d);
    for i in 0..d {
        h.set(i, i, ctx.from_i64(2 * i as i64 - ni));
    }
    let lie = vec![up[1.min(n)].clone(), h, down[1.min(n)].clone()];
    let lie = if n == 0 { vec![Matrix::zeros(ctx, 1, 1); 3] } else { lie };
    let fams = vec![CoeffFamily::new("X_E12", trim(up)), CoeffFamily::new("X_E21", trim(down))];
    let labels = (0..d).map(|i| format!("s{i}")).collect();
    let weights = (0..d).map(|i| vec![2 * i as i64 - ni]).collect();
    Ok(GModule::new(ctx, labels, Some(g.clone()), lie, fams)?.with_weights(weights)?)
}

/// `Symₙ(V)*` on the dual basis `s*_i`.
pub fn sym_n_dual(n: usize, ctx: FieldCtx, g: &Arc<LieSuperalgebra>) -> Result<GModule, ConstructionError> {
    Ok(sym_n_module(n, ctx, g)?.dual()?)
}

/// Structure constants of the bracket on `Symₙ(V)*`:
/// `[s*_i, s*_{n-i}] = a_i H`, `[s*_j, s*_{n-1-j}] = b_j E12`,
/// `[s*_k, s*_{n+1-k}] = c_k E21`, and the highest-weight coefficients `e_k`
/// normalized to `e₁ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SL2FamilyConstants {
    pub n: usize,
    pub a: Scalar,
    /// `a_i` for `0 <= i <= n`.
    pub a_i: Vec<Scalar>,
    /// `b_j` for `0 <= j <= n-1`.
    pub b_j: Vec<Scalar>,
    /// `c_k` for `1 <= k <= n`, stored at `k - 1`.
    pub c_k: Vec<Scalar>,
    /// `e_k` for `1 <= k <= n`, stored at `k - 1`.
    pub e_k: Vec<Scalar>,
}

pub fn sl2_symn_constants(n: usize, a: &Scalar, ctx: FieldCtx) -> Result<SL2FamilyConstants, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::InvalidParameter("n must be at least 1".into()));
    }
    let ni = n as i64;
    let half = ctx.from_ratio(1, 2)?;
    let sign = |i: i64| ctx.from_i64(if i % 2 == 0 { 1 } else { -1 });
    let a_i = (0..=ni)
        .map(|i| {
            let d = ctx.sub(&ctx.binomial(ni - 1, i), &ctx.binomial(ni - 1, i - 1));
            ctx.mul(&ctx.mul(&sign(i), &half), &ctx.mul(&d, a))
        })
        .collect();
    let b_j = (0..ni).map(|j| ctx.mul(&ctx.mul(&sign(j), &ctx.binomial(ni - 1, j)), a)).collect();
    let c_k = (1..=ni).map(|k| ctx.mul(&ctx.mul(&sign(k), &ctx.binomial(ni - 1, k - 1)), a)).collect();
    let e_k = (1..=ni).map(|k| ctx.mul(&sign(k - 1), &ctx.binomial(ni - 1, k - 1))).collect();
    Ok(SL2FamilyConstants { n, a: a.clone(), a_i, b_j, c_k, e_k })
}

impl SL2FamilyConstants {
    pub fn a_at(&self, ctx: FieldCtx, i: i64) -> Scalar {
        usize::try_from(i).ok().and_then(|i| self.a_i.get(i).cloned()).unwrap_or_else(|| ctx.zero())
    }

    pub fn b_at(&self, ctx: FieldCtx, j: i64) -> Scalar {
        usize::try_from(j).ok().and_then(|j| self.b_j.get(j).cloned()).unwrap_or_else(|| ctx.zero())
    }

    pub fn c_at(&self, ctx: FieldCtx, k: i64) -> Scalar {
        usize::try_from(k - 1).ok().and_then(|k| self.c_k.get(k).cloned()).unwrap_or_else(|| ctx.zero())
    }

    pub fn e_at(&self, ctx: FieldCtx, k: i64) -> Scalar {
        usize::try_from(k - 1).ok().and_then(|k| self.e_k.get(k).cloned()).unwrap_or_else(|| ctx.zero())
    }

    /// The four linear systems expressing equivariance of the bracket.
    /// Returns the first failing identity.
    pub fn check_recurrences(&self, ctx: FieldCtx) -> Result<(), String> {
        let n = self.n as i64;
        let s = |x: i64| ctx.from_i64(x);
        let lin = |c1: i64, x: Scalar, c2: i64, y: Scalar| ctx.add(&ctx.mul(&s(c1), &x), &ctx.mul(&s(c2), &y));
        for i in 0..=n {
            let lhs = lin(-(i + 1), self.c_at(ctx, i + 1), -(n - i + 1), self.c_at(ctx, i));
            if lhs != ctx.mul(&s(2), &self.a_at(ctx, i)) {
                return Err(format!("-(i+1)c_(i+1) - (n-i+1)c_i = 2a_i fails at i={i}"));
            }
            let lhs = lin(-(n - i + 1), self.b_at(ctx, i - 1), -(i + 1), self.b_at(ctx, i));
            if lhs != ctx.mul(&s(-2), &self.a_at(ctx, i)) {
                return Err(format!("-(n-i+1)b_(i-1) - (i+1)b_i = -2a_i fails at i={i}"));
            }
        }
        for j in 0..n {
            let lhs = lin(-(j + 1), self.a_at(ctx, j + 1), -(n - j), self.a_at(ctx, j));
            if lhs != ctx.neg(&self.b_at(ctx, j)) {
                return Err(format!("-(j+1)a_(j+1) - (n-j)a_j = -b_j fails at j={j}"));
            }
        }
        for k in 1..=n {
            let lhs = lin(-(n - k + 1), self.a_at(ctx, k - 1), -k, self.a_at(ctx, k));
            if lhs != self.c_at(ctx, k) {
                return Err(format!("-(n-k+1)a_(k-1) - k a_k = c_k fails at k={k}"));
            }
        }
        Ok(())
    }

    /// `a_i = a_{n-i}`, `b_j = b_{n-1-j}`, `c_k = c_{n+1-k}`.
    pub fn symmetric(&self, ctx: FieldCtx) -> bool {
        let n = self.n as i64;
        (0..=n).all(|i| self.a_at(ctx, i) == self.a_at(ctx, n - i))
            && (0..n).all(|j| self.b_at(ctx, j) == self.b_at(ctx, n - 1 - j))
            && (1..=n).all(|k| self.c_at(ctx, k) == self.c_at(ctx, n + 1 - k))
    }

    /// `e_{k-1}(n-k+1) + e_k(k-1) = 0` with `e₀ = 0`.
    pub fn e_solves_highest_weight_system(&self, ctx: FieldCtx) -> bool {
        let n = self.n as i64;
        (1..=n).all(|k| {
            let x = ctx.mul(&self.e_at(ctx, k - 1), &ctx.from_i64(n - k + 1));
            let y = ctx.mul(&self.e_at(ctx, k), &ctx.from_i64(k - 1));
            ctx.is_zero(&ctx.add(&x, &y))
        })
    }

    /// Bracket on all ordered basis pairs, in `(E12, H, E21)` coordinates.
    pub fn bracket_entries(&self, ctx: FieldCtx) -> Vec<(usize, usize, Sparse)> {
        let n = self.n as i64;
        let mut out = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                let (k, c) = match i + j {
                    s if s == n => (H, self.a_at(ctx, i)),
                    s if s == n - 1 => (E12, self.b_at(ctx, i)),
                    s if s == n + 1 => (E21, self.c_at(ctx, i)),
                    _ => continue,
                };
                // zero entries are kept so both orders of every pair are compared
                let v = if ctx.is_zero(&c) { Vec::new() } else { vec![(k, c)] };
                out.push((i as usize, j as usize, v));
            }
        }
        out
    }
}

/// Unvalidated ingredients of the pair `(SL₂, Symₙ(V)*)`.
#[derive(Clone, Debug)]
pub struct SymnCandidate {
    pub constants: SL2FamilyConstants,
    pub even: Arc<LieSuperalgebra>,
    pub adjoint: GModule,
    pub odd: GModule,
    pub entries: Vec<(usize, usize, Sparse)>,
    pub meta: serde_json::Value,
}

impl SymnCandidate {
    pub fn assemble(&self) -> Result<HCPair, ConstructionError> {
        Ok(assemble_pair(self.even.clone(), self.adjoint.families().to_vec(), self.odd.clone(), &self.entries, self.meta.clone())?)
    }

    /// `sl₂ ⊕ Symₙ(V)*` with only skew symmetry and grading enforced, so the
    /// cubic identity can be examined even when the pair is invalid.
    pub fn superalgebra_unchecked(&self) -> Result<LieSuperalgebra, ConstructionError> {
        let ctx = self.even.ctx();
        let mut basis: Vec<BasisElem> = self.even.basis().to_vec();
        basis.extend(self.odd.labels().iter().map(BasisElem::odd));
        let mut e: Vec<(usize, usize, Sparse)> = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                let b = self.even.bracket_basis(i, j);
                if !b.is_empty() {
                    e.push((i, j, b.clone()));
                }
            }
            let m = &self.odd.lie_action()[i];
            for c in 0..m.ncols() {
                let col: Sparse = (0..m.nrows()).filter(|&r| !ctx.is_zero(m.get(r, c))).map(|r| (3 + r, m.get(r, c).clone())).collect();
                if !col.is_empty() {
                    e.push((i, 3 + c, col));
                }
            }
        }
        // upper triangle only, so an asymmetric table is not rejected here
        for (i, j, v) in &self.entries {
            if i <= j && !v.is_empty() {
                e.push((3 + i, 3 + j, v.clone()));
            }
        }
        Ok(LieSuperalgebra::new_unchecked(ctx, basis, e, self.meta.clone())?)
    }
}

pub fn sl2_symn_candidate(n: usize, a: &Scalar, ctx: FieldCtx) -> Result<SymnCandidate, ConstructionError> {
    let constants = sl2_symn_constants(n, a, ctx)?;
    let even = sl2(ctx);
    let adjoint = adjoint_sl2(ctx, &even)?;
    let odd = sym_n_dual(n, ctx, &even)?;
    let entries = constants.bracket_entries(ctx);
    let meta = json!({"family": "sl2_symn", "n": n, "a": a.to_string(), "assumed": ["SL_2 is almost-simple"]});
    Ok(SymnCandidate { constants, even, adjoint, odd, entries, meta })
}

/// The pair on `Symₙ(V)*`; fails with the first violated axiom.
pub fn sl2_symn_pair(n: usize, a: &Scalar, ctx: FieldCtx) -> Result<HCPair, ConstructionError> {
    sl2_symn_candidate(n, a, ctx)?.assemble()
}
