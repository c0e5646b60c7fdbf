//! `Γ(α₁, α₂, α₃)`: even part three copies of `sl₂`, odd part `V ⊗ V ⊗ V`.

use serde_json::json;

use super::ConstructionError;
use crate::field::{FieldCtx, Scalar};
use crate::superalg::{BasisElem, LieSuperalgebra, Sparse};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D21Params {
    pub a1: Scalar,
    pub a2: Scalar,
    pub a3: Scalar,
}

impl D21Params {
    pub fn new(a1: Scalar, a2: Scalar, a3: Scalar) -> Self {
        D21Params { a1, a2, a3 }
    }

    pub fn from_i64(ctx: FieldCtx, a: [i64; 3]) -> Self {
        D21Params::new(ctx.from_i64(a[0]), ctx.from_i64(a[1]), ctx.from_i64(a[2]))
    }

    /// `(α, 1, -1-α)`.
    pub fn osp_alpha(ctx: FieldCtx, alpha: &Scalar) -> Self {
        let a3 = ctx.sub(&ctx.neg(alpha), &ctx.one());
        D21Params::new(alpha.clone(), ctx.one(), a3)
    }

    pub fn sum_vanishes(&self, ctx: FieldCtx) -> bool {
        ctx.is_zero(&ctx.add(&ctx.add(&self.a1, &self.a2), &self.a3))
    }

    fn get(&self, k: usize) -> &Scalar {
        [&self.a1, &self.a2, &self.a3][k]
    }
}

/// `⟨v₁, v₂⟩ = 1`.
fn form(a: usize, b: usize) -> i64 {
    match (a, b) {
        (0, 1) => 1,
        (1, 0) => -1,
        _ => 0,
    }
}

// sl₂ coordinates (E12, H, E21) of the element `v_a v_b` acting by
// w ↦ ½(⟨v_a, w⟩ v_b + ⟨v_b, w⟩ v_a)
fn square_to_sl2(ctx: FieldCtx, a: usize, b: usize) -> Result<[Scalar; 3], ConstructionError> {
    let z = ctx.zero();
    Ok(match (a.min(b), a.max(b)) {
        (0, 0) => [ctx.one(), z.clone(), z],
        (1, 1) => [z.clone(), z, ctx.from_i64(-1)],
        _ => [z.clone(), ctx.from_ratio(-1, 2)?, z],
    })
}

fn digits(k: usize) -> [usize; 3] {
    [(k >> 2) & 1, (k >> 1) & 1, k & 1]
}

fn entries(ctx: FieldCtx, p: &D21Params) -> Result<(Vec<BasisElem>, Vec<(usize, usize, Sparse)>), ConstructionError> {
    let mut basis = Vec::new();
    for c in 1..=3 {
        for l in ["E12", "H", "E21"] {
            basis.push(BasisElem::even(format!("{l}_{c}")));
        }
    }
    for k in 0..8 {
        let d = digits(k);
        basis.push(BasisElem::odd(format!("v{}{}{}", d[0] + 1, d[1] + 1, d[2] + 1)));
    }
    let mut out: Vec<(usize, usize, Sparse)> = Vec::new();
    let s = |x: i64| ctx.from_i64(x);
    for c in 0..3 {
        let (e, h, f) = (3 * c, 3 * c + 1, 3 * c + 2);
        out.push((e, f, vec![(h, s(1))]));
        out.push((h, e, vec![(e, s(2))]));
        out.push((h, f, vec![(f, s(-2))]));
        // standard action on tensor factor c
        for k in 0..8 {
            let d = digits(k);
            let bit = 1 << (2 - c);
            let o = 9 + k;
            if d[c] == 1 {
                out.push((e, o, vec![(9 + (k ^ bit), s(1))]));
                out.push((h, o, vec![(o, s(-1))]));
            } else {
                out.push((f, o, vec![(9 + (k ^ bit), s(1))]));
                out.push((h, o, vec![(o, s(1))]));
            }
        }
    }
    for x in 0..8 {
        for y in x..8 {
            let (dx, dy) = (digits(x), digits(y));
            let mut v = vec![ctx.zero(); 9];
            for c in 0..3 {
                let others: i64 = (0..3).filter(|&o| o != c).map(|o| form(dx[o], dy[o])).product();
                if others == 0 {
                    continue;
                }
                let coef = ctx.mul(p.get(c), &s(others));
                for (i, z) in square_to_sl2(ctx, dx[c], dy[c])?.iter().enumerate() {
                    v[3 * c + i] = ctx.add(&v[3 * c + i], &ctx.mul(&coef, z));
                }
            }
            let sp: Sparse = v.into_iter().enumerate().filter(|(_, c)| !ctx.is_zero(c)).collect();
            if !sp.is_empty() {
                out.push((9 + x, 9 + y, sp));
            }
        }
    }
    Ok((basis, out))
}

fn meta(p: &D21Params) -> serde_json::Value {
    json!({"family": "d21", "alpha": [p.a1.to_string(), p.a2.to_string(), p.a3.to_string()]})
}

/// Validated algebra; fails with the Jacobi witness unless `α₁+α₂+α₃ = 0`.
pub fn d21(p: &D21Params, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    let (basis, e) = entries(ctx, p)?;
    Ok(LieSuperalgebra::new(ctx, basis, e, meta(p))?)
}

/// Same table with only skew symmetry and grading checked.
pub fn d21_unchecked(p: &D21Params, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    let (basis, e) = entries(ctx, p)?;
    Ok(LieSuperalgebra::new_unchecked(ctx, basis, e, meta(p))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::{Parity, SDim, SimplicityOptions, SuperalgError};

    #[test]
    fn jacobi_iff_sum_zero() {
        let q = FieldCtx::rationals();
        let ok = d21(&D21Params::from_i64(q, [1, 1, -2]), q).unwrap();
        assert_eq!(ok.dims(), SDim::new(9, 8));
        let bad = d21(&D21Params::from_i64(q, [1, 1, 1]), q).unwrap_err();
        assert!(matches!(bad, ConstructionError::Superalg(SuperalgError::JacobiViolation { .. })));
    }

    #[test]
    fn osp_alpha_two_over_f5_is_simple() {
        let ctx = FieldCtx::prime(5).unwrap();
        let a = d21(&D21Params::osp_alpha(ctx, &ctx.from_i64(2)), ctx).unwrap();
        assert!(a.is_graded_simple(SimplicityOptions::default()).is_simple());
    }

    #[test]
    fn rescaling_by_a_square_is_an_isomorphism() {
        let ctx = FieldCtx::prime(5).unwrap();
        let base = [1, 1, 3];
        let a = d21(&D21Params::from_i64(ctx, base), ctx).unwrap();
        for lambda in [1i64, 4] {
            let l = ctx.from_i64(lambda);
            let mu = ctx.inv(&ctx.sqrt(&l).unwrap()).unwrap();
            let b = d21(&D21Params::from_i64(ctx, base.map(|x| x * lambda)), ctx).unwrap();
            // phi is the identity on the even part and mu on the odd part
            let phi = |i: usize| if a.parity(i) == Parity::Odd { mu.clone() } else { ctx.one() };
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    let lhs: Sparse = a.bracket_basis(i, j).iter().map(|(k, c)| (*k, ctx.mul(c, &phi(*k)))).collect();
                    let s = ctx.mul(&phi(i), &phi(j));
                    let rhs: Sparse = b.bracket_basis(i, j).iter().map(|(k, c)| (*k, ctx.mul(c, &s))).collect();
                    assert_eq!(lhs, rhs, "lambda {lambda}, ({i}, {j})");
                }
            }
        }
        // 2 is not a square mod 5
        assert!(ctx.sqrt(&ctx.from_i64(2)).is_none());
    }
}
