//! Matrix superalgebras on elementary-matrix bases: even elements before odd,
//! each group in row-major order.

use std::sync::Arc;

use serde_json::json;

use super::{
    adjoint_families, block_diag, block_off, conjugation_family, flatten, matrix_superalgebra, rect_unit, to_sparse,
    ConstructionError, Coordinatizer, SuperMatrix,
};
use crate::field::{FieldCtx, Scalar};
use crate::hcpair::{assemble_pair, HCPair};
use crate::linalg::{Matrix, Subspace};
use crate::modrep::GModule;
use crate::superalg::{LieSuperalgebra, Parity, SuperIdeal};

fn lbl(prefix: &str, size: usize, i: usize, j: usize) -> String {
    if size < 10 {
        format!("{prefix}{}{}", i + 1, j + 1)
    } else {
        format!("{prefix}{},{}", i + 1, j + 1)
    }
}

fn same_block(m: usize, i: usize, j: usize) -> bool {
    (i < m) == (j < m)
}

fn gl_elems(ctx: FieldCtx, m: usize, n: usize) -> Vec<SuperMatrix> {
    let s = m + n;
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for i in 0..s {
        for j in 0..s {
            let e = SuperMatrix::new(lbl("E", s, i, j), Parity::Even, Matrix::unit(ctx, s, i, j));
            if same_block(m, i, j) {
                even.push(e);
            } else {
                odd.push(SuperMatrix { parity: Parity::Odd, ..e });
            }
        }
    }
    even.extend(odd);
    even
}

/// Off-diagonal elementary matrices, then `h_k = E_kk ∓ E_{k+1,k+1}` with the
/// sign making the supertrace vanish, then the odd part.
fn sl_elems(ctx: FieldCtx, m: usize, n: usize) -> Vec<SuperMatrix> {
    let s = m + n;
    let all = gl_elems(ctx, m, n);
    let (even, odd): (Vec<_>, Vec<_>) = all.into_iter().partition(|e| e.parity == Parity::Even);
    let mut out: Vec<SuperMatrix> = even.into_iter().filter(|e| (0..s).all(|k| ctx.is_zero(e.matrix.get(k, k)))).collect();
    for k in 0..s.saturating_sub(1) {
        let mut h = Matrix::unit(ctx, s, k, k);
        let sign = if k + 1 == m { 1 } else { -1 };
        h.set(k + 1, k + 1, ctx.from_i64(sign));
        out.push(SuperMatrix::new(format!("h{}", k + 1), Parity::Even, h));
    }
    out.extend(odd);
    out
}

fn check_sizes(m: usize, n: usize) -> Result<(), ConstructionError> {
    if m + n == 0 {
        return Err(ConstructionError::InvalidParameter("m + n must be at least 1".into()));
    }
    Ok(())
}

pub fn gl(m: usize, n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    check_sizes(m, n)?;
    matrix_superalgebra(ctx, &gl_elems(ctx, m, n), json!({"family": "gl", "m": m, "n": n}), true)
}

pub fn sl(m: usize, n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    check_sizes(m, n)?;
    matrix_superalgebra(ctx, &sl_elems(ctx, m, n), json!({"family": "sl", "m": m, "n": n}), true)
}

/// Coordinates of `x` in the span of `elems`.
fn coords_of(ctx: FieldCtx, elems: &[SuperMatrix], x: &Matrix) -> Result<Vec<Scalar>, ConstructionError> {
    let s = x.nrows();
    let coord = Coordinatizer::new(ctx, s * s, &elems.iter().map(|e| flatten(&e.matrix)).collect::<Vec<_>>())?;
    coord.coords(&flatten(x))?.ok_or_else(|| ConstructionError::NotClosed("element outside the span".into()))
}

fn scalar_line(a: &LieSuperalgebra, coords: Vec<Scalar>) -> Result<SuperIdeal, ConstructionError> {
    let ctx = a.ctx();
    let full = Subspace::from_vectors(ctx, a.dim(), vec![coords])?;
    Ok(SuperIdeal::from_full(a, &full)?)
}

pub fn pgl(m: usize, n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    let g = gl(m, n, ctx)?;
    let elems = gl_elems(ctx, m, n);
    let id = coords_of(ctx, &elems, &Matrix::identity(ctx, m + n))?;
    let q = g.quotient(&scalar_line(&g, id)?)?;
    Ok(q.algebra.with_meta(json!({"family": "pgl", "m": m, "n": n})))
}

pub fn psl(m: usize, n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    check_sizes(m, n)?;
    if !ctx.is_zero(&ctx.from_i64(m as i64 - n as i64)) {
        return Err(ConstructionError::CenterNotInside { m, n, p: ctx.characteristic() });
    }
    let a = sl(m, n, ctx)?;
    let elems = sl_elems(ctx, m, n);
    let id = coords_of(ctx, &elems, &Matrix::identity(ctx, m + n))?;
    let q = a.quotient(&scalar_line(&a, id)?)?;
    Ok(q.algebra.with_meta(json!({"family": "psl", "m": m, "n": n})))
}

/// Gram blocks of the ortho-symplectic form on `2m | odd`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OspForm {
    pub m: usize,
    pub odd: usize,
    pub j: Matrix,
    pub j_s: Matrix,
    pub j_o: Matrix,
}

impl OspForm {
    pub fn new(ctx: FieldCtx, m: usize, odd: usize) -> Self {
        let mut j_s = Matrix::zeros(ctx, 2 * m, 2 * m);
        for i in 0..m {
            j_s.set(i, m + i, ctx.one());
            j_s.set(m + i, i, ctx.from_i64(-1));
        }
        let h = odd / 2;
        let mut j_o = Matrix::zeros(ctx, odd, odd);
        for i in 0..h {
            j_o.set(i, h + i, ctx.one());
            j_o.set(h + i, i, ctx.one());
        }
        if odd % 2 == 1 {
            j_o.set(odd - 1, odd - 1, ctx.one());
        }
        let j = block_diag(ctx, &j_s, &j_o);
        OspForm { m, odd, j, j_s, j_o }
    }
}

/// `spo(2m | odd)`: even part `sp_{2m} ⊕ so_{odd}`, odd part the matrices
/// `[[0, B], [J_o Bᵗ J_s, 0]]`.
pub fn spo(m: usize, odd: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    if m == 0 || odd == 0 {
        return Err(ConstructionError::InvalidParameter("spo needs m >= 1 and odd >= 1".into()));
    }
    let form = OspForm::new(ctx, m, odd);
    let zs = Matrix::zeros(ctx, 2 * m, 2 * m);
    let zo = Matrix::zeros(ctx, odd, odd);
    let mut elems = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let mut a = Matrix::zeros(ctx, 2 * m, 2 * m);
            a.set(i, j, ctx.one());
            a.set(m + j, m + i, ctx.from_i64(-1));
            elems.push(SuperMatrix::new(lbl("a", m, i, j), Parity::Even, block_diag(ctx, &a, &zo)));
        }
    }
    for (prefix, off_r, off_c) in [("b", 0, m), ("c", m, 0)] {
        for i in 0..m {
            for j in i..m {
                let mut x = Matrix::zeros(ctx, 2 * m, 2 * m);
                x.set(off_r + i, off_c + j, ctx.one());
                x.set(off_r + j, off_c + i, ctx.one());
                elems.push(SuperMatrix::new(lbl(prefix, m, i, j), Parity::Even, block_diag(ctx, &x, &zo)));
            }
        }
    }
    for i in 0..odd {
        for j in i + 1..odd {
            let s = Matrix::unit(ctx, odd, i, j).sub(&Matrix::unit(ctx, odd, j, i))?;
            let d = form.j_o.mul(&s)?;
            elems.push(SuperMatrix::new(lbl("o", odd, i, j), Parity::Even, block_diag(ctx, &zs, &d)));
        }
    }
    for i in 0..2 * m {
        for j in 0..odd {
            let b = rect_unit(ctx, 2 * m, odd, i, j);
            let c = form.j_o.mul(&b.transpose())?.mul(&form.j_s)?;
            elems.push(SuperMatrix::new(lbl("B", 2 * m + odd, i, j), Parity::Odd, block_off(ctx, &b, &c)));
        }
    }
    matrix_superalgebra(ctx, &elems, json!({"family": "spo", "m": m, "odd": odd}), true)
}

fn periplectic_elems(ctx: FieldCtx, n: usize) -> Vec<SuperMatrix> {
    let z = Matrix::zeros(ctx, n, n);
    let mut elems = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let a = Matrix::unit(ctx, n, i, j);
            let d = a.transpose().neg();
            elems.push(SuperMatrix::new(lbl("A", n, i, j), Parity::Even, block_diag(ctx, &a, &d)));
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut b = Matrix::unit(ctx, n, i, j);
            b.set(j, i, ctx.one());
            elems.push(SuperMatrix::new(lbl("B", n, i, j), Parity::Odd, block_off(ctx, &b, &z)));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut c = Matrix::unit(ctx, n, i, j);
            c.set(j, i, ctx.from_i64(-1));
            elems.push(SuperMatrix::new(lbl("C", n, i, j), Parity::Odd, block_off(ctx, &z, &c)));
        }
    }
    elems
}

/// `p(n)`: `[[A, B], [C, -Aᵗ]]` with `B` symmetric and `C` skew.
pub fn periplectic(n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::InvalidParameter("periplectic needs n >= 2".into()));
    }
    matrix_superalgebra(ctx, &periplectic_elems(ctx, n), json!({"family": "periplectic", "n": n}), true)
}

/// `[p(n), p(n)]`.
pub fn periplectic_derived(n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    let p = periplectic(n, ctx)?;
    let d = p.derived_subalgebra();
    Ok(p.subalgebra(&d)?.with_meta(json!({"family": "periplectic_derived", "n": n})))
}

/// `q(n)` as pairs `(A|B)`, i.e. `[[A, B], [B, A]]` inside `gl(n|n)`.
fn queer_elems(ctx: FieldCtx, n: usize, traceless_odd: bool) -> Vec<SuperMatrix> {
    let mut elems = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let a = Matrix::unit(ctx, n, i, j);
            elems.push(SuperMatrix::new(lbl("A", n, i, j), Parity::Even, block_diag(ctx, &a, &a)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if traceless_odd && i == j {
                continue;
            }
            let b = Matrix::unit(ctx, n, i, j);
            elems.push(SuperMatrix::new(lbl("B", n, i, j), Parity::Odd, block_off(ctx, &b, &b)));
        }
    }
    if traceless_odd {
        for k in 0..n - 1 {
            let mut b = Matrix::unit(ctx, n, k, k);
            b.set(k + 1, k + 1, ctx.from_i64(-1));
            elems.push(SuperMatrix::new(format!("Bh{}", k + 1), Parity::Odd, block_off(ctx, &b, &b)));
        }
    }
    elems
}

pub fn queer(n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::InvalidParameter("queer needs n >= 2".into()));
    }
    matrix_superalgebra(ctx, &queer_elems(ctx, n, false), json!({"family": "queer", "n": n}), true)
}

fn queer_mod_scalars(n: usize, ctx: FieldCtx, traceless_odd: bool) -> Result<LieSuperalgebra, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::InvalidParameter("queer needs n >= 2".into()));
    }
    let elems = queer_elems(ctx, n, traceless_odd);
    let a = matrix_superalgebra(ctx, &elems, serde_json::Value::Null, true)?;
    let mut id = vec![ctx.zero(); a.dim()];
    for i in 0..n {
        id[i * n + i] = ctx.one();
    }
    Ok(a.quotient(&scalar_line(&a, id)?)?.algebra)
}

/// `q(n)` modulo the even scalars.
pub fn pq(n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    Ok(queer_mod_scalars(n, ctx, false)?.with_meta(json!({"family": "pq", "n": n})))
}

/// `(pgl_n | sl_n)` inside `pq(n)`.
pub fn psq(n: usize, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
    Ok(queer_mod_scalars(n, ctx, true)?.with_meta(json!({"family": "psq", "n": n})))
}

/// The pair `(PGL_n, Mat_n)` with conjugation action and `[B, B'] = BB' + B'B`.
/// Group generators are the root subgroups `I + t E_ij`, labelled `X_ij`.
pub fn pq_pair(n: usize, ctx: FieldCtx) -> Result<HCPair, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::InvalidParameter("pq pair needs n >= 2".into()));
    }
    let gl_basis: Vec<Matrix> = (0..n * n).map(|k| Matrix::unit(ctx, n, k / n, k % n)).collect();
    let elems: Vec<SuperMatrix> =
        gl_basis.iter().enumerate().map(|(k, e)| SuperMatrix::new(lbl("E", n, k / n, k % n), Parity::Even, e.clone())).collect();
    let gln = Arc::new(matrix_superalgebra(ctx, &elems, serde_json::Value::Null, true)?);
    let mut id = vec![ctx.zero(); n * n];
    for i in 0..n {
        id[i * n + i] = ctx.one();
    }
    let line = Subspace::from_vectors(ctx, n * n, vec![id])?;
    let q = gln.quotient(&SuperIdeal { even: line.clone(), odd: Subspace::zero(ctx, 0) })?;
    let pgl = Arc::new(q.algebra.clone().with_meta(json!({"family": "pgl", "m": n, "n": 0})));

    let generators: Vec<(String, Matrix)> =
        (0..n * n).filter(|k| k / n != k % n).map(|k| (lbl("X_", n, k / n, k % n), gl_basis[k].clone())).collect();
    let gl_adj_fams = adjoint_families(ctx, &gl_basis, &generators)?;
    let labels = gln.basis().iter().map(|b| b.label.clone()).collect();
    let gl_adj = GModule::new(ctx, labels, Some(gln.clone()), gln.ad_matrices().to_vec(), gl_adj_fams)?;
    let pgl_adj = gl_adj.quotient_module(&line)?;

    // Mat_n with the same elementary basis; ad of the kept gl elements
    let coord = Coordinatizer::new(ctx, n * n, &gl_basis.iter().map(flatten).collect::<Vec<_>>())?;
    let lie: Vec<Matrix> = q.kept.iter().map(|&k| gln.ad(k).clone()).collect();
    let odd_fams = generators
        .iter()
        .map(|(l, x)| conjugation_family(ctx, l, x, &gl_basis, &coord))
        .collect::<Result<Vec<_>, _>>()?;
    let odd_labels = (0..n * n).map(|k| lbl("B", n, k / n, k % n)).collect();
    let odd = GModule::new(ctx, odd_labels, Some(pgl.clone()), lie, odd_fams)?;

    let mut entries = Vec::new();
    for a in 0..n * n {
        for b in a..n * n {
            let x = gl_basis[a].mul(&gl_basis[b])?.add(&gl_basis[b].mul(&gl_basis[a])?)?;
            if x.is_zero() {
                continue;
            }
            let v = q.project(&flatten(&x))?;
            let sp = to_sparse(ctx, v);
            if !sp.is_empty() {
                entries.push((a, b, sp));
            }
        }
    }
    let meta = json!({"family": "pq_pair", "n": n, "assumed": ["PGL_n is almost-simple"]});
    Ok(assemble_pair(pgl, pgl_adj.families().to_vec(), odd, &entries, meta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::{SDim, SimplicityOptions};

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn derived_p2_has_the_sl2_plus_symmetric_ideal() {
        for p in [3, 5, 7] {
            let a = periplectic_derived(2, fp(p)).unwrap();
            assert_eq!(a.dims(), SDim::new(3, 4));
            let keep: Vec<Vec<Scalar>> =
                (0..a.dim()).filter(|&i| !a.label(i).starts_with('C')).map(|i| a.unit(i)).collect();
            let full = Subspace::from_vectors(a.ctx(), a.dim(), keep).unwrap();
            let ideal = SuperIdeal::from_full(&a, &full).unwrap();
            assert_eq!(ideal.dims(), SDim::new(3, 3));
            assert!(a.is_ideal(&ideal));
        }
    }

    #[test]
    fn dimension_formulas() {
        let q = FieldCtx::rationals();
        assert_eq!(gl(2, 1, q).unwrap().dims(), SDim::new(5, 4));
        assert_eq!(sl(2, 1, q).unwrap().dims(), SDim::new(4, 4));
        assert_eq!(spo(1, 3, q).unwrap().dims(), SDim::new(6, 6));
        assert_eq!(spo(2, 5, fp(5)).unwrap().dims(), SDim::new(20, 20));
        assert_eq!(spo(1, 4, fp(7)).unwrap().dims(), SDim::new(9, 8));
        assert_eq!(periplectic(2, q).unwrap().dims(), SDim::new(4, 4));
        assert_eq!(periplectic_derived(2, fp(5)).unwrap().dims(), SDim::new(3, 4));
        assert_eq!(queer(3, q).unwrap().dims(), SDim::new(9, 9));
        assert_eq!(pq(3, fp(7)).unwrap().dims(), SDim::new(8, 9));
        assert_eq!(psq(3, fp(7)).unwrap().dims(), SDim::new(8, 8));
        assert_eq!(pgl(4, 1, fp(3)).unwrap().dims(), SDim::new(16, 8));
        assert_eq!(psl(2, 2, q).unwrap().dims(), SDim::new(6, 8));
    }

    #[test]
    fn psl_needs_identity_inside() {
        assert_eq!(psl(2, 1, FieldCtx::rationals()).unwrap_err(), ConstructionError::CenterNotInside { m: 2, n: 1, p: 0 });
        assert!(psl(4, 1, fp(3)).is_ok());
    }

    #[test]
    fn spo_elements_preserve_the_form() {
        let ctx = fp(7);
        let form = OspForm::new(ctx, 2, 3);
        assert_eq!(form.j.nrows(), 7);
        // odd elements satisfy J_s B + Cᵗ J_o = 0
        let b = rect_unit(ctx, 4, 3, 1, 2);
        let c = form.j_o.mul(&b.transpose()).unwrap().mul(&form.j_s).unwrap();
        let lhs = form.j_s.mul(&b).unwrap().add(&c.transpose().mul(&form.j_o).unwrap()).unwrap();
        assert!(lhs.is_zero());
    }

    #[test]
    fn sl33_over_f5() {
        let ctx = fp(5);
        let a = sl(3, 3, ctx).unwrap();
        let v = a.is_graded_simple(SimplicityOptions::default());
        assert_eq!(v.summary(), "NotSimple, witness dim 1|0");
        assert!(psl(3, 3, ctx).unwrap().is_graded_simple(SimplicityOptions::default()).is_simple());
    }

    #[test]
    fn psq2_odd_part_is_abelian_ideal() {
        let a = psq(2, fp(5)).unwrap();
        assert_eq!(a.dims(), SDim::new(3, 3));
        for &i in a.odd_indices() {
            for &j in a.odd_indices() {
                assert!(a.bracket_basis(i, j).is_empty());
            }
        }
        let odd = SuperIdeal { even: Subspace::zero(a.ctx(), 3), odd: Subspace::full(a.ctx(), 3) };
        assert!(a.is_ideal(&odd));
    }

    #[test]
    fn psq3_odd_bracket_has_e11_plus_e22() {
        let ctx = fp(7);
        let a = psq(3, ctx).unwrap();
        let x = a.index_of("B12").unwrap();
        let y = a.index_of("B21").unwrap();
        assert!(!a.bracket_basis(x, y).is_empty());
    }

    #[test]
    fn pq_pair_quotients() {
        let ctx = fp(5);
        let p = pq_pair(3, ctx).unwrap();
        assert_eq!(p.total().dims(), SDim::new(8, 9));
        let trace: Vec<Scalar> = (0..9).map(|k| if k % 4 == 0 { ctx.one() } else { ctx.zero() }).collect();
        let sl3 = Matrix::from_rows(ctx, 9, vec![trace]).unwrap().kernel();
        let s = crate::hcpair::SubpairSpec {
            h_lie: Subspace::full(ctx, 8),
            h_generators: p.adjoint().families().iter().map(|f| f.label.clone()).collect(),
            w: sl3,
        };
        assert!(p.check_normality(&s).unwrap().all_pass());
        let q = p.quotient_pair(&s).unwrap();
        assert_eq!(q.total().dims(), SDim::new(0, 1));
        assert!(q.is_split());
    }
}
