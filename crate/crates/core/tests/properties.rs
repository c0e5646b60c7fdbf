use std::sync::OnceLock;

use proptest::prelude::*;

use superlie::constructions::{d21, periplectic, pq, psq, sl, sl2_symn_pair, spo, D21Params};
use superlie::field::{FieldCtx, Scalar};
use superlie::linalg::{Matrix, Subspace};
use superlie::superalg::{LieSuperalgebra, SDim};

fn ctx_for(p: u64) -> FieldCtx {
    FieldCtx::from_characteristic(p).unwrap()
}

fn vectors(ctx: FieldCtx, n: usize, raw: &[Vec<i64>]) -> Vec<Vec<Scalar>> {
    raw.iter().map(|r| r.iter().take(n).map(|&x| ctx.from_i64(x)).collect()).collect()
}

fn subspace(ctx: FieldCtx, n: usize, raw: &[Vec<i64>]) -> Subspace {
    Subspace::from_vectors(ctx, n, vectors(ctx, n, raw)).unwrap()
}

fn raw_vectors(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..5, n), 0..=n + 1)
}

fn field() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![0u64, 3, 5, 7, 11])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn modular_law_dimension_identity(p in field(), (n, a, b) in (1usize..8).prop_flat_map(|n| (Just(n), raw_vectors(n), raw_vectors(n)))) {
        let ctx = ctx_for(p);
        let u = subspace(ctx, n, &a);
        let w = subspace(ctx, n, &b);
        let s = u.sum(&w).unwrap();
        let i = u.intersect(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(i.leq(&u).unwrap() && i.leq(&w).unwrap());
        prop_assert!(u.leq(&s).unwrap() && w.leq(&s).unwrap());
    }

    #[test]
    fn modular_law_inclusion_form(p in field(), (n, a, b, c) in (1usize..7).prop_flat_map(|n| (Just(n), raw_vectors(n), raw_vectors(n), raw_vectors(n)))) {
        let ctx = ctx_for(p);
        let x = subspace(ctx, n, &a);
        let y = subspace(ctx, n, &b);
        let z = x.sum(&subspace(ctx, n, &c)).unwrap();
        // x <= z, so x + (y ∩ z) = (x + y) ∩ z
        let left = x.sum(&y.intersect(&z).unwrap()).unwrap();
        let right = x.sum(&y).unwrap().intersect(&z).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rank_plus_nullity(p in field(), (r, c, rows) in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(prop::collection::vec(-4i64..5, c), r)))) {
        prop_assert_eq!(rows.len(), r);
        let ctx = ctx_for(p);
        let m = Matrix::from_rows(ctx, c, vectors(ctx, c, &rows)).unwrap();
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.dim(), c);
        for v in k.basis_rows() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| ctx.is_zero(x)));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn annihilator_is_an_involution(p in field(), (n, a) in (1usize..7).prop_flat_map(|n| (Just(n), raw_vectors(n)))) {
        let ctx = ctx_for(p);
        let u = subspace(ctx, n, &a);
        let ann = u.annihilator();
        prop_assert_eq!(ann.dim() + u.dim(), n);
        prop_assert_eq!(ann.annihilator(), u);
    }
}

fn algebras() -> &'static Vec<LieSuperalgebra> {
    static CELL: OnceLock<Vec<LieSuperalgebra>> = OnceLock::new();
    CELL.get_or_init(|| {
        let f = |p| FieldCtx::prime(p).unwrap();
        let q = FieldCtx::rationals();
        vec![
            sl(2, 1, f(3)).unwrap(),
            sl(3, 3, f(5)).unwrap(),
            spo(1, 3, f(7)).unwrap(),
            periplectic(2, f(5)).unwrap(),
            pq(3, f(7)).unwrap(),
            psq(2, q).unwrap(),
            d21(&D21Params::from_i64(f(5), [1, 2, 2]), f(5)).unwrap(),
            sl2_symn_pair(3, &f(3).one(), f(3)).unwrap().total().clone(),
        ]
    })
}

fn algebra_and_seed() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (0..algebras().len()).prop_flat_map(|k| (Just(k), prop::collection::vec(-2i64..3, algebras()[k].dim())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ideal_closure_is_idempotent_and_closed((k, seed) in algebra_and_seed()) {
        let a = &algebras()[k];
        let ctx = a.ctx();
        let v: Vec<Scalar> = seed.iter().map(|&x| ctx.from_i64(x)).collect();
        let i = a.ideal_closure(std::slice::from_ref(&v)).unwrap();
        prop_assert!(a.is_ideal(&i));
        prop_assert_eq!(&a.ideal_closure(&i.basis_vectors(a)).unwrap(), &i);
        for x in i.basis_vectors(a) {
            for j in 0..a.dim() {
                prop_assert!(i.to_full(a).contains(&a.bracket(&a.unit(j), &x).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn quotient_dimensions_and_projection((k, seed) in algebra_and_seed()) {
        let a = &algebras()[k];
        let ctx = a.ctx();
        let v: Vec<Scalar> = seed.iter().map(|&x| ctx.from_i64(x)).collect();
        let i = a.ideal_closure(&[v]).unwrap();
        let q = a.quotient(&i).unwrap();
        let (ad, id) = (a.dims(), i.dims());
        prop_assert_eq!(q.algebra.dims(), SDim::new(ad.even - id.even, ad.odd - id.odd));
        // the projection is a homomorphism on basis pairs
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                let lhs = q.project(&a.bracket(&a.unit(x), &a.unit(y)).unwrap()).unwrap();
                let px = q.project(&a.unit(x)).unwrap();
                let py = q.project(&a.unit(y)).unwrap();
                prop_assert_eq!(lhs, q.algebra.bracket(&px, &py).unwrap());
            }
        }
    }

    #[test]
    fn bilinearity_of_the_bracket((k, s1) in algebra_and_seed(), s2 in prop::collection::vec(-2i64..3, 40), c in -3i64..4) {
        let a = &algebras()[k];
        let ctx = a.ctx();
        let n = a.dim();
        let x: Vec<Scalar> = s1.iter().map(|&t| ctx.from_i64(t)).collect();
        let y: Vec<Scalar> = s2.iter().cycle().take(n).map(|&t| ctx.from_i64(t)).collect();
        let c = ctx.from_i64(c);
        let cx: Vec<Scalar> = x.iter().map(|t| ctx.mul(&c, t)).collect();
        let lhs = a.bracket(&cx, &y).unwrap();
        let rhs: Vec<Scalar> = a.bracket(&x, &y).unwrap().iter().map(|t| ctx.mul(&c, t)).collect();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn every_listed_algebra_is_valid() {
    for a in algebras() {
        assert!(a.validate_jacobi().holds);
        if a.ctx().characteristic() != 3 {
            assert!(a.validate_cubic_odd().holds);
        }
    }
}
