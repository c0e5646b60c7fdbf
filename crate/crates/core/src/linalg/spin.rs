//! Invariant-subspace spinning and its dual, the largest invariant subspace
//! of a given space.

use std::collections::VecDeque;

use super::{LinalgError, Matrix, Subspace};
use crate::field::{FieldCtx, Scalar};

/// Incrementally built echelon basis. Rows are reduced against earlier rows
/// only, which is enough for membership tests in insertion order.
#[derive(Clone, Debug)]
pub struct Echelon {
    ctx: FieldCtx,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ctx: FieldCtx, ambient: usize) -> Self {
        Echelon { ctx, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn reduce(&self, v: &mut [Scalar]) {
        let ctx = self.ctx;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p].clone();
            if ctx.is_zero(&f) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                if !ctx.is_zero(y) {
                    *x = ctx.sub(x, &ctx.mul(&f, y));
                }
            }
        }
    }

    /// Adds `v` to the span. Returns the normalized new row when `v` was not
    /// already in it.
    pub fn insert(&mut self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let ctx = self.ctx;
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let p = w.iter().position(|x| !ctx.is_zero(x))?;
        let inv = ctx.inv(&w[p]).expect("pivot is nonzero");
        for x in w.iter_mut() {
            *x = ctx.mul(x, &inv);
        }
        self.rows.push(w.clone());
        self.pivots.push(p);
        Some(w)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.ctx.is_zero(x))
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::from_vectors(self.ctx, self.ambient, self.rows.clone()).expect("rows have ambient length")
    }
}

/// Smallest subspace containing `seeds` and stable under each operator, with
/// operators given as a callback `apply(op_index, v)`.
pub fn spin_with<F>(ctx: FieldCtx, ambient: usize, seeds: &[Vec<Scalar>], n_ops: usize, apply: F) -> Result<Subspace, LinalgError>
where
    F: Fn(usize, &[Scalar]) -> Vec<Scalar>,
{
    let mut ech = Echelon::new(ctx, ambient);
    let mut queue = VecDeque::new();
    for s in seeds {
        if s.len() != ambient {
            return Err(LinalgError::DimensionMismatch { expected: ambient, got: s.len() });
        }
        if let Some(row) = ech.insert(s) {
            queue.push_back(row);
        }
    }
    'outer: while let Some(v) = queue.pop_front() {
        for k in 0..n_ops {
            if ech.dim() == ambient {
                break 'outer;
            }
            let w = apply(k, &v);
            if let Some(row) = ech.insert(&w) {
                queue.push_back(row);
            }
        }
    }
    Ok(ech.to_subspace())
}

fn check_ops(ambient: usize, ops: &[Matrix]) -> Result<(), LinalgError> {
    for op in ops {
        if op.nrows() != ambient || op.ncols() != ambient {
            return Err(LinalgError::DimensionMismatch { expected: ambient, got: op.ncols().max(op.nrows()) });
        }
    }
    Ok(())
}

/// Smallest subspace containing the seeds and invariant under every operator.
pub fn invariant_closure(ctx: FieldCtx, ambient: usize, seeds: &[Vec<Scalar>], ops: &[Matrix]) -> Result<Subspace, LinalgError> {
    check_ops(ambient, ops)?;
    spin_with(ctx, ambient, seeds, ops.len(), |k, v| ops[k].mul_vec(v).expect("shape checked"))
}

/// Largest subspace of `k` stable under each operator (callback form).
pub fn largest_invariant_within_with<F>(k: &Subspace, n_ops: usize, apply: F) -> Result<Subspace, LinalgError>
where
    F: Fn(usize, &[Scalar]) -> Vec<Scalar>,
{
    let ctx = k.ctx();
    let n = k.ambient();
    let mut w = k.clone();
    loop {
        if w.is_zero() || w.is_full() || n_ops == 0 {
            return Ok(w);
        }
        let ann = w.annihilator();
        let images: Vec<Vec<Vec<Scalar>>> = w
            .basis_rows()
            .iter()
            .map(|b| (0..n_ops).map(|o| apply(o, b)).collect())
            .collect();
        // column (o, c) of row i holds <op_o(b_i), c>
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for o in 0..n_ops {
            for c in ann.basis_rows() {
                let col = images
                    .iter()
                    .map(|imgs| {
                        let img = &imgs[o];
                        if img.len() != n {
                            return Err(LinalgError::DimensionMismatch { expected: n, got: img.len() });
                        }
                        let mut acc = ctx.zero();
                        for (x, y) in img.iter().zip(c) {
                            if !ctx.is_zero(x) && !ctx.is_zero(y) {
                                acc = ctx.add(&acc, &ctx.mul(x, y));
                            }
                        }
                        Ok(acc)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                cols.push(col);
            }
        }
        // cols is the transpose of the constraint matrix: its kernel is the
        // set of coefficient vectors a with a·M = 0
        let mt = Matrix::from_rows(ctx, w.dim(), cols)?;
        let coeffs = mt.kernel();
        let vs: Vec<Vec<Scalar>> = coeffs
            .basis_rows()
            .iter()
            .map(|a| {
                let mut v = vec![ctx.zero(); n];
                for (ai, b) in a.iter().zip(w.basis_rows()) {
                    if ctx.is_zero(ai) {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = ctx.add(x, &ctx.mul(ai, y));
                    }
                }
                v
            })
            .collect();
        let next = Subspace::from_vectors(ctx, n, vs)?;
        if next.dim() == w.dim() {
            return Ok(w);
        }
        w = next;
    }
}

pub fn largest_invariant_within(k: &Subspace, ops: &[Matrix]) -> Result<Subspace, LinalgError> {
    check_ops(k.ambient(), ops)?;
    largest_invariant_within_with(k, ops.len(), |o, v| ops[o].mul_vec(v).expect("shape checked"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::from_characteristic(p).unwrap()
    }

    // nilpotent Jordan block and its transpose generate gl_n, so only 0 and
    // the full space are jointly invariant
    fn shift(ctx: FieldCtx, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n - 1 {
            m.set(i, i + 1, ctx.one());
        }
        m
    }

    #[test]
    fn closure_of_single_shift() {
        let ctx = f(5);
        let s = shift(ctx, 4);
        let e1 = Subspace::coordinate(ctx, 4, &[1]);
        let c = invariant_closure(ctx, 4, e1.basis_rows(), &[s.clone()]).unwrap();
        assert_eq!(c, Subspace::coordinate(ctx, 4, &[0, 1]));
        // idempotent
        assert_eq!(invariant_closure(ctx, 4, c.basis_rows(), &[s.clone()]).unwrap(), c);
        let both = invariant_closure(ctx, 4, e1.basis_rows(), &[s.clone(), s.transpose()]).unwrap();
        assert!(both.is_full());
    }

    #[test]
    fn closure_order_independent() {
        let ctx = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ops: Vec<Matrix> = (0..3)
            .map(|_| {
                let mut m = Matrix::zeros(ctx, 6, 6);
                for i in 0..6 {
                    for j in i..6 {
                        m.set(i, j, ctx.from_i64(rng.gen_range(0..7)));
                    }
                }
                m
            })
            .collect();
        let seed = vec![(0..6).map(|i| if i == 3 { ctx.one() } else { ctx.zero() }).collect::<Vec<_>>()];
        let a = invariant_closure(ctx, 6, &seed, &ops).unwrap();
        let mut shuffled = ops.clone();
        shuffled.shuffle(&mut rng);
        let b = invariant_closure(ctx, 6, &seed, &shuffled).unwrap();
        assert_eq!(a, b);
        for op in &ops {
            assert!(a.is_invariant(op).unwrap());
        }
    }

    #[test]
    fn largest_invariant_basics() {
        let ctx = f(3);
        let s = shift(ctx, 4);
        let z = Subspace::zero(ctx, 4);
        assert_eq!(largest_invariant_within(&z, &[s.clone()]).unwrap(), z);
        let inv = Subspace::coordinate(ctx, 4, &[0, 1]);
        assert_eq!(largest_invariant_within(&inv, &[s.clone()]).unwrap(), inv);
        let k = Subspace::coordinate(ctx, 4, &[0, 2, 3]);
        assert_eq!(largest_invariant_within(&k, &[s.clone()]).unwrap(), Subspace::coordinate(ctx, 4, &[0]));
    }

    #[test]
    fn largest_invariant_is_maximal() {
        let ctx = f(5);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = shift(ctx, 5);
        for _ in 0..30 {
            let vs = (0..3).map(|_| (0..5).map(|_| ctx.from_i64(rng.gen_range(0..5))).collect()).collect();
            let k = Subspace::from_vectors(ctx, 5, vs).unwrap();
            let w = largest_invariant_within(&k, &[s.clone()]).unwrap();
            assert!(w.leq(&k).unwrap());
            assert!(w.is_invariant(&s).unwrap());
            for v in k.basis_rows() {
                if !w.contains(v).unwrap() {
                    let mut seeds = w.basis_rows().to_vec();
                    seeds.push(v.clone());
                    let c = invariant_closure(ctx, 5, &seeds, &[s.clone()]).unwrap();
                    assert!(!c.leq(&k).unwrap());
                }
            }
        }
    }
}
