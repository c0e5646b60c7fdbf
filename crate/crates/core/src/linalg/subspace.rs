use super::{LinalgError, Matrix};
use crate::field::{FieldCtx, Scalar};

/// A subspace of `k^n`, stored as the rows of its reduced row echelon basis.
/// Equal subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ctx: FieldCtx,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ctx: FieldCtx, ambient: usize) -> Self {
        Subspace { ctx, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ctx: FieldCtx, ambient: usize) -> Self {
        Matrix::identity(ctx, ambient).row_space()
    }

    /// Span of the given vectors.
    pub fn from_vectors(ctx: FieldCtx, ambient: usize, mut vectors: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch { expected: ambient, got: v.len() });
            }
        }
        let pivots = super::matrix::rref_in_place(ctx, &mut vectors, ambient);
        Ok(Subspace { ctx, ambient, basis: vectors, pivots })
    }

    /// Span of the coordinate vectors `e_i` for `i` in `indices`.
    pub fn coordinate(ctx: FieldCtx, ambient: usize, indices: &[usize]) -> Self {
        let vs = indices
            .iter()
            .map(|&i| {
                let mut v = vec![ctx.zero(); ambient];
                v[i] = ctx.one();
                v
            })
            .collect();
        Self::from_vectors(ctx, ambient, vs).expect("unit vectors have ambient length")
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis_rows(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn basis(&self) -> Matrix {
        Matrix::from_rows(self.ctx, self.ambient, self.basis.clone()).expect("rows have ambient length")
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots, in increasing order. The unit vectors
    /// on these coordinates span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&j| !is_pivot[j]).collect()
    }

    fn check_len(&self, n: usize) -> Result<(), LinalgError> {
        if n != self.ambient {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient, got: n });
        }
        Ok(())
    }

    /// Remainder of `v` after eliminating the pivot coordinates; zero iff
    /// `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        self.check_len(v.len())?;
        let ctx = self.ctx;
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let f = w[p].clone();
            if ctx.is_zero(&f) {
                continue;
            }
            for (x, y) in w.iter_mut().zip(row) {
                if !ctx.is_zero(y) {
                    *x = ctx.sub(x, &ctx.mul(&f, y));
                }
            }
        }
        Ok(w)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        Ok(self.reduce(v)?.iter().all(|x| self.ctx.is_zero(x)))
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    fn check_same(&self, other: &Subspace) -> Result<(), LinalgError> {
        self.check_len(other.ambient)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_same(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::from_vectors(self.ctx, self.ambient, vs)
    }

    /// Vectors orthogonal to the subspace under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ctx, self.ambient);
        }
        self.basis().kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_same(other)?;
        let mut constraints = self.annihilator().basis;
        constraints.extend(other.annihilator().basis);
        if constraints.is_empty() {
            return Ok(Subspace::full(self.ctx, self.ambient));
        }
        Ok(Matrix::from_rows(self.ctx, self.ambient, constraints)?.kernel())
    }

    pub fn leq(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_same(other)?;
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image of the subspace under `op` acting on column vectors.
    pub fn image(&self, op: &Matrix) -> Result<Subspace, LinalgError> {
        self.check_len(op.ncols())?;
        let vs = self.basis.iter().map(|v| op.mul_vec(v)).collect::<Result<Vec<_>, _>>()?;
        Self::from_vectors(self.ctx, op.nrows(), vs)
    }

    pub fn is_invariant(&self, op: &Matrix) -> Result<bool, LinalgError> {
        for v in &self.basis {
            if !self.contains(&op.mul_vec(v)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Matrix {
    /// Span of the rows.
    pub fn row_space(&self) -> Subspace {
        Subspace::from_vectors(self.ctx(), self.ncols(), self.to_rows()).expect("rows have ncols entries")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::from_characteristic(p).unwrap()
    }

    fn random_subspace(ctx: FieldCtx, n: usize, k: usize, rng: &mut ChaCha8Rng) -> Subspace {
        let vs = (0..k).map(|_| (0..n).map(|_| ctx.from_i64(rng.gen_range(0..5))).collect()).collect();
        Subspace::from_vectors(ctx, n, vs).unwrap()
    }

    #[test]
    fn lattice_trivia() {
        let ctx = f(3);
        let e1 = Subspace::coordinate(ctx, 2, &[0]);
        let e2 = Subspace::coordinate(ctx, 2, &[1]);
        assert!(e1.intersect(&e2).unwrap().is_zero());
        let z = Subspace::zero(ctx, 2);
        assert_eq!(e1.sum(&z).unwrap(), e1);
        assert_eq!(e1.intersect(&Subspace::full(ctx, 2)).unwrap(), e1);
        assert!(e1.leq(&Subspace::full(ctx, 2)).unwrap());
        assert!(!e1.leq(&e2).unwrap());
        assert_eq!(e1.sum(&Subspace::zero(ctx, 3)), Err(LinalgError::DimensionMismatch { expected: 2, got: 3 }));
    }

    #[test]
    fn modular_dimension_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ctx = f(5);
        for _ in 0..200 {
            let u = random_subspace(ctx, 5, 3, &mut rng);
            let v = random_subspace(ctx, 5, 3, &mut rng);
            let s = u.sum(&v).unwrap();
            let i = u.intersect(&v).unwrap();
            assert_eq!(u.dim() + v.dim(), s.dim() + i.dim());
            assert!(i.leq(&u).unwrap() && i.leq(&v).unwrap());
            assert!(u.leq(&s).unwrap() && v.leq(&s).unwrap());
        }
    }

    #[test]
    fn canonical_representation() {
        let ctx = f(7);
        let a = Subspace::from_vectors(ctx, 3, vec![vec![ctx.from_i64(2), ctx.from_i64(4), ctx.zero()], vec![ctx.zero(), ctx.one(), ctx.one()]]).unwrap();
        let b = Subspace::from_vectors(ctx, 3, vec![vec![ctx.one(), ctx.from_i64(3), ctx.one()], vec![ctx.one(), ctx.from_i64(2), ctx.zero()]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coordinates_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ctx = f(0);
        let u = random_subspace(ctx, 6, 3, &mut rng);
        let v: Vec<Scalar> = u.basis_rows()[0].iter().zip(&u.basis_rows()[2]).map(|(a, b)| ctx.add(a, &ctx.mul(b, &ctx.from_i64(-3)))).collect();
        let c = u.coordinates(&v).unwrap().unwrap();
        assert_eq!(c, vec![ctx.one(), ctx.zero(), ctx.from_i64(-3)]);
    }
}
