use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::LinalgError;
use crate::field::{FieldCtx, Scalar};

/// Dense row-major matrix over a [`FieldCtx`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form with rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix { ctx, rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_rows(ctx: FieldCtx, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { ctx, rows: r, cols, data })
    }

    pub fn from_i64(ctx: FieldCtx, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| ctx.from_i64(x))
            })
            .collect();
        Matrix { ctx, rows: rows.len(), cols, data }
    }

    /// Matrix with a single nonzero entry `1` at `(i, j)`.
    pub fn unit(ctx: FieldCtx, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        m.set(i, j, ctx.one());
        m
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ctx.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn same_shape(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ctx.add(a, b)).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ctx.sub(a, b)).collect();
        Ok(self.with_data(data))
    }

    fn with_data(&self, data: Vec<Scalar>) -> Matrix {
        Matrix { ctx: self.ctx, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| self.ctx.mul(a, c)).collect();
        self.with_data(data)
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| self.ctx.neg(a)).collect();
        self.with_data(data)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let ctx = self.ctx;
        let mut out = Matrix::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ctx.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !ctx.is_zero(b) {
                        let v = ctx.add(out.get(i, j), &ctx.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let ctx = self.ctx;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !ctx.is_zero(a) && !ctx.is_zero(b) {
                        acc = ctx.add(&acc, &ctx.mul(a, b));
                    }
                }
                acc
            })
            .collect())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let ctx = self.ctx;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(ctx, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if ctx.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, ctx.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { ctx: self.ctx, rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn rref(&self) -> Rref {
        let mut rows = self.to_rows();
        let pivots = rref_in_place(self.ctx, &mut rows, self.cols);
        let rank = pivots.len();
        let matrix = Matrix::from_rows(self.ctx, self.cols, rows).expect("row length preserved");
        Rref { matrix, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Right kernel `{v : self · v = 0}`.
    pub fn kernel(&self) -> super::Subspace {
        let ctx = self.ctx;
        let n = self.cols;
        let mut rows = self.to_rows();
        let pivots = rref_in_place(ctx, &mut rows, n);
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&j| !is_pivot[j]) {
            let mut v = vec![ctx.zero(); n];
            v[free] = ctx.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = ctx.neg(&rows[r][free]);
            }
            basis.push(v);
        }
        super::Subspace::from_vectors(ctx, n, basis).expect("kernel vectors have ambient length")
    }

    /// One solution of `self · x = b`, if the system is consistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let ctx = self.ctx;
        let n = self.cols;
        let mut rows: Vec<Vec<Scalar>> = self
            .rows()
            .zip(b)
            .map(|(r, bi)| {
                let mut v = r.to_vec();
                v.push(bi.clone());
                v
            })
            .collect();
        let pivots = rref_in_place(ctx, &mut rows, n + 1);
        if pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut x = vec![ctx.zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r][n].clone();
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let ctx = self.ctx;
        let n = self.rows;
        let mut rows: Vec<Vec<Scalar>> = self
            .rows()
            .enumerate()
            .map(|(i, r)| {
                let mut v = r.to_vec();
                v.extend((0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }));
                v
            })
            .collect();
        let pivots = rref_in_place(ctx, &mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let inv = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_rows(ctx, n, inv).expect("n columns"))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rows() {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Work size above which the row-update loop runs on the rayon pool.
const PAR_THRESHOLD: usize = 1 << 16;

/// Gauss-Jordan elimination with leftmost pivots. Rows are truncated to the
/// rank and the pivot columns returned.
pub(crate) fn rref_in_place(ctx: FieldCtx, rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    match ctx {
        FieldCtx::Prime(p) => {
            let mut raw: Vec<Vec<u32>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| match x {
                            Scalar::Fp(v) => *v,
                            Scalar::Q(_) => panic!("rational entry in prime-field matrix"),
                        })
                        .collect()
                })
                .collect();
            let pivots = rref_fp(p, &mut raw, ncols);
            *rows = raw.into_iter().map(|r| r.into_iter().map(Scalar::Fp).collect()).collect();
            pivots
        }
        FieldCtx::Rationals => {
            let mut raw: Vec<Vec<BigRational>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| match x {
                            Scalar::Q(q) => (**q).clone(),
                            Scalar::Fp(_) => panic!("prime-field entry in rational matrix"),
                        })
                        .collect()
                })
                .collect();
            let pivots = rref_q(&mut raw, ncols);
            *rows = raw
                .into_iter()
                .map(|r| r.into_iter().map(|q| Scalar::Q(Box::new(q))).collect())
                .collect();
            pivots
        }
    }
}

fn inv_mod(x: u64, p: u64) -> u64 {
    let (mut a, mut b) = (x as i64, p as i64);
    let (mut u, mut v) = (1i64, 0i64);
    while b != 0 {
        let q = a / b;
        (a, b) = (b, a - q * b);
        (u, v) = (v, u - q * v);
    }
    u.rem_euclid(p as i64) as u64
}

pub(crate) fn rref_fp(p: u32, rows: &mut Vec<Vec<u32>>, ncols: usize) -> Vec<usize> {
    let p64 = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = inv_mod(rows[r][c] as u64, p64);
        for x in rows[r][c..].iter_mut() {
            *x = ((*x as u64 * inv) % p64) as u32;
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        let update = |row: &mut Vec<u32>| {
            let f = row[c];
            if f == 0 {
                return;
            }
            let nf = p64 - f as u64;
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if y != 0 {
                    *x = ((*x as u64 + nf * y as u64) % p64) as u32;
                }
            }
        };
        if rows.len() * (ncols - c) >= PAR_THRESHOLD {
            rows.par_iter_mut().for_each(|row| {
                if !row.is_empty() {
                    update(row)
                }
            });
        } else {
            for row in rows.iter_mut() {
                if !row.is_empty() {
                    update(row);
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn rref_q(rows: &mut Vec<Vec<BigRational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        let update = |row: &mut Vec<BigRational>| {
            if row.is_empty() || row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        };
        if rows.len() * (ncols - c) >= PAR_THRESHOLD / 16 {
            rows.par_iter_mut().for_each(update);
        } else {
            rows.iter_mut().for_each(update);
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}
