//! Sparse multivariate polynomials of total degree at most three.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{FieldCtx, FieldError, Scalar};

pub const MAX_DEGREE: usize = 3;

/// Exponent vector of a monomial, one entry per variable.
pub type Monomial = Vec<u8>;

/// Outcome of [`MultiPoly::is_zero`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroCheck {
    Zero,
    NonZero { monomial: Monomial, coefficient: Scalar },
}

impl ZeroCheck {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroCheck::Zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    ctx: FieldCtx,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Scalar>,
}

fn degree_of(m: &[u8]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

impl MultiPoly {
    pub fn zero(ctx: FieldCtx, vars: Vec<String>) -> Self {
        MultiPoly { ctx, vars, terms: BTreeMap::new() }
    }

    /// Variables named `{prefix}0, {prefix}1, ...`.
    pub fn zero_indexed(ctx: FieldCtx, prefix: &str, arity: usize) -> Self {
        Self::zero(ctx, (0..arity).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn constant(ctx: FieldCtx, vars: Vec<String>, c: Scalar) -> Self {
        let n = vars.len();
        let mut p = Self::zero(ctx, vars);
        p.add_term(vec![0; n], c).expect("constant has degree 0");
        p
    }

    pub fn var(ctx: FieldCtx, vars: Vec<String>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(ctx, vars);
        p.add_term(e, ctx.one()).expect("variable has degree 1");
        p
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &[u8]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| degree_of(m)).max()
    }

    /// Adds `c` times the monomial `m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) -> Result<(), FieldError> {
        if m.len() != self.arity() {
            return Err(FieldError::ArityMismatch { expected: self.arity(), got: m.len() });
        }
        let d = degree_of(&m);
        if d > MAX_DEGREE {
            return Err(FieldError::DegreeTooHigh(d));
        }
        if self.ctx.is_zero(&c) {
            return Ok(());
        }
        let ctx = self.ctx;
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = ctx.add(old, &c);
                if ctx.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
        Ok(())
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<(), FieldError> {
        if self.ctx != other.ctx {
            return Err(FieldError::ContextMismatch);
        }
        if self.arity() != other.arity() {
            return Err(FieldError::ArityMismatch { expected: self.arity(), got: other.arity() });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, FieldError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, FieldError> {
        self.add(&other.scale(&self.ctx.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        let mut out = Self::zero(self.ctx, self.vars.clone());
        for (m, a) in &self.terms {
            let v = self.ctx.mul(a, c);
            if !self.ctx.is_zero(&v) {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    /// Product; fails with `DegreeTooHigh` if a product monomial exceeds degree 3.
    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, FieldError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.ctx, self.vars.clone());
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
                out.add_term(m, self.ctx.mul(a, b))?;
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, FieldError> {
        if point.len() != self.arity() {
            return Err(FieldError::ArityMismatch { expected: self.arity(), got: point.len() });
        }
        let ctx = self.ctx;
        let mut acc = ctx.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                t = ctx.mul(&t, &ctx.pow(x, e as u64));
            }
            acc = ctx.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Coefficientwise zero test. On failure reports the first nonzero term
    /// in monomial order.
    pub fn is_zero(&self) -> ZeroCheck {
        match self.terms.iter().find(|(_, c)| !self.ctx.is_zero(c)) {
            None => ZeroCheck::Zero,
            Some((m, c)) => ZeroCheck::NonZero { monomial: m.clone(), coefficient: c.clone() },
        }
    }

    pub fn format_monomial(&self, m: &[u8]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{e}", self.vars[i]) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| degree_of(b.0).cmp(&degree_of(a.0)).then(b.0.cmp(a.0)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let coeff = match self.ctx.to_symmetric_i64(c) {
                Some(v) => v.to_string(),
                None => format!("({c})"),
            };
            let (sign, mag) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mono = self.format_monomial(m);
            if mono == "1" {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::from_characteristic(p).unwrap()
    }

    #[test]
    fn eval_square() {
        let ctx = f(5);
        let x = MultiPoly::zero_indexed(ctx, "x", 1);
        let mut sq = x.clone();
        sq.add_term(vec![2], ctx.one()).unwrap();
        assert_eq!(sq.eval(&[ctx.from_i64(3)]).unwrap(), ctx.from_i64(4));
        assert_eq!(x.eval(&[ctx.from_i64(3)]).unwrap(), ctx.zero());
        assert!(sq.eval(&[]).is_err());
    }

    #[test]
    fn cubic_vanishes_mod_three() {
        for (p, zero) in [(3, true), (0, false)] {
            let ctx = f(p);
            let mut g = MultiPoly::zero_indexed(ctx, "a", 4);
            g.add_term(vec![0, 3, 0, 0], ctx.from_i64(6)).unwrap();
            g.add_term(vec![1, 1, 1, 0], ctx.from_i64(-9)).unwrap();
            g.add_term(vec![2, 0, 0, 1], ctx.from_i64(3)).unwrap();
            assert_eq!(g.is_zero().is_zero(), zero);
        }
    }

    #[test]
    fn witness_reported() {
        let ctx = f(0);
        let mut g = MultiPoly::zero_indexed(ctx, "x", 1);
        g.add_term(vec![3], ctx.from_i64(3)).unwrap();
        assert_eq!(
            g.is_zero(),
            ZeroCheck::NonZero { monomial: vec![3], coefficient: ctx.from_i64(3) }
        );
        let mut h = MultiPoly::zero_indexed(f(3), "x", 1);
        h.add_term(vec![3], f(3).from_i64(3)).unwrap();
        assert!(h.is_zero().is_zero());
    }

    #[test]
    fn degree_cap_enforced() {
        let ctx = f(7);
        let x = MultiPoly::var(ctx, vec!["x".into()], 0);
        let x2 = x.mul(&x).unwrap();
        let x3 = x2.mul(&x).unwrap();
        assert_eq!(x3.degree(), Some(3));
        assert_eq!(x3.mul(&x), Err(FieldError::DegreeTooHigh(4)));
    }

    #[test]
    fn display_is_readable() {
        let ctx = f(0);
        let mut g = MultiPoly::zero_indexed(ctx, "a", 4);
        g.add_term(vec![0, 2, 0, 1], ctx.from_i64(6)).unwrap();
        g.add_term(vec![1, 0, 1, 1], ctx.from_i64(-3)).unwrap();
        g.add_term(vec![0, 1, 2, 0], ctx.from_i64(-3)).unwrap();
        assert_eq!(g.to_string(), "-3*a0*a2*a3 + 6*a1^2*a3 - 3*a1*a2^2");
    }
}
