//! Exact sparse multivariate polynomials in up to three variables, and the
//! univariate machinery built on top of them.

mod filter;
mod linalg;
mod resultant;
mod roots;
mod serial;
mod uni;
mod veronese;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use filter::{CompiledPoly, FilterStats};
pub use linalg::{null_space, rank};
pub use resultant::{resultant, resultant_z, restricted_resultant_z};
pub use roots::{isolate_real_roots, real_roots, squarefree_factorization, squarefree_part, Algebraic, RealRoot, SqfPoly};
pub use serial::{opt_rational_serde, rational_serde, rational_string, PolyRecord, PolyTerm};
pub use uni::UniPolynomial;
pub use veronese::{monomial_exponents, veronese, veronese_dim};

/// Exponent tuple; entries beyond `nvars` are always zero.
pub type Exponent = [u32; 3];

/// Sparse polynomial in `nvars ∈ {1, 2, 3}` variables.
///
/// Variables are named `x, y, z` (in that order). Zero coefficients are never
/// stored, so the zero polynomial has no terms.
#[derive(Clone, PartialEq)]
pub struct Polynomial<T> {
    nvars: usize,
    terms: BTreeMap<Exponent, T>,
}

fn total(e: &Exponent) -> u32 {
    e[0] + e[1] + e[2]
}

/// Graded lexicographic key: total degree first, then x, y, z exponents.
fn grlex(e: &Exponent) -> (u32, u32, u32, u32) {
    (total(e), e[0], e[1], e[2])
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        assert!((1..=3).contains(&nvars), "nvars must be 1, 2 or 3");
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(nvars, [0, 0, 0], c)
    }

    /// The `i`-th coordinate function.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(nvars, e, T::one())
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: T) -> Self {
        let mut p = Self::zero(nvars);
        debug_assert!(exp.iter().skip(nvars).all(|&e| e == 0));
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated terms; coefficients of equal
    /// exponents are summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, T)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert!(e.iter().skip(nvars).all(|&x| x == 0), "exponent exceeds nvars");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| total(e) == 0)
    }

    pub fn coefficient(&self, e: &Exponent) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    /// Total degree; `None` stands for the −∞ degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(total).max()
    }

    /// Degree in a single variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    /// Checked product; fails when the variable counts differ.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self * other)
    }

    /// Checked sum.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self + other)
    }

    /// Partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = *e;
            f[var] -= 1;
            out.add_term(f, c.clone() * T::from_u32(e[var]).expect("exponent fits"));
        }
        out
    }

    /// Exact value at `x`.
    pub fn eval(&self, x: &[T]) -> Result<T> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        let mut powers: Vec<Vec<T>> = Vec::with_capacity(self.nvars);
        for (i, xi) in x.iter().enumerate() {
            let dmax = self.degree_in(i).unwrap_or(0) as usize;
            let mut pw = Vec::with_capacity(dmax + 1);
            pw.push(T::one());
            for k in 1..=dmax {
                let next = pw[k - 1].clone() * xi.clone();
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = t * powers[i][e[i] as usize].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Substitutes `x_i = offset_i + slope_i * t` for every variable and
    /// returns the resulting univariate polynomial in `t`.
    pub fn restrict_affine(&self, offset: &[T], slope: &[T]) -> Result<UniPolynomial<T>> {
        if offset.len() != self.nvars || slope.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: offset.len() });
        }
        let forms: Vec<UniPolynomial<T>> = (0..self.nvars)
            .map(|i| UniPolynomial::new(vec![offset[i].clone(), slope[i].clone()]))
            .collect();
        let mut powers: Vec<Vec<UniPolynomial<T>>> = Vec::new();
        for (i, form) in forms.iter().enumerate() {
            let dmax = self.degree_in(i).unwrap_or(0) as usize;
            let mut pw = vec![UniPolynomial::one()];
            for k in 1..=dmax {
                let next = &pw[k - 1] * form;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = UniPolynomial::zero();
        for (e, c) in &self.terms {
            let mut t = UniPolynomial::constant(c.clone());
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = &t * &powers[i][e[i] as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Restriction to the parametrized line `origin + t * dir` in R^nvars.
    pub fn restrict_to_line(&self, origin: &[T], dir: &[T]) -> Result<UniPolynomial<T>> {
        if dir.iter().all(|d| d.is_zero()) {
            return Err(Error::ZeroDirection(0));
        }
        self.restrict_affine(origin, dir)
    }

    /// For a trivariate polynomial, substitutes `x = ox + dx*t`, `y = oy + dy*t`
    /// and keeps `z`, returning a bivariate polynomial in `(t, z)`. This is
    /// the polynomial seen in the vertical plane over a projected line.
    pub fn restrict_to_vertical_plane(&self, origin_xy: [&T; 2], dir_xy: [&T; 2]) -> Result<Self> {
        if self.nvars != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: self.nvars });
        }
        let fx = Self::from_terms(2, [([0, 0, 0], origin_xy[0].clone()), ([1, 0, 0], dir_xy[0].clone())]);
        let fy = Self::from_terms(2, [([0, 0, 0], origin_xy[1].clone()), ([1, 0, 0], dir_xy[1].clone())]);
        let z = Self::var(2, 1);
        let dx = self.degree_in(0).unwrap_or(0) as usize;
        let dy = self.degree_in(1).unwrap_or(0) as usize;
        let dz = self.degree_in(2).unwrap_or(0) as usize;
        let pows = |f: &Self, k: usize| {
            let mut v = vec![Self::one(2)];
            for i in 1..=k {
                let next = &v[i - 1] * f;
                v.push(next);
            }
            v
        };
        let px = pows(&fx, dx);
        let py = pows(&fy, dy);
        let pz = pows(&z, dz);
        let mut acc = Self::zero(2);
        for (e, c) in &self.terms {
            let t = &(&px[e[0] as usize] * &py[e[1] as usize]) * &pz[e[2] as usize];
            acc = &acc + &t.scale(c);
        }
        Ok(acc)
    }

    /// Re-interprets the polynomial in more variables (the new ones absent).
    pub fn lift(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= 3);
        Self { nvars, terms: self.terms.clone() }
    }

    /// Coefficients as a polynomial in `var`: entry `k` is the coefficient of
    /// `var^k`, itself a polynomial free of `var` (same `nvars`).
    pub fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut f = *e;
            f[var] = 0;
            out[k].add_term(f, c.clone());
        }
        out
    }

    /// Inverse of [`Polynomial::coeffs_in`].
    pub fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                let mut f = *e;
                f[var] += k as u32;
                out.add_term(f, v.clone());
            }
        }
        out
    }

    fn leading(&self) -> Option<(Exponent, T)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| grlex(e))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not
    /// divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.nvars, divisor.nvars);
        let (le, lc) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if (0..3).any(|i| re[i] < le[i]) {
                return None;
            }
            let qe = [re[0] - le[0], re[1] - le[1], re[2] - le[2]];
            let qc = rc / lc.clone();
            let mono = Self::monomial(self.nvars, qe, qc.clone());
            rem = &rem - &(&mono * divisor);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Converts coefficients to another scalar type.
    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Univariate view of a polynomial with `nvars == 1`.
    pub fn to_univariate(&self) -> UniPolynomial<T> {
        let d = self.degree().unwrap_or(0) as usize;
        let mut c = vec![T::zero(); d + 1];
        for (e, v) in &self.terms {
            c[e[0] as usize] = v.clone();
        }
        UniPolynomial::new(c)
    }
}

impl<T: Scalar> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["x", "y", "z"];
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by_key(|e| std::cmp::Reverse(grlex(e)));
        for (i, e) in keys.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:?})", self.terms[e])?;
            for v in 0..self.nvars {
                match e[v] {
                    0 => {}
                    1 => write!(f, "{}", names[v])?,
                    k => write!(f, "{}^{}", names[v], k)?,
                }
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Polynomial<T> {
    /// Product of a list of polynomials (1 for the empty list).
    pub fn product<'a, I>(nvars: usize, factors: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        factors.into_iter().fold(Self::one(nvars), |acc, f| &acc * f)
    }
}

impl<T: Scalar> Default for Polynomial<T> {
    fn default() -> Self {
        Self::zero(3)
    }
}

/// Convenience: `T::one()` check used by callers holding generic scalars.
pub fn is_one<T: Scalar>(x: &T) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Poly, Rational};
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    fn x() -> Poly {
        Poly::var(3, 0)
    }
    fn y() -> Poly {
        Poly::var(3, 1)
    }
    fn z() -> Poly {
        Poly::var(3, 2)
    }

    fn sphere() -> Poly {
        let s = &(&(&x() * &x()) + &(&y() * &y())) + &(&z() * &z());
        &s - &Poly::one(3)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(sphere().eval(&[q(0), q(0), q(0)]).unwrap(), q(-1));
        assert_eq!(sphere().eval(&[q(1), q(0), q(0)]).unwrap(), q(0));
        let xyz = &(&x() * &y()) * &z();
        assert_eq!(xyz.eval(&[q(2), q(3), q(4)]).unwrap(), q(24));
    }

    #[test]
    fn eval_dimension_mismatch() {
        assert_eq!(
            sphere().eval(&[q(0), q(0)]),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        );
        let p2 = Poly::var(2, 0);
        assert!(sphere().try_mul(&p2).is_err());
    }

    #[test]
    fn mul_and_partial_examples() {
        let lhs = &(&x() + &y()) * &(&x() - &y());
        let rhs = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(lhs, rhs);

        let p = &(&(&x() * &x()) * &z()) + &z().pow(3);
        let dp = p.partial(2);
        let expect = &(&x() * &x()) + &(&z() * &z()).scale(&q(3));
        assert_eq!(dp, expect);

        assert_eq!(&p * &Poly::one(3), p);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(Poly::zero(3).degree(), None);
        assert_eq!(p.degree_in(0), Some(2));
    }

    #[test]
    fn restrict_to_line_examples() {
        let u = z().restrict_to_line(&[q(0), q(0), q(0)], &[q(1), q(0), q(0)]).unwrap();
        assert!(u.is_zero());
        let u = z().restrict_to_line(&[q(0), q(0), q(0)], &[q(0), q(0), q(1)]).unwrap();
        assert_eq!(u, UniPolynomial::new(vec![q(0), q(1)]));
        let circle = &(&(&x() * &x()) + &(&y() * &y())) - &Poly::one(3);
        let u = circle.restrict_to_line(&[q(0), q(0), q(0)], &[q(1), q(1), q(0)]).unwrap();
        assert_eq!(u, UniPolynomial::new(vec![q(-1), q(0), q(2)]));
        assert_eq!(
            z().restrict_to_line(&[q(0), q(0), q(0)], &[q(0), q(0), q(0)]),
            Err(Error::ZeroDirection(0))
        );
    }

    #[test]
    fn vertical_plane_restriction_matches_line_restriction() {
        let p = &(&sphere() * &(&x() - &z())) + &y().scale(&q(5));
        let plane = p.restrict_to_vertical_plane([&q(1), &q(2)], [&q(3), &q(-1)]).unwrap();
        // Setting z = 7 + 2t in the plane polynomial equals restricting p to the line.
        let direct = p.restrict_to_line(&[q(1), q(2), q(7)], &[q(3), q(-1), q(2)]).unwrap();
        let via = plane.restrict_affine(&[q(0), q(7)], &[q(1), q(2)]).unwrap();
        assert_eq!(direct, via);
    }

    #[test]
    fn div_exact_round_trip() {
        let a = &(&x() + &y().scale(&q(2))) - &z();
        let b = &sphere() + &x();
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(sphere().div_exact(&x()).is_none());
    }

    #[test]
    fn coeffs_in_round_trip() {
        let p = &(&sphere() * &z()) + &(&x() * &y());
        let cs = p.coeffs_in(2);
        assert_eq!(cs.len(), 4);
        assert_eq!(Poly::from_coeffs_in(3, 2, &cs), p);
    }

    #[test]
    fn generic_over_f64() {
        let p = crate::PolyF64::var(2, 0);
        let p2 = &p * &p;
        assert_eq!(p2.eval(&[3.0, 1.0]).unwrap(), 9.0);
    }
}
