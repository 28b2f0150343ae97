use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Dense univariate polynomial, coefficients low degree first.
///
/// The coefficient vector is trimmed so that the last entry is nonzero; the
/// zero polynomial has an empty vector.
#[derive(Clone, PartialEq)]
pub struct UniPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> UniPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `prod (t - r)` over the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), T::one()])
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Sign of the value at `x`.
    pub fn sign_at(&self, x: &T) -> i8 {
        self.eval(x).sign()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("degree fits"))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|v| v.clone() * c.clone()).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if n < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            // Keep intermediate remainders monic to tame coefficient growth.
            b = r.monic();
        }
        a.monic()
    }

    /// `p(t + c)`.
    pub fn taylor_shift(&self, c: &T) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                a[j] = a[j].clone() + c.clone() * a[j + 1].clone();
            }
        }
        Self::new(a)
    }

    /// `p(a + b t)`.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        let lin = Self::new(vec![a.clone(), b.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }
}

impl<T: Scalar> fmt::Debug for UniPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})t")?,
                _ => write!(f, "({c:?})t^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Add for &UniPolynomial<T> {
    type Output = UniPolynomial<T>;
    fn add(self, rhs: &UniPolynomial<T>) -> UniPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        UniPolynomial::new(c)
    }
}

impl<T: Scalar> Neg for &UniPolynomial<T> {
    type Output = UniPolynomial<T>;
    fn neg(self) -> UniPolynomial<T> {
        UniPolynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Sub for &UniPolynomial<T> {
    type Output = UniPolynomial<T>;
    fn sub(self, rhs: &UniPolynomial<T>) -> UniPolynomial<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Mul for &UniPolynomial<T> {
    type Output = UniPolynomial<T>;
    fn mul(self, rhs: &UniPolynomial<T>) -> UniPolynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return UniPolynomial::zero();
        }
        let mut c = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPolynomial::new(c)
    }
}

impl<T: Scalar> UniPolynomial<T> {
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use crate::{Rational, UniPoly};
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    #[test]
    fn div_rem_and_gcd() {
        let a = UniPoly::from_roots(&[q(1), q(2), q(3)]);
        let b = UniPoly::from_roots(&[q(2), q(5)]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
        assert_eq!(a.gcd(&b), UniPoly::from_roots(&[q(2)]));
    }

    #[test]
    fn taylor_shift_matches_compose() {
        let a = UniPoly::new(vec![q(3), q(-1), q(0), q(2)]);
        assert_eq!(a.taylor_shift(&q(5)), a.compose_affine(&q(5), &q(1)));
        assert_eq!(a.taylor_shift(&q(2)).eval(&q(1)), a.eval(&q(3)));
    }

    #[test]
    fn derivative_power_rule() {
        let a = UniPoly::new(vec![q(1), q(1), q(1), q(1)]);
        assert_eq!(a.derivative(), UniPoly::new(vec![q(1), q(2), q(3)]));
    }
}
