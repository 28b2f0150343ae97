use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Coefficient field for the polynomial kernel.
///
/// Implemented for [`BigRational`] (exact, every sign test certified) and
/// `f64` (approximate). Algorithms that need certified signs check
/// [`Scalar::EXACT`] or are written against [`crate::Rational`] directly.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Best-effort conversion to `f64` (infinite values saturate).
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Sign as -1, 0 or 1.
    fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn approx(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn approx(&self) -> f64 {
        *self
    }
}

/// Converts a rational to the nearest-ish `f64`, never panicking. Values
/// outside the `f64` range saturate to ±∞.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        return v;
    }
    // Fall back to scaling by powers of two.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        BigRational::new(q.numer().clone(), q.denom().clone() << (shift as usize))
    } else {
        BigRational::new(q.numer().clone() << ((-shift) as usize), q.denom().clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift.clamp(-2000, 2000) as i32)
}

/// Parses a rational written as `"a"`, `"a/b"` or a finite decimal `"1.25"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(n, d);
        return Some(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Formats a rational as `"a/b"` (or `"a"` for integers).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_rational_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational_between(&-hi, &-lo);
    }
    // 0 < lo <= hi: continued-fraction walk.
    let fl = lo.floor();
    if fl < *lo {
        if fl.clone() + BigRational::one() <= *hi {
            return fl + BigRational::one();
        }
    } else {
        return fl;
    }
    // lo and hi share the integer part.
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    // 1/frac_hi <= 1/x <= 1/frac_lo
    let inner = simplest_rational_between(&frac_hi.recip(), &frac_lo.recip());
    fl + inner.recip()
}
