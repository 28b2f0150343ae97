use std::sync::atomic::{AtomicU64, Ordering};

use crate::scalar::rational_to_f64;
use crate::{Poly, Rational};

use super::Exponent;

/// Counts of sign queries answered by the floating-point filter versus the
/// exact fallback.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterStats {
    pub filtered: u64,
    pub exact: u64,
}

/// A polynomial prepared for many sign queries: a floating-point evaluation
/// with a forward error bound, falling back to exact rational evaluation
/// whenever the bound cannot certify the sign.
#[derive(Debug)]
pub struct CompiledPoly {
    exact: Poly,
    terms: Vec<(Exponent, f64)>,
    degree: u32,
    filtered: AtomicU64,
    exact_calls: AtomicU64,
}

impl Clone for CompiledPoly {
    fn clone(&self) -> Self {
        Self::new(&self.exact)
    }
}

const UNIT: f64 = f64::EPSILON * 0.5;

impl CompiledPoly {
    pub fn new(p: &Poly) -> Self {
        Self {
            exact: p.clone(),
            terms: p.terms().map(|(e, c)| (*e, rational_to_f64(c))).collect(),
            degree: p.degree().unwrap_or(0),
            filtered: AtomicU64::new(0),
            exact_calls: AtomicU64::new(0),
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.exact
    }

    pub fn stats(&self) -> FilterStats {
        FilterStats {
            filtered: self.filtered.load(Ordering::Relaxed),
            exact: self.exact_calls.load(Ordering::Relaxed),
        }
    }

    fn float_sign(&self, xf: &[f64]) -> Option<i8> {
        let mut val = 0.0f64;
        let mut mag = 0.0f64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &x) in xf.iter().enumerate() {
                t *= x.powi(e[i] as i32);
            }
            val += t;
            mag += t.abs();
        }
        if !val.is_finite() || !mag.is_finite() || mag < 1e-250 {
            return None;
        }
        // Rounding of inputs, products and the running sum, with slack.
        let k = 4.0 * self.degree as f64 + 2.0 * self.terms.len() as f64 + 16.0;
        let err = 2.0 * k * UNIT * mag;
        if val > err {
            Some(1)
        } else if val < -err {
            Some(-1)
        } else {
            None
        }
    }

    /// Certified sign of the polynomial at a rational point.
    pub fn sign_at(&self, x: &[Rational]) -> i8 {
        let xf: Vec<f64> = x.iter().map(rational_to_f64).collect();
        self.sign_at_with(&xf, x)
    }

    /// As [`CompiledPoly::sign_at`] with precomputed float coordinates.
    pub fn sign_at_with(&self, xf: &[f64], x: &[Rational]) -> i8 {
        if self.terms.is_empty() {
            return 0;
        }
        if let Some(s) = self.float_sign(xf) {
            self.filtered.fetch_add(1, Ordering::Relaxed);
            return s;
        }
        self.exact_calls.fetch_add(1, Ordering::Relaxed);
        let v = self.exact.eval(x).expect("dimension checked by caller");
        crate::Scalar::sign(&v)
    }
}
