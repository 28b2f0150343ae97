use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, simplest_rational_between};
use crate::{Rational, UniPoly};

/// Squarefree polynomial carried by an isolated irrational root, kept both
/// with rational coefficients and as a primitive integer vector for fast
/// sign evaluation.
#[derive(Debug)]
pub struct SqfPoly {
    pub poly: UniPoly,
    ints: Vec<BigInt>,
}

impl SqfPoly {
    fn new(poly: UniPoly) -> Self {
        let ints = primitive_integer(&poly);
        Self { poly, ints }
    }

    /// Sign of the polynomial at a rational point, computed on the integer
    /// form `sum a_i n^i d^(deg-i)`.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign_int_at(&self.ints, x)
    }
}

fn sign_int_at(ints: &[BigInt], x: &Rational) -> i8 {
    if ints.is_empty() {
        return 0;
    }
    let n = x.numer();
    let d = x.denom();
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    // Horner on the numerator with the denominator powers folded in.
    for c in ints.iter().rev() {
        acc = acc * n + c * &dpow;
        dpow *= d;
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Integer coefficient vector proportional to `p` with content 1 and positive
/// leading coefficient.
pub(crate) fn primitive_integer(p: &UniPoly) -> Vec<BigInt> {
    let c = p.coeffs();
    if c.is_empty() {
        return Vec::new();
    }
    let l = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut v: Vec<BigInt> = c.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    if v.last().unwrap().is_negative() {
        for x in &mut v {
            *x = -&*x;
        }
    }
    v
}

/// A real algebraic number: either an exact rational or the unique root of
/// a squarefree polynomial inside an open rational interval whose endpoints
/// are not roots.
#[derive(Debug, Clone)]
pub enum Algebraic {
    Rational(Rational),
    Interval {
        poly: Arc<SqfPoly>,
        lo: Rational,
        hi: Rational,
        lo_sign: i8,
    },
}

/// A root together with its multiplicity.
#[derive(Debug, Clone)]
pub struct RealRoot {
    pub value: Algebraic,
    pub multiplicity: u32,
}

impl Algebraic {
    pub fn from_rational(q: Rational) -> Self {
        Algebraic::Rational(q)
    }

    fn interval(poly: Arc<SqfPoly>, lo: Rational, hi: Rational) -> Self {
        let lo_sign = poly.sign_at(&lo);
        debug_assert!(lo_sign != 0 && poly.sign_at(&hi) == -lo_sign);
        Algebraic::Interval { poly, lo, hi, lo_sign }
    }

    /// Sign of `q` at this number.
    pub fn sign_of(&self, q: &UniPoly) -> i8 {
        if let Algebraic::Rational(r) = self {
            return q.sign_at(r);
        }
        if q.is_zero() {
            return 0;
        }
        let roots = isolate_real_roots(q).expect("nonzero polynomial");
        let k = roots.partition_point(|r| r < self);
        if k < roots.len() && roots[k] == *self {
            return 0;
        }
        // Any rational between this number and the next root of q has the
        // same sign.
        let s = match roots.get(k) {
            Some(next) => Algebraic::rational_between(self, next),
            None => self.rational_above(),
        };
        q.sign_at(&s)
    }

    /// Builds an interval representation after checking that `poly` is
    /// squarefree and changes sign strictly between the non-root endpoints.
    pub fn try_interval(poly: UniPoly, lo: Rational, hi: Rational) -> Option<Self> {
        if poly.degree().unwrap_or(0) == 0 || lo >= hi {
            return None;
        }
        if poly.gcd(&poly.derivative()).degree() != Some(0) {
            return None;
        }
        let sp = SqfPoly::new(poly);
        let (a, b) = (sp.sign_at(&lo), sp.sign_at(&hi));
        if a == 0 || b != -a {
            return None;
        }
        // A sign change with a squarefree polynomial may still hide several
        // roots; require exactly one.
        if isolate_squarefree(&sp.poly)
            .iter()
            .filter(|r| r.cmp_rational(&lo).is_gt() && r.cmp_rational(&hi).is_lt())
            .count()
            != 1
        {
            return None;
        }
        Some(Self::interval(Arc::new(sp), lo, hi))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Algebraic::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Closed bounds `[lo, hi]` containing the value.
    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            Algebraic::Rational(q) => (q.clone(), q.clone()),
            Algebraic::Interval { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    pub fn lower(&self) -> &Rational {
        match self {
            Algebraic::Rational(q) => q,
            Algebraic::Interval { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            Algebraic::Rational(q) => q,
            Algebraic::Interval { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> Rational {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    /// Floating-point approximation (refines a copy to about 2^-53 relative
    /// width first).
    pub fn approx(&self) -> f64 {
        match self {
            Algebraic::Rational(q) => rational_to_f64(q),
            Algebraic::Interval { lo, hi, .. } => {
                let mut a = self.clone();
                let scale = lo.abs().max(hi.abs()).max(Rational::one());
                let w = scale * Rational::new(BigInt::one(), BigInt::one() << 60usize);
                a.refine_to_width(&w);
                let (l, h) = a.bounds();
                rational_to_f64(&((l + h) / Rational::from_integer(2.into())))
            }
        }
    }

    /// Halves the isolating interval (or pins the value exactly when the
    /// midpoint happens to be the root).
    pub fn refine(&mut self) {
        if let Algebraic::Interval { poly, lo, hi, lo_sign } = self {
            let mid = (&*lo + &*hi) / Rational::from_integer(2.into());
            let s = poly.sign_at(&mid);
            if s == 0 {
                *self = Algebraic::Rational(mid);
            } else if s == *lo_sign {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    }

    /// Refines until the interval width is at most `w`.
    pub fn refine_to_width(&mut self, w: &Rational) {
        while self.width() > *w {
            self.refine();
        }
    }

    /// Compares the value with a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        match self {
            Algebraic::Rational(v) => v.cmp(q),
            Algebraic::Interval { poly, lo, hi, lo_sign } => {
                if q <= lo {
                    Ordering::Greater
                } else if q >= hi {
                    Ordering::Less
                } else {
                    let s = poly.sign_at(q);
                    if s == 0 {
                        Ordering::Equal
                    } else if s == *lo_sign {
                        // q lies between lo and the root.
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    }
                }
            }
        }
    }

    /// Exact comparison of two algebraic numbers.
    pub fn cmp_alg(&self, other: &Algebraic) -> Ordering {
        match (self, other) {
            (Algebraic::Rational(a), _) => other.cmp_rational(a).reverse(),
            (_, Algebraic::Rational(b)) => self.cmp_rational(b),
            (
                Algebraic::Interval { poly: pa, lo: la, hi: ha, .. },
                Algebraic::Interval { poly: pb, lo: lb, hi: hb, .. },
            ) => {
                if ha <= lb {
                    return Ordering::Less;
                }
                if hb <= la {
                    return Ordering::Greater;
                }
                let g = if Arc::ptr_eq(pa, pb) { pa.poly.monic() } else { pa.poly.gcd(&pb.poly) };
                if g.degree().unwrap_or(0) > 0 {
                    let lo = la.max(lb);
                    let hi = ha.min(hb);
                    // Any root of g in the overlap is the unique root of both.
                    let sl = g.sign_at(lo);
                    let sh = g.sign_at(hi);
                    if sl != 0 && sh != 0 && sl != sh {
                        return Ordering::Equal;
                    }
                    if sl == 0 || sh == 0 {
                        // Endpoint of the overlap is a root of g; fall through
                        // to bisection, which stays exact.
                    }
                }
                let mut a = self.clone();
                let mut b = other.clone();
                loop {
                    if a.width() >= b.width() {
                        a.refine();
                    } else {
                        b.refine();
                    }
                    if let Algebraic::Rational(q) = &a {
                        return b.cmp_rational(q).reverse();
                    }
                    if let Algebraic::Rational(q) = &b {
                        return a.cmp_rational(q);
                    }
                    if a.upper() <= b.lower() {
                        return Ordering::Less;
                    }
                    if b.upper() <= a.lower() {
                        return Ordering::Greater;
                    }
                }
            }
        }
    }

    /// A rational strictly between `a` and `b`, which must satisfy `a < b`.
    pub fn rational_between(a: &Algebraic, b: &Algebraic) -> Rational {
        debug_assert_eq!(a.cmp_alg(b), Ordering::Less);
        let mut a = a.clone();
        let mut b = b.clone();
        loop {
            if a.upper() < b.lower() {
                let lo = a.upper().clone();
                let hi = b.lower().clone();
                let s = simplest_rational_between(&lo, &hi);
                let a_exact = matches!(a, Algebraic::Rational(_));
                let b_exact = matches!(b, Algebraic::Rational(_));
                if (a_exact && s == lo) || (b_exact && s == hi) {
                    return (lo + hi) / Rational::from_integer(2.into());
                }
                return s;
            }
            if a.width() >= b.width() && a.as_rational().is_none() {
                a.refine();
            } else {
                b.refine();
            }
        }
    }

    /// A rational strictly below the value.
    pub fn rational_below(&self) -> Rational {
        self.lower().floor() - Rational::one()
    }

    /// A rational strictly above the value.
    pub fn rational_above(&self) -> Rational {
        self.upper().ceil() + Rational::one()
    }

    /// Converts to an exact rational if the value is rational.
    pub fn detect_rational(&mut self) {
        let Algebraic::Interval { poly, .. } = self else { return };
        let poly = poly.clone();
        let lc = poly.ints.last().unwrap().abs();
        let w = Rational::new(BigInt::one(), lc.clone() * 2);
        self.refine_to_width(&w);
        let Algebraic::Interval { lo, hi, .. } = self else { return };
        // Any rational root has a denominator dividing the leading coefficient.
        let lo_n = (lo.clone() * Rational::from_integer(lc.clone())).ceil().to_integer();
        let hi_n = (hi.clone() * Rational::from_integer(lc.clone())).floor().to_integer();
        let mut n = lo_n;
        while n <= hi_n {
            let cand = Rational::new(n.clone(), lc.clone());
            if poly.sign_at(&cand) == 0 {
                *self = Algebraic::Rational(cand);
                return;
            }
            n += 1;
        }
    }
}

impl PartialEq for Algebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_alg(other) == Ordering::Equal
    }
}

impl Eq for Algebraic {}

impl PartialOrd for Algebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Algebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_alg(other)
    }
}

/// Yun's squarefree factorization: returns `(f_i, i)` with `p = c * prod f_i^i`,
/// the `f_i` monic, squarefree, pairwise coprime and of positive degree.
pub fn squarefree_factorization(p: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        let nb = b.div_rem(&a).0;
        let nc = d.div_rem(&a).0;
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        d = &nc - &nb.derivative();
        b = nb;
        i += 1;
    }
    out
}

/// Squarefree part `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &UniPoly) -> UniPoly {
    let g = p.gcd(&p.derivative());
    p.div_rem(&g).0.monic()
}

fn taylor_shift_one(a: &mut [BigInt]) {
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = a[j + 1].clone();
            a[j] += t;
        }
    }
}

fn sign_changes(a: &[BigInt]) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for c in a {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Upper bound on the number of roots of `q` in `(0, 1)` (exact when 0 or 1).
fn descartes_01(q: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = q.iter().rev().cloned().collect();
    taylor_shift_one(&mut r);
    sign_changes(&r)
}

fn remove_content(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// `q` has exactly one simple root in `(0, 1)`, which maps to `(lo, hi)`.
/// Earlier midpoint roots of `full` may sit on the endpoints; bisect with `q`
/// until both endpoints are non-roots of `full`.
fn shrink_to_nonroots(
    q: &[BigInt],
    lo: Rational,
    hi: Rational,
    full: &[BigInt],
    exact: &mut Vec<Rational>,
    intervals: &mut Vec<(Rational, Rational)>,
) {
    let map = |u: &Rational| &lo + (&hi - &lo) * u;
    let mut a = Rational::zero();
    let mut b = Rational::one();
    let sa = sign_int_at(q, &a);
    loop {
        let (xa, xb) = (map(&a), map(&b));
        if sign_int_at(full, &xa) != 0 && sign_int_at(full, &xb) != 0 {
            intervals.push((xa, xb));
            return;
        }
        let m = (&a + &b) / Rational::from_integer(2.into());
        let sm = sign_int_at(q, &m);
        if sm == 0 {
            exact.push(map(&m));
            return;
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
}

/// Isolates the roots of the integer polynomial `q` inside `(0, 1)`, mapped
/// affinely to `(lo, hi)`. Pushes exact rational roots and isolating
/// intervals of the original variable.
fn isolate_unit(
    q: Vec<BigInt>,
    lo: Rational,
    hi: Rational,
    full: &[BigInt],
    exact: &mut Vec<Rational>,
    intervals: &mut Vec<(Rational, Rational)>,
) {
    let mut stack = vec![(q, lo, hi)];
    while let Some((q, lo, hi)) = stack.pop() {
        if q.len() <= 1 {
            continue;
        }
        let v = descartes_01(&q);
        if v == 0 {
            continue;
        }
        if v == 1 {
            shrink_to_nonroots(&q, lo, hi, full, exact, intervals);
            continue;
        }
        let n = q.len() - 1;
        let mut ql: Vec<BigInt> = q.iter().enumerate().map(|(i, c)| c << (n - i)).collect();
        remove_content(&mut ql);
        let mut qr = ql.clone();
        taylor_shift_one(&mut qr);
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if qr[0].is_zero() {
            exact.push(mid.clone());
            qr.remove(0);
            // Divide ql by (u - 1): synthetic division, remainder is zero.
            let m = ql.len() - 1;
            let mut b = vec![BigInt::zero(); m];
            b[m - 1] = ql[m].clone();
            for k in (1..m).rev() {
                b[k - 1] = &ql[k] + &b[k];
            }
            ql = b;
        }
        stack.push((qr, mid.clone(), hi));
        stack.push((ql, lo, mid));
    }
}

fn root_bound_bits(ints: &[BigInt]) -> usize {
    let lead = ints.last().unwrap().bits() as i64;
    let m = ints.iter().map(|c| c.bits() as i64).max().unwrap_or(0);
    (m - lead + 2).max(1) as usize
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Isolates the distinct real roots of `p`, sorted increasingly.
///
/// Degree-one and rational-discriminant quadratic factors yield exact
/// rationals; all other roots are returned as isolating intervals. No
/// further rational-root detection is attempted.
pub fn isolate_real_roots(p: &UniPoly) -> Result<Vec<Algebraic>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = squarefree_part(p);
    let mut out = isolate_squarefree(&s);
    out.sort();
    Ok(out)
}

pub(crate) fn isolate_squarefree(s: &UniPoly) -> Vec<Algebraic> {
    let deg = s.degree().unwrap_or(0);
    match deg {
        0 => return Vec::new(),
        1 => {
            let c = s.coeffs();
            return vec![Algebraic::Rational(-c[0].clone() / c[1].clone())];
        }
        2 => {
            let c = s.coeffs();
            let disc = &c[1] * &c[1] - Rational::from_integer(4.into()) * &c[0] * &c[2];
            if disc.is_negative() {
                return Vec::new();
            }
            if let Some(r) = rational_sqrt(&disc) {
                let two_a = Rational::from_integer(2.into()) * &c[2];
                let mut roots = vec![(-&c[1] - &r) / &two_a, (-&c[1] + r) / two_a];
                roots.sort();
                return roots.into_iter().map(Algebraic::Rational).collect();
            }
        }
        _ => {}
    }
    let full = primitive_integer(s);
    let mut ints = full.clone();
    let mut exact = Vec::new();
    let mut intervals = Vec::new();
    if ints[0].is_zero() {
        exact.push(Rational::zero());
        ints.remove(0);
    }
    if ints.len() > 1 {
        let k = root_bound_bits(&ints);
        let b = Rational::from_integer(BigInt::one() << k);
        // Positive roots: q(u) = p(B u).
        let pos: Vec<BigInt> = ints.iter().enumerate().map(|(i, c)| c << (k * i)).collect();
        isolate_unit(pos, Rational::zero(), b.clone(), &full, &mut exact, &mut intervals);
        // Negative roots: q(u) = p(-B u), mapped back by negation.
        let neg: Vec<BigInt> = ints
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let v = c << (k * i);
                if i % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let mut nexact = Vec::new();
        let mut nint = Vec::new();
        let neg_full: Vec<BigInt> = full
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        isolate_unit(neg, Rational::zero(), b, &neg_full, &mut nexact, &mut nint);
        exact.extend(nexact.into_iter().map(|q| -q));
        intervals.extend(nint.into_iter().map(|(l, h)| (-h, -l)));
    }
    let shared = Arc::new(SqfPoly::new(s.clone()));
    let mut out: Vec<Algebraic> = exact.into_iter().map(Algebraic::Rational).collect();
    out.extend(intervals.into_iter().map(|(l, h)| Algebraic::interval(shared.clone(), l, h)));
    out
}

/// All distinct real roots of `p` in increasing order, with multiplicities.
/// Rational roots are always reported exactly.
pub fn real_roots(p: &UniPoly) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (f, m) in squarefree_factorization(p) {
        for mut r in isolate_squarefree(&f) {
            r.detect_rational();
            out.push(RealRoot { value: r, multiplicity: m });
        }
    }
    out.sort_by(|a, b| a.value.cmp_alg(&b.value));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }
    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn values(p: &UniPoly) -> Vec<Option<Rational>> {
        real_roots(p).unwrap().into_iter().map(|r| r.value.as_rational().cloned()).collect()
    }

    #[test]
    fn spec_examples() {
        let p = UniPoly::new(vec![q(-1), q(0), q(1)]);
        assert_eq!(values(&p), vec![Some(q(-1)), Some(q(1))]);
        let p = UniPoly::new(vec![q(1), q(0), q(1)]);
        assert!(values(&p).is_empty());
        let p = UniPoly::from_roots(&[q(1), q(2), q(3)]);
        assert_eq!(values(&p), vec![Some(q(1)), Some(q(2)), Some(q(3))]);
        assert_eq!(real_roots(&UniPoly::zero()).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn multiplicities() {
        let p = &UniPoly::from_roots(&[q(1), q(1), q(1), r(-1, 2)]) * &UniPoly::new(vec![q(-2), q(0), q(1)]);
        let roots = real_roots(&p).unwrap();
        assert_eq!(roots.len(), 4);
        assert_eq!(roots[1].value.as_rational(), Some(&r(-1, 2)));
        assert_eq!(roots[1].multiplicity, 1);
        assert_eq!(roots[2].value.as_rational(), Some(&q(1)));
        assert_eq!(roots[2].multiplicity, 3);
        // ±sqrt(2) stay irrational.
        assert!(roots[0].value.as_rational().is_none());
        assert!((roots[0].value.approx() + 2f64.sqrt()).abs() < 1e-12);
        assert!((roots[3].value.approx() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn compare_equal_irrationals_from_different_polys() {
        // sqrt(2) from t^2 - 2 and from (t^2 - 2)(t^3 - 7).
        let a = isolate_real_roots(&UniPoly::new(vec![q(-2), q(0), q(1)])).unwrap();
        let b_poly = &UniPoly::new(vec![q(-2), q(0), q(1)]) * &UniPoly::new(vec![q(-7), q(0), q(0), q(1)]);
        let b = isolate_real_roots(&b_poly).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(a[1].cmp_alg(&b[1]), Ordering::Equal);
        assert_eq!(a[1].cmp_alg(&b[2]), Ordering::Less);
        assert_eq!(a[0].cmp_alg(&b[0]), Ordering::Equal);
        let mid = Algebraic::rational_between(&a[1], &b[2]);
        assert_eq!(a[1].cmp_rational(&mid), Ordering::Less);
        assert_eq!(b[2].cmp_rational(&mid), Ordering::Greater);
    }

    #[test]
    fn dyadic_midpoint_roots_are_found() {
        // Roots at 0, 1/2, 1/4 and 3 hit bisection midpoints exactly.
        let p = UniPoly::from_roots(&[q(0), r(1, 2), r(1, 4), q(3), r(-5, 8)]);
        let roots = isolate_real_roots(&p).unwrap();
        let got: Vec<_> = roots.iter().map(|a| a.approx()).collect();
        assert_eq!(got, vec![-0.625, 0.0, 0.25, 0.5, 3.0]);
    }

    #[test]
    fn gap_signs_are_constant() {
        let p = &UniPoly::from_roots(&[q(-3), r(7, 3)]) * &UniPoly::new(vec![q(-3), q(0), q(0), q(1)]);
        let roots = isolate_real_roots(&p).unwrap();
        let mut samples = vec![roots[0].rational_below()];
        for w in roots.windows(2) {
            samples.push(Algebraic::rational_between(&w[0], &w[1]));
        }
        samples.push(roots.last().unwrap().rational_above());
        let signs: Vec<i8> = samples.iter().map(|x| p.sign_at(x)).collect();
        for w in signs.windows(2) {
            assert_eq!(w[0], -w[1]);
        }
    }
}
