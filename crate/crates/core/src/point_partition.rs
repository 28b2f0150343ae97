//! Randomized dissecting polynomials and r-partitions of weighted point
//! multisets in R^2 and R^3.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::geometry::{total_weight, Line3, WeightedPoint};
use crate::params::{ceil_log2, Params};
use crate::polynomial::{monomial_exponents, null_space, veronese, veronese_dim, CompiledPoly};
use crate::rng::Rng;
use crate::{Poly, Rational};

/// Product of dissecting polynomials together with its factors.
#[derive(Debug, Clone)]
pub struct PartitionPoly {
    pub factors: Vec<Poly>,
    pub product: Poly,
    pub stats: PartitionStats,
}

impl PartitionPoly {
    pub fn trivial(nvars: usize) -> Self {
        Self { factors: Vec::new(), product: Poly::one(nvars), stats: PartitionStats::default() }
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.degree().unwrap_or(0)).sum()
    }
}

/// Bookkeeping reported alongside a partition.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PartitionStats {
    pub rounds: usize,
    pub dissect_calls: usize,
    /// Extra attempts beyond the first, summed over all dissect calls.
    pub retries: usize,
    /// Dissections that only succeeded after halving the set collection.
    pub halvings: usize,
    /// Accepted polynomials that needed the unrounded null vector.
    pub exact_fallbacks: usize,
    /// Largest coefficient bit length among the factors.
    pub max_coeff_bits: u64,
    /// Number of sets handed to dissect, and how many were dissected.
    pub sets_offered: usize,
    pub sets_dissected: usize,
}

/// Points sharing a sign vector over the factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCell {
    pub signs: Vec<i8>,
    pub weight: u64,
    /// Indices into the input point list.
    pub members: Vec<usize>,
}

/// Result of [`partition_points`].
#[derive(Debug, Clone)]
pub struct PointPartition {
    pub poly: PartitionPoly,
    pub cells: Vec<SignCell>,
    /// Indices of points on `Z(product)`.
    pub boundary: Vec<usize>,
    pub boundary_weight: u64,
}

/// Outcome of one successful dissection.
#[derive(Debug, Clone)]
pub struct Dissection {
    pub poly: Poly,
    /// Per input set, whether the 7/8 bound holds.
    pub dissected: Vec<bool>,
    pub attempts: usize,
    pub exact_fallback: bool,
}

/// Whether a set with the given weights on each side is dissected:
/// `8 * w(f > 0) <= 7 * w` and `8 * w(f < 0) <= 7 * w`.
pub fn is_dissected(pos: u64, neg: u64, total: u64) -> bool {
    8 * pos as u128 <= 7 * total as u128 && 8 * neg as u128 <= 7 * total as u128
}

fn snap(q: &Rational, bits: u32) -> Rational {
    if q.denom().bits() <= bits as u64 {
        return q.clone();
    }
    let scale = BigInt::one() << bits;
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

fn sample_weighted<'a>(set: &'a [&'a WeightedPoint], total: u64, rng: &mut Rng) -> &'a WeightedPoint {
    let mut x = rng.gen_range(0..total);
    for p in set {
        if x < p.weight {
            return p;
        }
        x -= p.weight;
    }
    set.last().unwrap()
}

/// Scales a rational vector to a primitive integer vector.
pub(crate) fn integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = out.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut out {
            *x /= &g;
        }
    }
    out
}

/// Keeps the top `bits` bits of the largest entry, rounding the others to the
/// same scale.
fn round_vector(v: &[BigInt], bits: u32) -> Vec<BigInt> {
    let m = v.iter().map(|x| x.bits()).max().unwrap_or(0);
    if m <= bits as u64 {
        return v.to_vec();
    }
    let shift = (m - bits as u64) as usize;
    let half = BigInt::one() << (shift - 1);
    v.iter()
        .map(|x| {
            let a = (x.abs() + &half) >> shift;
            if x.is_negative() {
                -a
            } else {
                a
            }
        })
        .collect()
}

fn poly_from_vector(d: usize, degree: u32, v: &[BigInt]) -> Poly {
    let exps = monomial_exponents(d, degree);
    Poly::from_terms(d, exps.into_iter().zip(v).map(|(e, c)| (e, Rational::from_integer(c.clone()))))
}

fn side_weights(f: &CompiledPoly, set: &[&WeightedPoint]) -> (u64, u64) {
    let mut pos = 0;
    let mut neg = 0;
    for p in set {
        match f.sign_at(&p.coords) {
            1 => pos += p.weight,
            -1 => neg += p.weight,
            _ => {}
        }
    }
    (pos, neg)
}

/// Finds a polynomial of degree at most `degree` in `d` variables that
/// dissects at least half of the given weighted sets.
///
/// Each attempt lifts a weighted random sample of `binom(degree+d, d) - 1`
/// points to the Veronese space and takes a hyperplane through them; the
/// dissection property is then checked by exact counting.
pub fn dissect(
    sets: &[Vec<&WeightedPoint>],
    d: usize,
    degree: u32,
    params: &Params,
    rng: &mut Rng,
) -> Result<Dissection> {
    assert!(degree >= 1 && (2..=3).contains(&d));
    let k = sets.len();
    assert!(k > 0 && sets.iter().all(|s| !s.is_empty()), "sets must be nonempty");
    let weights: Vec<u64> = sets.iter().map(|s| s.iter().map(|p| p.weight).sum()).collect();
    let dim = veronese_dim(d, degree);
    let n_samples = dim - 1;
    let need = k.div_ceil(2);
    let mut order: Vec<usize> = (0..k).collect();
    for attempt in 1..=params.retry_budget {
        if k > n_samples {
            order.shuffle(rng);
        }
        let mut rows = Vec::with_capacity(n_samples);
        for s in 0..n_samples {
            let i = order[s % k];
            let p = sample_weighted(&sets[i], weights[i], rng);
            // Heavy atoms stay exact so that the zero set can pass through them.
            let keep = 8 * p.weight > weights[i];
            let x: Vec<Rational> =
                p.coords.iter().map(|c| if keep { c.clone() } else { snap(c, params.snap_bits) }).collect();
            rows.push(veronese(&x, degree));
        }
        let basis = null_space(&rows, dim);
        let mut combo = vec![Rational::zero(); dim];
        for b in &basis {
            let c = Rational::from_integer(BigInt::from(rng.gen_range(1i64..=7) * if rng.gen() { 1 } else { -1 }));
            for (acc, x) in combo.iter_mut().zip(b) {
                *acc += &c * x;
            }
        }
        if combo[1..].iter().all(|c| c.is_zero()) {
            continue;
        }
        let exact = integer_vector(&combo);
        let rounded = round_vector(&exact, params.coeff_bits);
        let mut candidates = vec![(rounded.clone(), false)];
        if rounded != exact {
            candidates.push((exact, true));
        }
        for (vec, is_exact) in candidates {
            if vec[1..].iter().all(|c| c.is_zero()) {
                continue;
            }
            let f = poly_from_vector(d, degree, &vec);
            let cf = CompiledPoly::new(&f);
            let dissected: Vec<bool> = sets
                .iter()
                .zip(&weights)
                .map(|(s, &w)| {
                    let (pos, neg) = side_weights(&cf, s);
                    is_dissected(pos, neg, w)
                })
                .collect();
            if dissected.iter().filter(|&&b| b).count() >= need {
                return Ok(Dissection { poly: f, dissected, attempts: attempt, exact_fallback: is_exact });
            }
        }
    }
    Err(Error::RetryBudgetExhausted(params.retry_budget))
}

fn coeff_bits(p: &Poly) -> u64 {
    p.terms().map(|(_, c)| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0)
}

/// Smallest degree whose sample count `binom(D+d, d) - 1` reaches `k`.
fn degree_for(d: usize, k: usize) -> u32 {
    let mut deg = 1;
    while veronese_dim(d, deg) - 1 < k {
        deg += 1;
    }
    deg
}

/// Builds an r-partitioning polynomial for a weighted multiset as a product
/// of dissecting polynomials.
///
/// Cells are sign vectors over the factors. A cell is refined further while
/// `r * weight > c_cell * total`, for at most `4 * ceil(log2 r)` rounds and
/// while the total degree stays within `max_total_degree` (if given).
pub fn partition_points(
    points: &[WeightedPoint],
    r: u64,
    params: &Params,
    rng: &mut Rng,
    max_total_degree: Option<u32>,
) -> Result<PointPartition> {
    let d = points.first().map(|p| p.coords.len()).unwrap_or(3);
    if !(2..=3).contains(&d) || points.iter().any(|p| p.coords.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: points.iter().map(|p| p.coords.len()).max().unwrap_or(0) });
    }
    let mut poly = PartitionPoly::trivial(d);
    if points.is_empty() {
        return Ok(PointPartition { poly, cells: Vec::new(), boundary: Vec::new(), boundary_weight: 0 });
    }
    let total = total_weight(points);
    let heavy = |w: u64| (w as u128) * (r as u128) > (params.c_cell as u128) * (total as u128);
    let mut cells = vec![SignCell { signs: Vec::new(), weight: total, members: (0..points.len()).collect() }];
    let mut boundary = Vec::new();
    let max_rounds = (4 * ceil_log2(r)).max(1) as usize;
    for _ in 0..max_rounds {
        let mut active: Vec<usize> = (0..cells.len()).filter(|&i| heavy(cells[i].weight)).collect();
        if active.is_empty() {
            break;
        }
        let used = poly.degree();
        let budget = max_total_degree.map(|m| m.saturating_sub(used)).unwrap_or(u32::MAX);
        if budget == 0 {
            break;
        }
        let deg = degree_for(d, active.len()).min(params.max_factor_degree).min(budget).max(1);
        active.sort_by(|&a, &b| cells[b].weight.cmp(&cells[a].weight).then(a.cmp(&b)));
        active.truncate(veronese_dim(d, deg) - 1);
        let mut offered = active.clone();
        let dis = loop {
            let sets: Vec<Vec<&WeightedPoint>> =
                offered.iter().map(|&i| cells[i].members.iter().map(|&j| &points[j]).collect()).collect();
            poly.stats.dissect_calls += 1;
            match dissect(&sets, d, deg, params, rng) {
                Ok(dis) => break dis,
                Err(Error::RetryBudgetExhausted(n)) => {
                    poly.stats.retries += n;
                    if offered.len() == 1 {
                        return Err(Error::RetryBudgetExhausted(n));
                    }
                    offered.truncate(offered.len().div_ceil(2));
                    poly.stats.halvings += 1;
                }
                Err(e) => return Err(e),
            }
        };
        poly.stats.retries += dis.attempts - 1;
        poly.stats.sets_offered += offered.len();
        poly.stats.sets_dissected += dis.dissected.iter().filter(|&&b| b).count();
        if dis.exact_fallback {
            poly.stats.exact_fallbacks += 1;
        }
        poly.stats.rounds += 1;
        let f = dis.poly;
        poly.stats.max_coeff_bits = poly.stats.max_coeff_bits.max(coeff_bits(&f));
        let cf = CompiledPoly::new(&f);
        let mut next = Vec::with_capacity(cells.len() * 2);
        for cell in cells {
            let mut plus = SignCell { signs: cell.signs.clone(), weight: 0, members: Vec::new() };
            let mut minus = plus.clone();
            plus.signs.push(1);
            minus.signs.push(-1);
            for j in cell.members {
                match cf.sign_at(&points[j].coords) {
                    1 => {
                        plus.weight += points[j].weight;
                        plus.members.push(j);
                    }
                    -1 => {
                        minus.weight += points[j].weight;
                        minus.members.push(j);
                    }
                    _ => boundary.push(j),
                }
            }
            for c in [plus, minus] {
                if !c.members.is_empty() {
                    next.push(c);
                }
            }
        }
        cells = next;
        poly.product = &poly.product * &f;
        poly.factors.push(f);
    }
    // Cells whose sign vector is shorter than the factor count cannot occur:
    // every round splits every cell.
    boundary.sort_unstable();
    let boundary_weight = boundary.iter().map(|&j| points[j].weight).sum();
    cells.sort_by(|a, b| a.signs.cmp(&b.signs));
    Ok(PointPartition { poly, cells, boundary, boundary_weight })
}

/// A nonzero polynomial of degree at most `degree` vanishing on every line,
/// obtained from the null space of `degree + 2` lifted samples per line.
///
/// A solution always exists when `binom(degree+3, 3) > |lines| * (degree+1)`;
/// below that count the null space is still tried and
/// [`Error::DimensionTooSmall`] is returned only if it is trivial.
pub fn interpolate_vanishing(lines: &[Line3], degree: u32) -> Result<Poly> {
    let space = veronese_dim(3, degree);
    let constraints = lines.len() * (degree as usize + 1);
    let mut rows = Vec::new();
    for l in lines {
        for t in 0..degree as i64 + 2 {
            let p = l.point_at(&Rational::from_integer(t.into()));
            rows.push(veronese(&p, degree));
        }
    }
    let basis = null_space(&rows, space);
    let Some(v) = basis.into_iter().next() else {
        return Err(Error::DimensionTooSmall { space, constraints });
    };
    Ok(poly_from_vector(3, degree, &integer_vector(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }
    fn wp(c: &[i64], w: u64) -> WeightedPoint {
        WeightedPoint::new(c.iter().map(|&x| q(x)).collect(), w)
    }
    fn cube() -> Vec<WeightedPoint> {
        let mut v = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    v.push(wp(&[x, y, z], 1));
                }
            }
        }
        v
    }

    #[test]
    fn dissect_two_points() {
        let pts = [wp(&[0, 0, 0], 1), wp(&[0, 0, 1], 1)];
        let sets = vec![pts.iter().collect::<Vec<_>>()];
        let mut rng = from_seed(1);
        let dis = dissect(&sets, 3, 1, &Params::default(), &mut rng).unwrap();
        assert!(dis.dissected[0]);
        assert!(dis.poly.degree().unwrap() <= 1);
    }

    #[test]
    fn dissect_single_point_puts_it_on_the_zero_set() {
        let pts = [wp(&[3, -1, 2], 1)];
        let sets = vec![pts.iter().collect::<Vec<_>>()];
        let dis = dissect(&sets, 3, 1, &Params::default(), &mut from_seed(5)).unwrap();
        assert!(dis.poly.eval(&pts[0].coords).unwrap().is_zero());
    }

    #[test]
    fn dissect_cube_corner_singletons() {
        let pts = cube();
        let sets: Vec<Vec<&WeightedPoint>> = pts.iter().map(|p| vec![p]).collect();
        let dis = dissect(&sets, 3, 1, &Params::default(), &mut from_seed(11)).unwrap();
        assert!(dis.dissected.iter().filter(|&&b| b).count() >= 4);
    }

    #[test]
    fn partition_cube() {
        let pts = cube();
        let part = partition_points(&pts, 8, &Params::default(), &mut from_seed(3), None).unwrap();
        let total: u64 = part.cells.iter().map(|c| c.weight).sum::<u64>() + part.boundary_weight;
        assert_eq!(total, 8);
        for c in &part.cells {
            assert!(c.weight * 8 <= 4 * 8);
        }
    }

    #[test]
    fn partition_heavy_atom() {
        let pts = [wp(&[1, 2, 3], 100)];
        let params = Params { c_cell: 1, ..Params::default() };
        let part = partition_points(&pts, 4, &params, &mut from_seed(9), None).unwrap();
        assert_eq!(part.boundary_weight, 100);
        assert!(part.cells.is_empty());
    }

    #[test]
    fn partition_empty() {
        let part = partition_points(&[], 4, &Params::default(), &mut from_seed(9), None).unwrap();
        assert!(part.poly.factors.is_empty());
        assert_eq!(part.poly.product, Poly::one(3));
        assert!(part.cells.is_empty());
    }

    #[test]
    fn interpolation_examples() {
        let xa = Line3::new(0, [q(0), q(0), q(0)], [q(1), q(0), q(0)]).unwrap();
        let ya = Line3::new(1, [q(0), q(0), q(0)], [q(0), q(1), q(0)]).unwrap();
        let p = interpolate_vanishing(&[xa.clone()], 1).unwrap();
        assert!(xa.restrict(&p).is_zero());
        assert!(p.coefficient(&[1, 0, 0]).is_zero() && p.coefficient(&[0, 0, 0]).is_zero());
        let p = interpolate_vanishing(&[xa.clone(), ya.clone()], 1).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert!(!p.coefficient(&[0, 0, 1]).is_zero());
        let skew = Line3::new(2, [q(0), q(0), q(1)], [q(0), q(1), q(0)]).unwrap();
        let p = interpolate_vanishing(&[xa.clone(), skew.clone()], 2).unwrap();
        assert!(xa.restrict(&p).is_zero() && skew.restrict(&p).is_zero());
        assert!(matches!(interpolate_vanishing(&[xa, ya, skew], 1), Err(Error::DimensionTooSmall { .. })));
    }
}
