//! Lines, segments, weighted points and vertical visibility.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polynomial::Algebraic;
use crate::{Poly, Rational, UniPoly};

pub type Point3 = [Rational; 3];
pub type Point2 = [Rational; 2];

/// A line `origin + t * dir` in R^3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line3 {
    pub id: u64,
    pub origin: Point3,
    pub dir: Point3,
}

/// The xy-projection of a line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Point(Point2),
    Line { origin: Point2, dir: Point2 },
}

impl Line3 {
    pub fn new(id: u64, origin: Point3, dir: Point3) -> Result<Self> {
        if dir.iter().all(|d| d.is_zero()) {
            return Err(Error::ZeroDirection(id));
        }
        Ok(Self { id, origin, dir })
    }

    pub fn is_vertical(&self) -> bool {
        self.dir[0].is_zero() && self.dir[1].is_zero()
    }

    pub fn point_at(&self, t: &Rational) -> Point3 {
        [
            &self.origin[0] + &self.dir[0] * t,
            &self.origin[1] + &self.dir[1] * t,
            &self.origin[2] + &self.dir[2] * t,
        ]
    }

    /// Height of the line at parameter `t`.
    pub fn z_at(&self, t: &Rational) -> Rational {
        &self.origin[2] + &self.dir[2] * t
    }

    pub fn xy_projection(&self) -> Projection {
        if self.is_vertical() {
            Projection::Point([self.origin[0].clone(), self.origin[1].clone()])
        } else {
            Projection::Line {
                origin: [self.origin[0].clone(), self.origin[1].clone()],
                dir: [self.dir[0].clone(), self.dir[1].clone()],
            }
        }
    }

    /// `t ↦ p(origin + t dir)`.
    pub fn restrict(&self, p: &Poly) -> UniPoly {
        p.restrict_to_line(&self.origin, &self.dir).expect("trivariate polynomial and nonzero direction")
    }
}

/// An extended parameter value: `-∞`, an algebraic number, or `+∞`.
#[derive(Debug, Clone)]
pub enum Bound {
    NegInf,
    Finite(Algebraic),
    PosInf,
}

impl Bound {
    pub fn rational(q: Rational) -> Self {
        Bound::Finite(Algebraic::Rational(q))
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        match self {
            Bound::NegInf => Ordering::Less,
            Bound::PosInf => Ordering::Greater,
            Bound::Finite(a) => a.cmp_rational(q),
        }
    }

    pub fn cmp_bound(&self, other: &Bound) -> Ordering {
        match (self, other) {
            (Bound::NegInf, Bound::NegInf) | (Bound::PosInf, Bound::PosInf) => Ordering::Equal,
            (Bound::NegInf, _) | (_, Bound::PosInf) => Ordering::Less,
            (_, Bound::NegInf) | (Bound::PosInf, _) => Ordering::Greater,
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp_alg(b),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(a) => a.as_rational(),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    /// Approximate value, infinite bounds map to ±∞.
    pub fn approx(&self) -> f64 {
        match self {
            Bound::NegInf => f64::NEG_INFINITY,
            Bound::PosInf => f64::INFINITY,
            Bound::Finite(a) => a.approx(),
        }
    }
}

impl serde::Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::NegInf => s.serialize_str("-inf"),
            Bound::PosInf => s.serialize_str("+inf"),
            Bound::Finite(a) => a.serialize(s),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Rec {
            Str(String),
            Alg(Algebraic),
        }
        match Rec::deserialize(d)? {
            Rec::Str(s) if s == "-inf" => Ok(Bound::NegInf),
            Rec::Str(s) if s == "+inf" => Ok(Bound::PosInf),
            Rec::Str(s) => crate::scalar::parse_rational(&s)
                .map(Bound::rational)
                .ok_or_else(|| serde::de::Error::custom(format!("bad bound {s}"))),
            Rec::Alg(a) => Ok(Bound::Finite(a)),
        }
    }
}

impl PartialEq for Bound {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_bound(other) == Ordering::Equal
    }
}

/// An open piece `{line(t) : lo < t < hi}` of a line.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment3 {
    pub line: Line3,
    pub lo: Bound,
    pub hi: Bound,
}

impl Segment3 {
    /// The whole line.
    pub fn full(line: Line3) -> Self {
        Self { line, lo: Bound::NegInf, hi: Bound::PosInf }
    }

    pub fn new(line: Line3, lo: Bound, hi: Bound) -> Result<Self> {
        if lo.cmp_bound(&hi) != Ordering::Less {
            return Err(Error::InvalidInput(format!("empty parameter interval on line {}", line.id)));
        }
        Ok(Self { line, lo, hi })
    }

    pub fn id(&self) -> u64 {
        self.line.id
    }

    /// Whether `t` lies strictly inside the parameter interval.
    pub fn contains(&self, t: &Rational) -> bool {
        self.lo.cmp_rational(t) == Ordering::Less && self.hi.cmp_rational(t) == Ordering::Greater
    }

    /// Whether the algebraic parameter lies strictly inside.
    pub fn contains_alg(&self, t: &Algebraic) -> bool {
        let b = Bound::Finite(t.clone());
        self.lo.cmp_bound(&b) == Ordering::Less && self.hi.cmp_bound(&b) == Ordering::Greater
    }

    pub fn is_full(&self) -> bool {
        matches!((&self.lo, &self.hi), (Bound::NegInf, Bound::PosInf))
    }
}

/// A point of R^2 or R^3 with a positive integer multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedPoint {
    pub coords: Vec<Rational>,
    pub weight: u64,
}

impl WeightedPoint {
    pub fn new(coords: Vec<Rational>, weight: u64) -> Self {
        assert!(weight >= 1, "weights are positive");
        Self { coords, weight }
    }
}

pub fn total_weight(points: &[WeightedPoint]) -> u64 {
    points.iter().map(|p| p.weight).sum()
}

/// Merges equal coordinates, summing weights; output sorted by coordinates.
pub fn accumulate<I: IntoIterator<Item = WeightedPoint>>(points: I) -> Vec<WeightedPoint> {
    let mut map: BTreeMap<Vec<Rational>, u64> = BTreeMap::new();
    for p in points {
        *map.entry(p.coords).or_insert(0) += p.weight;
    }
    map.into_iter().map(|(coords, weight)| WeightedPoint { coords, weight }).collect()
}

/// A pair of points, one on each of two curves, above the same point of the
/// xy-plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisPair {
    pub a: u64,
    pub b: u64,
    /// Parameters on the two lines.
    pub ta: Rational,
    pub tb: Rational,
    pub pa: Point3,
    pub pb: Point3,
}

/// Parameters `(t, s)` at which the xy-projections of two non-vertical lines
/// cross, `None` for parallel distinct projections.
pub fn projection_crossing(l1: &Line3, l2: &Line3) -> Result<Option<(Rational, Rational)>> {
    for l in [l1, l2] {
        if l.is_vertical() {
            return Err(Error::VerticalInput(l.id));
        }
    }
    let (d1, d2) = (&l1.dir, &l2.dir);
    let ox = &l2.origin[0] - &l1.origin[0];
    let oy = &l2.origin[1] - &l1.origin[1];
    let det = &d2[0] * &d1[1] - &d1[0] * &d2[1];
    if det.is_zero() {
        let cross = &ox * &d1[1] - &oy * &d1[0];
        if cross.is_zero() {
            return Err(Error::Degenerate(l1.id, l2.id));
        }
        return Ok(None);
    }
    let t = (&d2[0] * &oy - &d2[1] * &ox) / &det;
    let s = (&d1[0] * &oy - &d1[1] * &ox) / &det;
    Ok(Some((t, s)))
}

/// The two points of vertical visibility of `l1` and `l2`, if their
/// projections cross.
pub fn visibility_pair(l1: &Line3, l2: &Line3) -> Result<Option<(Point3, Point3)>> {
    Ok(projection_crossing(l1, l2)?.map(|(t, s)| (l1.point_at(&t), l2.point_at(&s))))
}

fn pair_of(a: &Segment3, b: &Segment3) -> Result<Option<VisPair>> {
    let Some((ta, tb)) = projection_crossing(&a.line, &b.line)? else {
        return Ok(None);
    };
    if !a.contains(&ta) || !b.contains(&tb) {
        return Ok(None);
    }
    Ok(Some(VisPair {
        a: a.id(),
        b: b.id(),
        pa: a.line.point_at(&ta),
        pb: b.line.point_at(&tb),
        ta,
        tb,
    }))
}

/// All visibility pairs among non-vertical curves, in lexicographic index
/// order.
pub fn visibility_pairs(curves: &[Segment3]) -> Result<Vec<VisPair>> {
    let rows: Vec<Result<Vec<VisPair>>> = (0..curves.len())
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::new();
            for j in i + 1..curves.len() {
                if let Some(p) = pair_of(&curves[i], &curves[j])? {
                    row.push(p);
                }
            }
            Ok(row)
        })
        .collect();
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// The multiset of visibility points. With a region predicate, only pairs
/// whose two points both satisfy it contribute.
pub fn visibility_multiset(
    curves: &[Segment3],
    region: Option<&(dyn Fn(&Point3) -> bool + Sync)>,
) -> Result<Vec<WeightedPoint>> {
    let pairs = visibility_pairs(curves)?;
    Ok(multiset_of_pairs(pairs.iter(), region))
}

/// Accumulates both points of every pair (filtered by `region`).
pub fn multiset_of_pairs<'a, I>(pairs: I, region: Option<&(dyn Fn(&Point3) -> bool + Sync)>) -> Vec<WeightedPoint>
where
    I: IntoIterator<Item = &'a VisPair>,
{
    let mut pts = Vec::new();
    for p in pairs {
        if let Some(f) = region {
            if !(f(&p.pa) && f(&p.pb)) {
                continue;
            }
        }
        pts.push(WeightedPoint::new(p.pa.to_vec(), 1));
        pts.push(WeightedPoint::new(p.pb.to_vec(), 1));
    }
    accumulate(pts)
}

/// Checks the input assumptions for depth-order problems: no vertical lines,
/// no coincident projections, pairwise disjoint.
pub fn check_disjoint_non_vertical(lines: &[Line3]) -> Result<()> {
    for l in lines {
        if l.is_vertical() {
            return Err(Error::VerticalInput(l.id));
        }
    }
    let res: Vec<Result<()>> = (0..lines.len())
        .into_par_iter()
        .map(|i| {
            for j in i + 1..lines.len() {
                if let Some((t, s)) = projection_crossing(&lines[i], &lines[j])? {
                    if lines[i].z_at(&t) == lines[j].z_at(&s) {
                        return Err(Error::IntersectingLines(lines[i].id, lines[j].id));
                    }
                }
            }
            Ok(())
        })
        .collect();
    res.into_iter().collect()
}

/// Which of two crossing lines is above at their projection crossing:
/// `Some((upper_id, lower_id, t_upper, t_lower))`.
pub fn above_pair(l1: &Line3, l2: &Line3) -> Result<Option<(u64, u64, Rational, Rational)>> {
    let Some((t, s)) = projection_crossing(l1, l2)? else {
        return Ok(None);
    };
    let z1 = l1.z_at(&t);
    let z2 = l2.z_at(&s);
    match (&z1 - &z2).signum() {
        x if x.is_positive() => Ok(Some((l1.id, l2.id, t, s))),
        x if x.is_negative() => Ok(Some((l2.id, l1.id, s, t))),
        _ => Err(Error::IntersectingLines(l1.id, l2.id)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }
    fn line(id: u64, o: [i64; 3], d: [i64; 3]) -> Line3 {
        Line3::new(id, o.map(q), d.map(q)).unwrap()
    }

    #[test]
    fn projection_examples() {
        assert_eq!(line(0, [0, 0, 0], [0, 0, 1]).xy_projection(), Projection::Point([q(0), q(0)]));
        assert_eq!(
            line(0, [0, 0, 5], [1, 0, 0]).xy_projection(),
            Projection::Line { origin: [q(0), q(0)], dir: [q(1), q(0)] }
        );
        assert!(Line3::new(0, [q(0), q(0), q(0)], [q(0), q(0), q(0)]).is_err());
    }

    #[test]
    fn visibility_pair_examples() {
        let l1 = line(1, [0, 0, 0], [1, 0, 0]);
        let l2 = line(2, [0, 0, 1], [0, 1, 0]);
        assert_eq!(
            visibility_pair(&l1, &l2).unwrap(),
            Some(([q(0), q(0), q(0)], [q(0), q(0), q(1)]))
        );
        let l3 = line(3, [0, 1, 7], [1, 0, 0]);
        assert_eq!(visibility_pair(&l1, &l3).unwrap(), None);
        let l4 = line(4, [1, 0, 2], [0, 1, 1]);
        assert_eq!(
            visibility_pair(&l1, &l4).unwrap(),
            Some(([q(1), q(0), q(0)], [q(1), q(0), q(2)]))
        );
        let l5 = line(5, [3, 0, 9], [2, 0, 1]);
        assert_eq!(visibility_pair(&l1, &l5), Err(Error::Degenerate(1, 5)));
        let v = line(6, [0, 0, 0], [0, 0, 1]);
        assert_eq!(visibility_pair(&l1, &v), Err(Error::VerticalInput(6)));
    }

    #[test]
    fn multiset_examples() {
        let l1 = Segment3::full(line(1, [0, 0, 0], [1, 0, 0]));
        let l2 = Segment3::full(line(2, [0, 0, 1], [0, 1, 0]));
        let m = visibility_multiset(&[l1.clone(), l2.clone()], None).unwrap();
        assert_eq!(total_weight(&m), 2);

        let parallel: Vec<_> = (0..5).map(|i| Segment3::full(line(i, [0, i as i64, i as i64], [1, 0, 0]))).collect();
        assert!(visibility_multiset(&parallel, None).unwrap().is_empty());

        let l3 = Segment3::full(line(3, [0, 5, -2], [1, -1, 0]));
        let m = visibility_multiset(&[l1, l2, l3], None).unwrap();
        assert_eq!(total_weight(&m), 6);
    }

    #[test]
    fn concurrent_projections_accumulate() {
        // Three lines over the origin at heights 0, 1, 2: the three pairs
        // give each of the three points weight 2.
        let ls: Vec<_> = [([0, 0, 0], [1, 0, 0]), ([0, 0, 1], [0, 1, 0]), ([0, 0, 2], [1, 1, 0])]
            .into_iter()
            .enumerate()
            .map(|(i, (o, d))| Segment3::full(line(i as u64, o, d)))
            .collect();
        let m = visibility_multiset(&ls, None).unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|p| p.weight == 2));
    }

    #[test]
    fn segments_need_interior_crossing() {
        let l1 = line(1, [0, 0, 0], [1, 0, 0]);
        let l2 = line(2, [5, -1, 1], [0, 1, 0]);
        let s1 = Segment3::new(l1.clone(), Bound::rational(q(0)), Bound::rational(q(5))).unwrap();
        let s2 = Segment3::full(l2.clone());
        assert!(visibility_pairs(&[s1, s2.clone()]).unwrap().is_empty());
        let s1 = Segment3::new(l1, Bound::rational(q(0)), Bound::rational(q(6))).unwrap();
        assert_eq!(visibility_pairs(&[s1, s2]).unwrap().len(), 1);
    }
}
