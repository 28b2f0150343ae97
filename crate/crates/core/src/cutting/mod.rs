//! Second stage: refinement of cells that meet too many curves.
//!
//! For an unacceptable cell the arcs of its incident curves are sampled, the
//! xy-projections of the sample are decomposed into trapezoids, and each
//! trapezoid is lifted to a vertical prism. A second-stage cell is the
//! intersection of the parent sign cell with one prism; it is represented
//! implicitly by the pair (sign vector, trapezoid).

pub mod trapezoid;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve_partition::{Label, LineCells, StageOneResult};
use crate::error::{Error, Result};
use crate::geometry::{Bound, Line3, Segment3};
use crate::params::log3_factor;
use crate::polynomial::Algebraic;
use crate::rng::child;
use crate::{Params, Rational};

pub use trapezoid::{trapezoidal_decomposition, Decomposition, PlanarSegment, Trapezoid, Vertex};

/// A second-stage cell: one trapezoid of a refined parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondStageCell {
    pub trapezoid: usize,
    pub incident: Vec<u64>,
}

/// An unacceptable first-stage cell after refinement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedCell {
    /// Index into the first-stage cell list.
    pub parent: usize,
    /// The plane is sheared by `x' = x + shear * y` before decomposing, so
    /// that no sampled projection is parallel to the y-axis.
    #[serde(with = "crate::polynomial::rational_serde")]
    pub shear: Rational,
    /// Final sampling probability.
    #[serde(with = "crate::polynomial::rational_serde")]
    pub p: Rational,
    pub attempts: usize,
    /// Arcs drawn in the accepted sample.
    pub sampled_arcs: usize,
    pub decomposition: Decomposition,
    pub cells: Vec<SecondStageCell>,
}

impl RefinedCell {
    pub fn sheared(&self, x: &Rational, y: &Rational) -> Rational {
        x + &self.shear * y
    }

    /// Curves whose projection contributed a sampled arc.
    pub fn sampled_curves(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.decomposition.segments.iter().map(|s| s.curve).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Counts reported for the whole decomposition. Bounds involving
/// `log2(D+1)^3` are rounded up to integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionStats {
    pub n: usize,
    pub d: u32,
    pub degree: u32,
    pub stage1_cells: usize,
    pub unacceptable: usize,
    pub second_stage_cells: usize,
    /// Cells meeting at least one curve (acceptable first-stage cells plus
    /// nonempty second-stage cells).
    pub nonempty_cells: usize,
    /// `8 * D^3 * log2(D+1)^3`.
    pub nonempty_cell_bound: u64,
    pub max_cell_curves: usize,
    pub cell_bound: usize,
    pub sampled_arcs: usize,
    /// Curves with at least one sampled arc.
    pub sampled_curves: usize,
    pub zero_set_curves: usize,
    /// Crossings with the boundary summed over curves that are neither
    /// sampled nor contained in the zero set.
    pub boundary_crossings: u64,
    /// `c_bnd * n * D * log2(D+1)^3`.
    pub boundary_budget: u64,
    /// Largest unsplit visibility weight over unacceptable cells.
    pub max_unacceptable_visibility: u64,
    pub vis_bound: u64,
}

/// First stage plus refinements of its unacceptable cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullDecomposition {
    pub stage1: StageOneResult,
    pub refined: Vec<RefinedCell>,
    pub stats: DecompositionStats,
}

/// Where a query point lies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Boundary,
    /// A first-stage cell that was not refined (possibly one met by no
    /// curve, so absent from the cell list).
    Stage1(Vec<i8>),
    Refined { refined: usize, trapezoid: usize },
}

/// One arc: a gap of a curve lying in the cell.
struct Arc<'a> {
    curve: &'a Segment3,
    lo: &'a Bound,
    hi: &'a Bound,
}

fn outer_lo(b: &Bound) -> Option<Rational> {
    match b {
        Bound::NegInf => None,
        Bound::Finite(Algebraic::Rational(q)) => Some(q.clone()),
        Bound::Finite(a) => Some(a.rational_below()),
        Bound::PosInf => unreachable!("lower end at +inf"),
    }
}

fn outer_hi(b: &Bound) -> Option<Rational> {
    match b {
        Bound::PosInf => None,
        Bound::Finite(Algebraic::Rational(q)) => Some(q.clone()),
        Bound::Finite(a) => Some(a.rational_above()),
        Bound::NegInf => unreachable!("upper end at -inf"),
    }
}

/// Projected parametrization `(a, b)` of a line in sheared coordinates.
fn projected(line: &Line3, shear: &Rational) -> ([Rational; 2], [Rational; 2]) {
    let a = [&line.origin[0] + shear * &line.origin[1], line.origin[1].clone()];
    let b = [&line.dir[0] + shear * &line.dir[1], line.dir[1].clone()];
    (a, b)
}

/// Smallest integer shear that makes every projection non-vertical.
fn choose_shear<'a>(lines: impl Iterator<Item = &'a Line3> + Clone) -> Rational {
    let mut s = 0i64;
    loop {
        let sq = Rational::from_integer(s.into());
        if lines.clone().all(|l| !(&l.dir[0] + &sq * &l.dir[1]).is_zero()) {
            return sq;
        }
        s += 1;
    }
}

/// Planar segment carrying the parameter range `(lo, hi)` of a line.
fn planar_segment(line: &Line3, shear: &Rational, lo: Option<Rational>, hi: Option<Rational>) -> PlanarSegment {
    let (a, b) = projected(line, shear);
    let m = &b[1] / &b[0];
    let c = &a[1] - &m * &a[0];
    let x = |t: Option<Rational>| t.map(|t| &a[0] + &t * &b[0]);
    let (xlo, xhi) = if b[0].is_positive() { (x(lo), x(hi)) } else { (x(hi), x(lo)) };
    PlanarSegment { curve: line.id, m, c, lo: xlo, hi: xhi }
}

/// Union of sampled parameter ranges per curve, merged where they overlap
/// or touch, so that collinear pieces never overlap.
fn merge_ranges(mut r: Vec<(Option<Rational>, Option<Rational>)>) -> Vec<(Option<Rational>, Option<Rational>)> {
    r.sort_by(|a, b| match (&a.0, &b.0) {
        (None, None) => std::cmp::Ordering::Equal,
        (None, _) => std::cmp::Ordering::Less,
        (_, None) => std::cmp::Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    });
    let mut out: Vec<(Option<Rational>, Option<Rational>)> = Vec::new();
    for (lo, hi) in r {
        if let Some(last) = out.last_mut() {
            let touches = match (&last.1, &lo) {
                (None, _) | (_, None) => true,
                (Some(h), Some(l)) => l <= h,
            };
            if touches {
                last.1 = match (&last.1, &hi) {
                    (Some(a), Some(b)) => Some(a.max(b).clone()),
                    _ => None,
                };
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

fn bound_of(lo: Option<Rational>, neg: bool) -> Bound {
    match lo {
        Some(q) => Bound::rational(q),
        None if neg => Bound::NegInf,
        None => Bound::PosInf,
    }
}

/// Whether the open intervals `(a0, a1)` and `(b0, b1)` meet.
fn meets(a0: &Bound, a1: &Bound, b0: &Bound, b1: &Bound) -> bool {
    let lo = if a0.cmp_bound(b0).is_ge() { a0 } else { b0 };
    let hi = if a1.cmp_bound(b1).is_le() { a1 } else { b1 };
    lo.cmp_bound(hi).is_lt()
}

/// Trapezoids met by an arc, in index order.
fn arc_trapezoids(dec: &Decomposition, shear: &Rational, arc: &Arc<'_>) -> Vec<usize> {
    let line = &arc.curve.line;
    if line.is_vertical() {
        let x = &line.origin[0] + shear * &line.origin[1];
        return dec.locate(&x, &line.origin[1]).into_iter().collect();
    }
    let (a, b) = projected(line, shear);
    (0..dec.trapezoids.len())
        .filter(|&i| {
            dec.line_interval(i, [&a[0], &a[1]], [&b[0], &b[1]]).is_some_and(|(lo, hi)| {
                meets(&bound_of(lo, true), &bound_of(hi, false), arc.lo, arc.hi)
            })
        })
        .collect()
}

fn cells_of(dec: &Decomposition, shear: &Rational, arcs: &[Arc<'_>]) -> Vec<SecondStageCell> {
    let per_arc: Vec<Vec<usize>> = arcs.iter().map(|a| arc_trapezoids(dec, shear, a)).collect();
    let mut inc: Vec<Vec<u64>> = vec![Vec::new(); dec.trapezoids.len()];
    for (a, ts) in arcs.iter().zip(&per_arc) {
        for &t in ts {
            inc[t].push(a.curve.id());
        }
    }
    inc.into_iter()
        .enumerate()
        .map(|(trapezoid, mut incident)| {
            incident.sort_unstable();
            incident.dedup();
            SecondStageCell { trapezoid, incident }
        })
        .collect()
}

fn arcs_of<'a>(signs: &[i8], curves: &'a [Segment3], lines: &'a [LineCells]) -> Vec<Arc<'a>> {
    let mut out = Vec::new();
    for (c, lc) in curves.iter().zip(lines) {
        for g in &lc.gaps {
            if g.signs == signs {
                out.push(Arc { curve: c, lo: &g.lo, hi: &g.hi });
            }
        }
    }
    out
}

/// `p = min(1/2, c * D^2 / n)`.
pub fn sampling_probability(params: &Params, n: usize, d: u32) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    if n == 0 {
        return half;
    }
    let p = Rational::new((params.c_sample * (d as u64).pow(2)).into(), (n as u64).into());
    p.min(half)
}

fn bernoulli(rng: &mut crate::rng::Rng, p: &Rational) -> bool {
    // Compare a uniform 64-bit integer against p * 2^64.
    let u: u64 = rng.gen();
    let lhs = num_bigint::BigInt::from(u) * p.denom();
    let rhs = p.numer() << 64;
    lhs < rhs
}

/// Refines the first-stage cell `index` of `stage1`.
///
/// `curves` must be the curves `stage1` was computed from, in the same
/// order. Arcs are drawn with probability `p`; after `resample_budget`
/// rejected samples `p` doubles (capped at 1). With `p = 1` every arc lies
/// on a sampled segment and only vertical curves can meet a trapezoid.
pub fn refine_cell(
    stage1: &StageOneResult,
    curves: &[Segment3],
    index: usize,
    params: &Params,
    seed: u64,
) -> Result<RefinedCell> {
    let cell = &stage1.cells[index];
    let arcs = arcs_of(&cell.signs, curves, &stage1.lines);
    let bound = stage1.cell_bound;
    let mut rng = child(seed, index as u64);
    let mut p = sampling_probability(params, stage1.n, stage1.d);
    let mut attempts = 0;
    loop {
        for _ in 0..params.resample_budget.max(1) {
            attempts += 1;
            let mut by_curve: BTreeMap<usize, Vec<(Option<Rational>, Option<Rational>)>> = BTreeMap::new();
            let mut sampled = 0;
            for (k, a) in arcs.iter().enumerate() {
                if a.curve.line.is_vertical() || !bernoulli(&mut rng, &p) {
                    continue;
                }
                sampled += 1;
                by_curve.entry(k).or_default();
                by_curve.get_mut(&k).unwrap().push((outer_lo(a.lo), outer_hi(a.hi)));
            }
            // Group ranges by curve rather than by arc.
            let mut ranges: BTreeMap<u64, (&Line3, Vec<(Option<Rational>, Option<Rational>)>)> = BTreeMap::new();
            for (k, r) in by_curve {
                let e = ranges.entry(arcs[k].curve.id()).or_insert((&arcs[k].curve.line, Vec::new()));
                e.1.extend(r);
            }
            let shear = choose_shear(ranges.values().map(|(l, _)| *l));
            let mut segs = Vec::new();
            for (line, r) in ranges.into_values() {
                for (lo, hi) in merge_ranges(r) {
                    segs.push(planar_segment(line, &shear, lo, hi));
                }
            }
            let decomposition = trapezoidal_decomposition(segs)?;
            let cells = cells_of(&decomposition, &shear, &arcs);
            if cells.iter().all(|c| c.incident.len() <= bound) {
                return Ok(RefinedCell { parent: index, shear, p, attempts, sampled_arcs: sampled, decomposition, cells });
            }
        }
        if p.is_one() {
            return Err(Error::ResampleBudgetExhausted(attempts));
        }
        p = (p * Rational::from_integer(2.into())).min(Rational::one());
    }
}

/// Refines every unacceptable cell of `stage1` and assembles the reports.
pub fn second_stage(stage1: StageOneResult, curves: &[Segment3], params: &Params, seed: u64) -> Result<FullDecomposition> {
    let unacceptable: Vec<usize> =
        (0..stage1.cells.len()).filter(|&i| stage1.cells[i].label == Label::Unacceptable).collect();
    let refined = unacceptable
        .par_iter()
        .map(|&i| refine_cell(&stage1, curves, i, params, seed))
        .collect::<Result<Vec<_>>>()?;
    let stats = decomposition_stats(&stage1, curves, &refined, params);
    Ok(FullDecomposition { stage1, refined, stats })
}

fn decomposition_stats(
    stage1: &StageOneResult,
    curves: &[Segment3],
    refined: &[RefinedCell],
    params: &Params,
) -> DecompositionStats {
    let (n, d) = (stage1.n, stage1.d);
    let log3 = log3_factor(d);
    let acceptable: Vec<usize> = stage1
        .cells
        .iter()
        .filter(|c| c.label == Label::Acceptable)
        .map(|c| c.incident.len())
        .collect();
    let second: Vec<usize> = refined.iter().flat_map(|r| r.cells.iter().map(|c| c.incident.len())).collect();
    let nonempty = acceptable.iter().filter(|&&k| k > 0).count() + second.iter().filter(|&&k| k > 0).count();
    let mut sampled: Vec<u64> = refined.iter().flat_map(|r| r.sampled_curves()).collect();
    sampled.sort_unstable();
    sampled.dedup();

    // Wall crossings: trapezoids met by each arc minus one, per refined cell.
    let mut wall: BTreeMap<u64, u64> = BTreeMap::new();
    for r in refined {
        let signs = &stage1.cells[r.parent].signs;
        for a in arcs_of(signs, curves, &stage1.lines) {
            let k = arc_trapezoids(&r.decomposition, &r.shear, &a).len() as u64;
            *wall.entry(a.curve.id()).or_insert(0) += k.saturating_sub(1);
        }
    }
    let boundary_crossings = stage1
        .lines
        .iter()
        .filter(|l| !l.in_zero_set && sampled.binary_search(&l.id).is_err())
        .map(|l| l.crossings() as u64 + wall.get(&l.id).copied().unwrap_or(0))
        .sum();
    DecompositionStats {
        n,
        d,
        degree: stage1.degree(),
        stage1_cells: stage1.cells.len(),
        unacceptable: refined.len(),
        second_stage_cells: second.len(),
        nonempty_cells: nonempty,
        nonempty_cell_bound: (8.0 * (d as f64).powi(3) * log3).ceil() as u64,
        max_cell_curves: acceptable.iter().chain(&second).copied().max().unwrap_or(0),
        cell_bound: stage1.cell_bound,
        sampled_arcs: refined.iter().map(|r| r.sampled_arcs).sum(),
        sampled_curves: sampled.len(),
        zero_set_curves: stage1.lines.iter().filter(|l| l.in_zero_set).count(),
        boundary_crossings,
        boundary_budget: (params.c_bnd as f64 * n as f64 * d as f64 * log3).ceil() as u64,
        max_unacceptable_visibility: refined.iter().map(|r| stage1.cells[r.parent].visibility_weight).max().unwrap_or(0),
        vis_bound: stage1.vis_bound,
    }
}

impl FullDecomposition {
    /// Every emitted cell with its incident curves: acceptable first-stage
    /// cells first, then second-stage cells.
    pub fn cell_lists(&self) -> Vec<&[u64]> {
        let mut out: Vec<&[u64]> = self
            .stage1
            .cells
            .iter()
            .filter(|c| c.label == Label::Acceptable)
            .map(|c| c.incident.as_slice())
            .collect();
        for r in &self.refined {
            out.extend(r.cells.iter().map(|c| c.incident.as_slice()));
        }
        out
    }

    /// Locates a point of 3-space.
    pub fn locate(&self, x: &[Rational; 3]) -> Location {
        let mut signs = Vec::with_capacity(self.stage1.factors.len());
        for f in &self.stage1.factors {
            let v = f.eval(x).expect("trivariate");
            if v.is_zero() {
                return Location::Boundary;
            }
            signs.push(if v.is_positive() { 1 } else { -1 });
        }
        let parent = self.stage1.cells.iter().position(|c| c.signs == signs);
        let Some(parent) = parent else {
            return Location::Stage1(signs);
        };
        match self.refined.iter().position(|r| r.parent == parent) {
            None => Location::Stage1(signs),
            Some(ri) => {
                let r = &self.refined[ri];
                match r.decomposition.locate(&r.sheared(&x[0], &x[1]), &x[1]) {
                    Some(trapezoid) => Location::Refined { refined: ri, trapezoid },
                    None => Location::Boundary,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_partition::first_stage;
    use crate::generate::parallel_family;
    use crate::rng::from_seed;

    #[test]
    fn merge_touching_ranges() {
        let q = |n: i64| Some(Rational::from_integer(n.into()));
        let m = merge_ranges(vec![(q(2), q(3)), (None, q(1)), (q(1), q(2)), (q(5), None)]);
        assert_eq!(m, vec![(None, q(3)), (q(5), None)]);
    }

    #[test]
    fn parallel_family_is_refined() {
        let curves: Vec<Segment3> = parallel_family(40).into_iter().map(Segment3::full).collect();
        let params = Params::default();
        let s1 = first_stage(&curves, 3, &params, &mut from_seed(1)).unwrap();
        assert_eq!(s1.cells.len(), 1);
        assert_eq!(s1.cells[0].label, Label::Unacceptable);
        let full = second_stage(s1, &curves, &params, 5).unwrap();
        assert_eq!(full.refined.len(), 1);
        for c in full.cell_lists() {
            assert!(c.len() <= full.stats.cell_bound);
        }
        // The sampled lines are parallel, so the trapezoids are the strips
        // between them.
        let r = &full.refined[0];
        assert_eq!(r.decomposition.trapezoids.len(), r.decomposition.segments.len() + 1);
    }

    #[test]
    fn empty_cell_gives_one_trapezoid() {
        let dec = trapezoidal_decomposition(Vec::new()).unwrap();
        assert!(cells_of(&dec, &Rational::zero(), &[]).iter().all(|c| c.incident.is_empty()));
    }
}
