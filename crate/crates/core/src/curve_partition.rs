//! First-stage partition for lines and segments.
//!
//! Each round partitions the current multiset of unsplit visibility points
//! with a polynomial of degree at most `D`, multiplies it into `F`, and keeps
//! only the visibility pairs that stay unsplit inside cells marked
//! unacceptable. Vertical lines are handled by a planar partition of their
//! piercing points.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{accumulate, visibility_pairs, Bound, Segment3, VisPair, WeightedPoint};
use crate::params::{first_stage_rounds, Params};
use crate::point_partition::{partition_points, PartitionStats};
use crate::polynomial::{isolate_real_roots, Algebraic, CompiledPoly};
use crate::rng::Rng;
use crate::scalar::rational_to_f64;
use crate::{Poly, Rational, UniPoly};

/// A rational strictly inside the open interval `(lo, hi)`.
pub fn sample_between(lo: &Bound, hi: &Bound) -> Rational {
    match (lo, hi) {
        (Bound::NegInf, Bound::PosInf) => Rational::from_integer(0.into()),
        (Bound::NegInf, Bound::Finite(b)) => b.rational_below(),
        (Bound::Finite(a), Bound::PosInf) => a.rational_above(),
        (Bound::Finite(a), Bound::Finite(b)) => Algebraic::rational_between(a, b),
        _ => panic!("empty interval"),
    }
}

/// An open parameter interval of a line on which no factor vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub lo: Bound,
    pub hi: Bound,
    #[serde(with = "crate::polynomial::rational_serde")]
    pub sample: Rational,
    pub signs: Vec<i8>,
}

/// How one curve meets the sign cells of a list of factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCells {
    pub id: u64,
    /// The curve lies in the zero set of some factor.
    pub in_zero_set: bool,
    /// Distinct parameters (inside the curve) where some factor vanishes.
    pub breaks: Vec<Algebraic>,
    /// `breaks.len() + 1` gaps, empty when `in_zero_set`.
    pub gaps: Vec<Gap>,
}

impl LineCells {
    pub fn new(seg: &Segment3) -> Self {
        let sample = sample_between(&seg.lo, &seg.hi);
        Self {
            id: seg.id(),
            in_zero_set: false,
            breaks: Vec::new(),
            gaps: vec![Gap { lo: seg.lo.clone(), hi: seg.hi.clone(), sample, signs: Vec::new() }],
        }
    }

    /// Refines the gaps by one more factor, given as its restriction to the
    /// curve's line.
    pub fn add_factor(&mut self, u: &UniPoly) {
        if self.in_zero_set {
            return;
        }
        if u.is_zero() {
            self.in_zero_set = true;
            self.gaps.clear();
            return;
        }
        let roots = isolate_real_roots(u).expect("nonzero");
        let mut gaps = Vec::with_capacity(self.gaps.len() + roots.len());
        let mut breaks = Vec::with_capacity(self.breaks.len() + roots.len());
        let mut ri = 0;
        for (gi, gap) in self.gaps.drain(..).enumerate() {
            if gi > 0 {
                breaks.push(self.breaks[gi - 1].clone());
            }
            // Skip roots at or below the gap's lower end.
            while ri < roots.len() && gap.lo.cmp_bound(&Bound::Finite(roots[ri].clone())) != Ordering::Less {
                ri += 1;
            }
            let mut inside = Vec::new();
            while ri < roots.len() && gap.hi.cmp_bound(&Bound::Finite(roots[ri].clone())) == Ordering::Greater {
                inside.push(roots[ri].clone());
                ri += 1;
            }
            if inside.is_empty() {
                let mut g = gap;
                g.signs.push(u.sign_at(&g.sample));
                gaps.push(g);
                continue;
            }
            let mut lo = gap.lo.clone();
            for (k, r) in inside.iter().enumerate() {
                let hi = Bound::Finite(r.clone());
                let sample = sample_between(&lo, &hi);
                let mut signs = gap.signs.clone();
                signs.push(u.sign_at(&sample));
                gaps.push(Gap { lo, hi: hi.clone(), sample, signs });
                breaks.push(r.clone());
                lo = hi;
                if k + 1 == inside.len() {
                    let sample = sample_between(&lo, &gap.hi);
                    let mut signs = gap.signs.clone();
                    signs.push(u.sign_at(&sample));
                    gaps.push(Gap { lo: lo.clone(), hi: gap.hi.clone(), sample, signs });
                }
            }
        }
        self.gaps = gaps;
        self.breaks = breaks;
    }

    /// Number of distinct points where the curve crosses the zero set.
    pub fn crossings(&self) -> usize {
        self.breaks.len()
    }

    /// Distinct sign vectors met by the curve.
    pub fn cells(&self) -> Vec<&Vec<i8>> {
        let mut v: Vec<&Vec<i8>> = self.gaps.iter().map(|g| &g.signs).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Per-curve incidence with the sign cells of `factors`.
pub fn line_cells(seg: &Segment3, factors: &[Poly]) -> LineCells {
    let mut lc = LineCells::new(seg);
    for f in factors {
        lc.add_factor(&seg.line.restrict(f));
    }
    lc
}

/// Result of [`curves_in_cells`].
#[derive(Debug, Clone, PartialEq)]
pub struct Incidence {
    pub lines: Vec<LineCells>,
    /// Sign vector to the sorted ids of curves meeting that cell.
    pub cells: BTreeMap<Vec<i8>, Vec<u64>>,
    /// Curves contained in the zero set.
    pub zero_set_lines: Vec<u64>,
}

/// Groups curve ids by the sign cells their gaps visit.
pub fn incidence_map(lines: &[LineCells]) -> BTreeMap<Vec<i8>, Vec<u64>> {
    let mut cells: BTreeMap<Vec<i8>, Vec<u64>> = BTreeMap::new();
    for lc in lines {
        for s in lc.cells() {
            cells.entry(s.clone()).or_default().push(lc.id);
        }
    }
    for v in cells.values_mut() {
        v.sort_unstable();
        v.dedup();
    }
    cells
}

/// Cuts every curve at the real roots of each factor's restriction and
/// assigns each open interval to the sign cell of its sample point.
pub fn curves_in_cells(factors: &[Poly], curves: &[Segment3]) -> Incidence {
    let lines: Vec<LineCells> = curves.par_iter().map(|c| line_cells(c, factors)).collect();
    let cells = incidence_map(&lines);
    let zero_set_lines = lines.iter().filter(|l| l.in_zero_set).map(|l| l.id).collect();
    Incidence { lines, cells, zero_set_lines }
}

/// Whether a cell meets few curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Acceptable,
    Unacceptable,
}

/// A sign cell of the final first-stage polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub signs: Vec<i8>,
    pub incident: Vec<u64>,
    pub label: Label,
    /// Weight of visibility pairs with both points inside the cell.
    pub visibility_weight: u64,
}

/// Trace of one first-stage round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub factor_degrees: Vec<u32>,
    /// Degree of `F_k` after the round.
    pub degree: u32,
    pub weight_prev: u64,
    pub weight_next: u64,
    /// Nonempty cells of `F_k` (met by at least one curve).
    pub cells: usize,
    pub unacceptable: usize,
    /// Cells above the count threshold that were left unmarked to keep the
    /// marked weight within half of `weight_prev`.
    pub skipped: usize,
    /// Cells are candidates for marking when their count exceeds this value.
    pub count_threshold: u64,
    /// Smallest incident count among marked cells (0 if none).
    pub min_marked_count: u64,
    pub partition: PartitionStats,
}

/// Output of the first stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageOneResult {
    /// Factors of `P`: the `F_k` factors in round order, then the planar
    /// factors for vertical lines (lifted, z-free).
    pub factors: Vec<Poly>,
    pub vertical_factors: usize,
    pub lines: Vec<LineCells>,
    pub cells: Vec<Cell>,
    pub history: Vec<RoundRecord>,
    pub v0_weight: u64,
    pub v_final_weight: u64,
    pub n: usize,
    pub d: u32,
    /// Per-cell curve bound `a_cut * n / D^2` used for labels.
    pub cell_bound: usize,
    /// Reporting bound `c_vis * n^2 / D^4` for unsplit visibility weight.
    pub vis_bound: u64,
    pub planar: Option<PartitionStats>,
}

impl StageOneResult {
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.degree().unwrap_or(0)).sum()
    }

    pub fn product(&self) -> Poly {
        Poly::product(3, &self.factors)
    }

    pub fn line(&self, id: u64) -> Option<&LineCells> {
        self.lines.iter().find(|l| l.id == id)
    }
}

/// Sign vectors of visibility points, one entry per factor.
struct PairSigns {
    a: Vec<Vec<i8>>,
    b: Vec<Vec<i8>>,
    fa: Vec<[f64; 3]>,
    fb: Vec<[f64; 3]>,
}

impl PairSigns {
    fn new(pairs: &[VisPair]) -> Self {
        let f = |p: &[Rational; 3]| [rational_to_f64(&p[0]), rational_to_f64(&p[1]), rational_to_f64(&p[2])];
        Self {
            a: vec![Vec::new(); pairs.len()],
            b: vec![Vec::new(); pairs.len()],
            fa: pairs.iter().map(|p| f(&p.pa)).collect(),
            fb: pairs.iter().map(|p| f(&p.pb)).collect(),
        }
    }

    fn add_factor(&mut self, pairs: &[VisPair], f: &Poly) {
        let cf = CompiledPoly::new(f);
        let sa: Vec<(i8, i8)> = pairs
            .par_iter()
            .enumerate()
            .map(|(i, p)| (cf.sign_at_with(&self.fa[i], &p.pa), cf.sign_at_with(&self.fb[i], &p.pb)))
            .collect();
        for (i, (x, y)) in sa.into_iter().enumerate() {
            self.a[i].push(x);
            self.b[i].push(y);
        }
    }

    /// The common cell of an unsplit pair.
    fn unsplit_cell(&self, i: usize) -> Option<&Vec<i8>> {
        let a = &self.a[i];
        if a.contains(&0) || *a != self.b[i] {
            None
        } else {
            Some(a)
        }
    }
}

fn multiset_of(pairs: &[VisPair], idx: &[usize]) -> Vec<WeightedPoint> {
    accumulate(idx.iter().flat_map(|&i| {
        [WeightedPoint::new(pairs[i].pa.to_vec(), 1), WeightedPoint::new(pairs[i].pb.to_vec(), 1)]
    }))
}

/// One round: partitions the current visibility multiset, refines the line
/// incidences and pair signs, and selects the pairs kept for the next round.
#[allow(clippy::too_many_arguments)]
fn run_round(
    round: usize,
    segs: &[Segment3],
    lines: &mut [LineCells],
    pairs: &[VisPair],
    signs: &mut PairSigns,
    current: &[usize],
    factors: &mut Vec<Poly>,
    n: usize,
    d: u32,
    params: &Params,
    rng: &mut Rng,
) -> Result<(Vec<usize>, RoundRecord)> {
    let weight_prev = 2 * current.len() as u64;
    let pts = multiset_of(pairs, current);
    let r = 8 * (d as u64).pow(3);
    let part = partition_points(&pts, r, params, rng, Some(d))?;
    let new_factors = part.poly.factors.clone();
    for f in &new_factors {
        let restricted: Vec<UniPoly> = segs.iter().map(|s| s.line.restrict(f)).collect();
        lines.par_iter_mut().zip(restricted.par_iter()).for_each(|(lc, u)| lc.add_factor(u));
        signs.add_factor(pairs, f);
        factors.push(f.clone());
    }
    let cells = incidence_map(lines);
    // Unsplit weight of the current pairs, per cell.
    let mut cell_weight: BTreeMap<&Vec<i8>, u64> = BTreeMap::new();
    for &i in current {
        if let Some(c) = signs.unsplit_cell(i) {
            *cell_weight.entry(c).or_insert(0) += 2;
        }
    }
    let threshold = 2 * n as u64 / (d as u64).pow(2).max(1);
    let mut order: Vec<(&Vec<i8>, usize)> = cells.iter().map(|(k, v)| (k, v.len())).collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut marked: Vec<&Vec<i8>> = Vec::new();
    let mut acc = 0u64;
    let mut skipped = 0;
    let mut min_marked = 0u64;
    for (k, count) in order {
        if count as u64 <= threshold {
            break;
        }
        let w = cell_weight.get(k).copied().unwrap_or(0);
        if 2 * (acc + w) <= weight_prev {
            acc += w;
            marked.push(k);
            min_marked = count as u64;
        } else {
            skipped += 1;
        }
    }
    marked.sort();
    let next: Vec<usize> = current
        .iter()
        .copied()
        .filter(|&i| signs.unsplit_cell(i).is_some_and(|c| marked.binary_search(&c).is_ok()))
        .collect();
    let record = RoundRecord {
        round,
        factor_degrees: new_factors.iter().map(|f| f.degree().unwrap_or(0)).collect(),
        degree: factors.iter().map(|f| f.degree().unwrap_or(0)).sum(),
        weight_prev,
        weight_next: 2 * next.len() as u64,
        cells: cells.len(),
        unacceptable: marked.len(),
        skipped,
        count_threshold: threshold,
        min_marked_count: min_marked,
        partition: part.poly.stats.clone(),
    };
    Ok((next, record))
}

/// Runs the first stage with parameter `d` on the given curves.
pub fn first_stage(curves: &[Segment3], d: u32, params: &Params, rng: &mut Rng) -> Result<StageOneResult> {
    let n = curves.len();
    let (vertical, non_vertical): (Vec<&Segment3>, Vec<&Segment3>) = curves.iter().partition(|c| c.line.is_vertical());
    let segs: Vec<Segment3> = non_vertical.into_iter().cloned().collect();
    let pairs = visibility_pairs(&segs)?;
    let mut signs = PairSigns::new(&pairs);
    let mut lines: Vec<LineCells> = segs.iter().map(LineCells::new).collect();
    let mut factors: Vec<Poly> = Vec::new();
    let mut history = Vec::new();
    let mut current: Vec<usize> = (0..pairs.len()).collect();
    let rounds = first_stage_rounds(d) as usize;
    for round in 1..=rounds {
        if current.is_empty() {
            break;
        }
        let (next, rec) = run_round(round, &segs, &mut lines, &pairs, &mut signs, &current, &mut factors, n, d, params, rng)?;
        current = next;
        history.push(rec);
    }
    let v_final_weight = 2 * current.len() as u64;
    let mut vertical_factors = 0;
    let mut planar = None;
    if !vertical.is_empty() {
        let pts: Vec<WeightedPoint> = accumulate(
            vertical.iter().map(|s| WeightedPoint::new(vec![s.line.origin[0].clone(), s.line.origin[1].clone()], 1)),
        );
        let r = (d as u64).pow(2).max(2);
        let part = partition_points(&pts, r, params, rng, Some(d))?;
        for f in &part.poly.factors {
            let lifted = f.lift(3);
            let restricted: Vec<UniPoly> = segs.iter().map(|s| s.line.restrict(&lifted)).collect();
            lines.par_iter_mut().zip(restricted.par_iter()).for_each(|(lc, u)| lc.add_factor(u));
            signs.add_factor(&pairs, &lifted);
            factors.push(lifted);
            vertical_factors += 1;
        }
        planar = Some(part.poly.stats);
    }
    for v in &vertical {
        lines.push(line_cells(v, &factors));
    }
    // Restore input order.
    let pos: BTreeMap<u64, usize> = curves.iter().enumerate().map(|(i, c)| (c.id(), i)).collect();
    lines.sort_by_key(|l| pos[&l.id]);

    let cell_bound = params.cell_curve_bound(n, d);
    let dd = (d.max(1) as u64).pow(4);
    let vis_bound = params.c_vis * (n as u64).pow(2) / dd;
    let mut vis: BTreeMap<&Vec<i8>, u64> = BTreeMap::new();
    for i in 0..pairs.len() {
        if let Some(c) = signs.unsplit_cell(i) {
            *vis.entry(c).or_insert(0) += 2;
        }
    }
    let cells = incidence_map(&lines)
        .into_iter()
        .map(|(s, incident)| {
            let label = if incident.len() > cell_bound { Label::Unacceptable } else { Label::Acceptable };
            let visibility_weight = vis.get(&s).copied().unwrap_or(0);
            Cell { signs: s, incident, label, visibility_weight }
        })
        .collect();
    Ok(StageOneResult {
        factors,
        vertical_factors,
        lines,
        cells,
        history,
        v0_weight: 2 * pairs.len() as u64,
        v_final_weight,
        n,
        d,
        cell_bound,
        vis_bound,
        planar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Line3;
    use crate::rng::from_seed;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }
    fn seg(id: u64, o: [i64; 3], d: [i64; 3]) -> Segment3 {
        Segment3::full(Line3::new(id, o.map(q), d.map(q)).unwrap())
    }

    #[test]
    fn incidence_examples() {
        let z = Poly::var(3, 2);
        let inc = curves_in_cells(&[z.clone()], &[seg(1, [0, 0, 1], [1, 0, 0]), seg(2, [0, 0, -1], [1, 0, 0])]);
        assert_eq!(inc.cells[&vec![1]], vec![1]);
        assert_eq!(inc.cells[&vec![-1]], vec![2]);

        let inc = curves_in_cells(&[z.clone()], &[seg(1, [0, 0, 0], [1, 0, 1])]);
        assert_eq!(inc.cells.len(), 2);
        assert_eq!(inc.lines[0].breaks, vec![Algebraic::Rational(q(0))]);

        let zm1 = &z - &Poly::one(3);
        let inc = curves_in_cells(&[z.clone(), zm1], &[seg(1, [0, 0, 0], [3, 5, 2])]);
        assert_eq!(inc.lines[0].gaps.len(), 3);
        assert!(inc.lines[0].crossings() <= 2);

        let inc = curves_in_cells(&[z], &[seg(7, [0, 0, 0], [1, 1, 0])]);
        assert_eq!(inc.zero_set_lines, vec![7]);
        assert!(inc.cells.is_empty());
    }

    #[test]
    fn shared_roots_are_merged() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let l = seg(1, [0, 0, 0], [1, 1, 1]);
        let lc = line_cells(&l, &[x.clone(), y.clone(), &(&x * &x) - &Poly::constant(3, q(2))]);
        assert_eq!(lc.crossings(), 3);
        assert_eq!(lc.gaps.len(), 4);
        assert_eq!(lc.gaps[0].signs, vec![-1, -1, 1]);
        assert_eq!(lc.gaps[1].signs, vec![-1, -1, -1]);
        assert_eq!(lc.gaps[2].signs, vec![1, 1, -1]);
        assert_eq!(lc.gaps[3].signs, vec![1, 1, 1]);
    }

    #[test]
    fn empty_visibility_gives_single_cell() {
        let curves: Vec<_> = (0..10).map(|i| seg(i, [0, i as i64, 3 * i as i64], [1, 0, 0])).collect();
        let res = first_stage(&curves, 2, &Params::default(), &mut from_seed(1)).unwrap();
        assert!(res.factors.is_empty());
        assert_eq!(res.cells.len(), 1);
        assert_eq!(res.cells[0].incident.len(), 10);
        assert_eq!(res.cells[0].visibility_weight, 0);
    }

    #[test]
    fn d_one_has_no_rounds() {
        let curves = vec![seg(0, [0, 0, 0], [1, 0, 0]), seg(1, [0, 0, 1], [0, 1, 0])];
        let res = first_stage(&curves, 1, &Params::default(), &mut from_seed(1)).unwrap();
        assert!(res.history.is_empty());
        assert_eq!(res.cells.len(), 1);
    }

    #[test]
    fn vertical_lines_use_planar_factor() {
        let curves: Vec<_> = (0..4).map(|i| seg(i, [i as i64, (i * i) as i64, 0], [0, 0, 1])).collect();
        let res = first_stage(&curves, 2, &Params::default(), &mut from_seed(4)).unwrap();
        assert_eq!(res.factors.len(), res.vertical_factors);
        for c in &res.cells {
            assert!(c.incident.len() <= res.cell_bound);
        }
    }
}
