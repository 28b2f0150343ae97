//! Brute-force verifiers.
//!
//! Everything here is recomputed from scratch with direct polynomial
//! evaluation and pairwise loops; the only shared code with the algorithms
//! is the polynomial kernel and the plain data types.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curve_partition::{Label, StageOneResult};
use crate::cutting::{Decomposition, FullDecomposition, RefinedCell};
use crate::depth::{CutKind, DepthGraph, Piece};
use crate::geometry::{Bound, Line3, Segment3, WeightedPoint};
use crate::params::{first_stage_rounds, log3_factor};
use crate::polynomial::{isolate_real_roots, Algebraic};
use crate::{Params, Poly, Rational};

/// One named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: String,
    pub bound: String,
    pub slack: String,
    /// A concrete witness for a failure (cell, pair or point).
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    fn push(&mut self, name: &str, pass: bool, measured: impl ToString, bound: impl ToString, witness: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            measured: measured.to_string(),
            bound: bound.to_string(),
            slack: "1".into(),
            witness: if pass { None } else { witness },
        });
    }

    fn push_slack(&mut self, name: &str, measured: u64, bound: u64, slack: u64) {
        let pass = measured <= bound.saturating_mul(slack);
        self.checks.push(Check {
            name: name.into(),
            pass,
            measured: measured.to_string(),
            bound: bound.to_string(),
            slack: slack.to_string(),
            witness: None,
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

fn sign(v: &Rational) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact sign vector of a point, `None` if some factor vanishes.
fn signs_at(factors: &[Poly], x: &[Rational]) -> Option<Vec<i8>> {
    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        let s = sign(&f.eval(x).expect("dimension"));
        if s == 0 {
            return None;
        }
        out.push(s);
    }
    Some(out)
}

/// Weighted counts `(positive, negative, zero)` of `f` over `points`.
pub fn side_weights(f: &Poly, points: &[&WeightedPoint]) -> (u64, u64, u64) {
    let mut w = (0, 0, 0);
    for p in points {
        match sign(&f.eval(&p.coords).expect("dimension")) {
            1 => w.0 += p.weight,
            -1 => w.1 += p.weight,
            _ => w.2 += p.weight,
        }
    }
    w
}

/// Whether `f` dissects the set: each open side holds at most 7/8 of the
/// weight.
pub fn dissects(f: &Poly, points: &[&WeightedPoint]) -> bool {
    let (pos, neg, zero) = side_weights(f, points);
    let total = pos + neg + zero;
    8 * pos <= 7 * total && 8 * neg <= 7 * total
}

/// Classifies every point by its exact sign vector and checks the per-cell
/// weight bound `c_cell * total / r`.
pub fn verify_point_partition(factors: &[Poly], points: &[WeightedPoint], r: u64, c_cell: u64) -> VerificationReport {
    let mut cells: BTreeMap<Vec<i8>, u64> = BTreeMap::new();
    let mut boundary = 0;
    let total: u64 = points.iter().map(|p| p.weight).sum();
    for p in points {
        match signs_at(factors, &p.coords) {
            Some(s) => *cells.entry(s).or_insert(0) += p.weight,
            None => boundary += p.weight,
        }
    }
    let mut rep = VerificationReport::default();
    let worst = cells.iter().max_by_key(|(_, w)| **w);
    let max = worst.map_or(0, |(_, w)| *w);
    // Compare w * r <= c_cell * total to avoid rounding.
    let pass = max * r.max(1) <= c_cell * total;
    rep.push(
        "point_partition.cell_weight",
        pass,
        max,
        format!("{c_cell}*{total}/{r}"),
        worst.map(|(s, w)| format!("cell {s:?} weight {w}")),
    );
    rep.push("point_partition.classified", true, format!("{} cells, boundary {}", cells.len(), boundary), "-", None);
    rep
}

/// Open parameter intervals of a curve between consecutive zeros of the
/// factors, each with the sign vector at an interior sample.
fn curve_gaps(seg: &Segment3, factors: &[Poly]) -> Option<Vec<(Bound, Bound, Vec<i8>)>> {
    let mut roots: Vec<Algebraic> = Vec::new();
    for f in factors {
        let u = f.restrict_to_line(&seg.line.origin, &seg.line.dir).expect("trivariate");
        if u.is_zero() {
            return None;
        }
        roots.extend(isolate_real_roots(&u).expect("nonzero"));
    }
    roots.sort();
    roots.dedup();
    let mut ends = vec![seg.lo.clone()];
    ends.extend(roots.into_iter().filter(|r| seg.contains_alg(r)).map(Bound::Finite));
    ends.push(seg.hi.clone());
    let mut out = Vec::with_capacity(ends.len() - 1);
    for w in ends.windows(2) {
        let t = between(&w[0], &w[1]);
        let s = signs_at(factors, &seg.line.point_at(&t)).expect("sample off the zero set");
        out.push((w[0].clone(), w[1].clone(), s));
    }
    Some(out)
}

fn between(lo: &Bound, hi: &Bound) -> Rational {
    match (lo, hi) {
        (Bound::NegInf, Bound::PosInf) => Rational::zero(),
        (Bound::NegInf, Bound::Finite(b)) => b.rational_below(),
        (Bound::Finite(a), Bound::PosInf) => a.rational_above(),
        (Bound::Finite(a), Bound::Finite(b)) => Algebraic::rational_between(a, b),
        _ => unreachable!("empty interval"),
    }
}

/// Membership in an open trapezoid, written out directly from its fields.
fn in_trapezoid(dec: &Decomposition, i: usize, x: &Rational, y: &Rational) -> bool {
    let tr = &dec.trapezoids[i];
    let above_lo = match &tr.lo {
        Bound::NegInf => true,
        Bound::Finite(a) => a.cmp_rational(x).is_lt(),
        Bound::PosInf => false,
    };
    let below_hi = match &tr.hi {
        Bound::PosInf => true,
        Bound::Finite(a) => a.cmp_rational(x).is_gt(),
        Bound::NegInf => false,
    };
    let inside_x = above_lo && below_hi;
    if !inside_x {
        return false;
    }
    let val = |s: usize| &dec.segments[s].m * x + &dec.segments[s].c;
    tr.floor.is_none_or(|f| val(f) < *y) && tr.ceiling.is_none_or(|c| *y < val(c))
}

/// Trapezoids of `r` met by the curve on the open interval `(lo, hi)`:
/// the line is split at every crossing with a supporting line of a wall,
/// floor or ceiling, and one sample per piece is located.
fn arc_hits(r: &RefinedCell, seg: &Segment3, lo: &Bound, hi: &Bound) -> BTreeSet<usize> {
    let l = &seg.line;
    let dec = &r.decomposition;
    let ax = &l.origin[0] + &r.shear * &l.origin[1];
    let bx = &l.dir[0] + &r.shear * &l.dir[1];
    let (ay, by) = (&l.origin[1], &l.dir[1]);
    let mut hits = BTreeSet::new();
    if bx.is_zero() && by.is_zero() {
        for i in 0..dec.trapezoids.len() {
            if in_trapezoid(dec, i, &ax, ay) {
                hits.insert(i);
            }
        }
        return hits;
    }
    let mut breaks: BTreeSet<Rational> = BTreeSet::new();
    let mut solve = |a: Rational, b: Rational| {
        // a + b t = 0
        if !b.is_zero() {
            breaks.insert(-a / b);
        }
    };
    for tr in &dec.trapezoids {
        for w in [&tr.lo, &tr.hi] {
            if let Some(x) = w.as_rational() {
                solve(&ax - x, bx.clone());
            }
        }
    }
    for s in &dec.segments {
        solve(ay - &s.m * &ax - &s.c, by - &s.m * &bx);
    }
    let mut ends: Vec<Bound> = vec![lo.clone()];
    ends.extend(
        breaks
            .into_iter()
            .map(Bound::rational)
            .filter(|b| lo.cmp_bound(b).is_lt() && hi.cmp_bound(b).is_gt()),
    );
    ends.push(hi.clone());
    for w in ends.windows(2) {
        let t = between(&w[0], &w[1]);
        let (x, y) = (&ax + &t * &bx, ay + &t * by);
        for i in 0..dec.trapezoids.len() {
            if in_trapezoid(dec, i, &x, &y) {
                hits.insert(i);
                break;
            }
        }
    }
    hits
}

fn ceil_u64(x: f64) -> u64 {
    x.ceil() as u64
}

/// First-stage round properties: `deg F_k <= k D`, `weight(V_k) <=
/// weight(V_0) / 2^k`, the number of rounds, and exact cell labels.
pub fn verify_stage_one(s1: &StageOneResult, curves: &[Segment3]) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let d = s1.d;
    rep.push(
        "stage1.rounds",
        s1.history.len() as u32 <= first_stage_rounds(d),
        s1.history.len(),
        first_stage_rounds(d),
        None,
    );
    let mut deg_ok = true;
    let mut w_ok = true;
    let mut witness = None;
    for h in &s1.history {
        let k = h.round as u32;
        if h.degree > k * d {
            deg_ok = false;
            witness = Some(format!("round {k}: degree {}", h.degree));
        }
        if h.weight_next << k > s1.v0_weight {
            w_ok = false;
            witness = Some(format!("round {k}: weight {}", h.weight_next));
        }
    }
    rep.push("stage1.degree_per_round", deg_ok, "", "k*D", witness.clone());
    rep.push("stage1.weight_halving", w_ok, "", "W0/2^k", witness);

    // V0 weight from scratch.
    let non_vertical: Vec<&Segment3> = curves.iter().filter(|c| !c.line.is_vertical()).collect();
    let mut pairs = 0u64;
    for i in 0..non_vertical.len() {
        for j in i + 1..non_vertical.len() {
            if let Some((t, s)) = crossing(&non_vertical[i].line, &non_vertical[j].line) {
                if non_vertical[i].contains(&t) && non_vertical[j].contains(&s) {
                    pairs += 1;
                }
            }
        }
    }
    rep.push("stage1.v0_weight", 2 * pairs == s1.v0_weight, s1.v0_weight, 2 * pairs, None);

    // Cells and labels.
    let mut cells: BTreeMap<Vec<i8>, BTreeSet<u64>> = BTreeMap::new();
    for c in curves {
        if let Some(gaps) = curve_gaps(c, &s1.factors) {
            for (_, _, s) in gaps {
                cells.entry(s).or_default().insert(c.id());
            }
        }
    }
    let reported: BTreeMap<Vec<i8>, BTreeSet<u64>> =
        s1.cells.iter().map(|c| (c.signs.clone(), c.incident.iter().copied().collect())).collect();
    let diff = cells
        .iter()
        .find(|(s, v)| reported.get(*s) != Some(v))
        .map(|(s, _)| format!("cell {s:?}"))
        .or_else(|| reported.keys().find(|s| !cells.contains_key(*s)).map(|s| format!("extra cell {s:?}")));
    rep.push("stage1.cell_lists", diff.is_none(), cells.len(), s1.cells.len(), diff);
    let bad_label = s1.cells.iter().find(|c| {
        let should = if c.incident.len() > s1.cell_bound { Label::Unacceptable } else { Label::Acceptable };
        c.label != should
    });
    rep.push(
        "stage1.labels",
        bad_label.is_none(),
        "",
        s1.cell_bound,
        bad_label.map(|c| format!("cell {:?} with {} curves", c.signs, c.incident.len())),
    );
    rep
}

fn crossing(l1: &Line3, l2: &Line3) -> Option<(Rational, Rational)> {
    let det = &l2.dir[0] * &l1.dir[1] - &l1.dir[0] * &l2.dir[1];
    if det.is_zero() {
        return None;
    }
    let ox = &l2.origin[0] - &l1.origin[0];
    let oy = &l2.origin[1] - &l1.origin[1];
    let t = (&l2.dir[0] * &oy - &l2.dir[1] * &ox) / &det;
    let s = (&l1.dir[0] * &oy - &l1.dir[1] * &ox) / &det;
    Some((t, s))
}

/// Recomputes every per-cell curve list of a full decomposition and checks
/// the per-cell bound, the nonempty-cell count and the boundary-crossing
/// ledger (with slack 8).
pub fn verify_decomposition(full: &FullDecomposition, curves: &[Segment3], params: &Params) -> VerificationReport {
    let s1 = &full.stage1;
    let mut rep = verify_stage_one(s1, curves);
    let (n, d) = (s1.n, s1.d);
    let bound = ((params.a_cut * n as u64) / (d.max(1) as u64).pow(2)).max(1) as usize;
    rep.push("decomposition.cell_bound_value", bound == s1.cell_bound, s1.cell_bound, bound, None);

    let gaps: Vec<Option<Vec<(Bound, Bound, Vec<i8>)>>> = curves.iter().map(|c| curve_gaps(c, &s1.factors)).collect();
    let mut max_count = 0;
    let mut nonempty = 0;
    let mut witness = None;
    for c in s1.cells.iter().filter(|c| c.label == Label::Acceptable) {
        max_count = max_count.max(c.incident.len());
        if c.incident.len() > bound {
            witness = Some(format!("cell {:?}", c.signs));
        }
        nonempty += usize::from(!c.incident.is_empty());
    }
    let mut wall: BTreeMap<u64, u64> = BTreeMap::new();
    let mut sampled: BTreeSet<u64> = BTreeSet::new();
    let mut lists_ok = true;
    let mut list_witness = None;
    for (ri, r) in full.refined.iter().enumerate() {
        let parent = &s1.cells[r.parent];
        sampled.extend(r.decomposition.segments.iter().map(|s| s.curve));
        let mut inc: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); r.decomposition.trapezoids.len()];
        for (c, g) in curves.iter().zip(&gaps) {
            for (lo, hi, s) in g.iter().flatten() {
                if *s != parent.signs {
                    continue;
                }
                let hits = arc_hits(r, c, lo, hi);
                *wall.entry(c.id()).or_insert(0) += (hits.len() as u64).saturating_sub(1);
                for h in hits {
                    inc[h].insert(c.id());
                }
            }
        }
        if r.cells.len() != inc.len() {
            lists_ok = false;
            list_witness = Some(format!("refined cell {ri}: {} cells for {} trapezoids", r.cells.len(), inc.len()));
        }
        for (k, (cell, mine)) in r.cells.iter().zip(&inc).enumerate() {
            let theirs: BTreeSet<u64> = cell.incident.iter().copied().collect();
            if cell.trapezoid != k || theirs != *mine {
                lists_ok = false;
                list_witness = Some(format!("refined cell {ri}, trapezoid {k}"));
            }
            max_count = max_count.max(mine.len());
            if mine.len() > bound {
                witness = Some(format!("refined cell {ri}, trapezoid {k}"));
            }
            nonempty += usize::from(!mine.is_empty());
        }
        // Trapezoid count for segments in general position.
        let segs = &r.decomposition.segments;
        let mut k = 0;
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (a, b) = (&segs[i], &segs[j]);
                if a.m != b.m {
                    let x = (&b.c - &a.c) / (&a.m - &b.m);
                    let inside = |s: &crate::cutting::PlanarSegment| {
                        s.lo.as_ref().is_none_or(|l| *l < x) && s.hi.as_ref().is_none_or(|h| x < *h)
                    };
                    k += usize::from(inside(a) && inside(b));
                }
            }
        }
        let left = segs.iter().filter(|s| s.lo.is_some()).count();
        let right = segs.iter().filter(|s| s.hi.is_some()).count();
        let unbounded_left = segs.len() - left;
        let expected = 1 + 2 * left + right + 3 * k + unbounded_left;
        let got = r.decomposition.trapezoids.len();
        rep.push(
            "cutting.trapezoid_count",
            got <= expected,
            got,
            expected,
            Some(format!("refined cell {ri}")),
        );
    }
    rep.push("decomposition.cell_lists", lists_ok, "", "", list_witness);
    rep.push("decomposition.per_cell_bound", witness.is_none(), max_count, bound, witness);
    rep.push("decomposition.max_cell_curves", max_count == full.stats.max_cell_curves, full.stats.max_cell_curves, max_count, None);
    let cell_cap = ceil_u64(8.0 * (d as f64).powi(3) * log3_factor(d));
    rep.push("decomposition.nonempty_cells", nonempty as u64 <= cell_cap, nonempty, cell_cap, None);
    rep.push("decomposition.nonempty_count_matches", nonempty == full.stats.nonempty_cells, full.stats.nonempty_cells, nonempty, None);

    let mut crossings = 0u64;
    for (c, g) in curves.iter().zip(&gaps) {
        let Some(g) = g else { continue };
        if sampled.contains(&c.id()) {
            continue;
        }
        crossings += g.len() as u64 - 1 + wall.get(&c.id()).copied().unwrap_or(0);
    }
    let budget = ceil_u64(params.c_bnd as f64 * n as f64 * d as f64 * log3_factor(d));
    rep.push_slack("decomposition.boundary_crossings", crossings, budget, 8);
    rep.push(
        "decomposition.boundary_matches",
        crossings == full.stats.boundary_crossings,
        full.stats.boundary_crossings,
        crossings,
        None,
    );
    rep
}

/// Pieces of a line: index of the open interval containing `t` among the
/// sorted cuts, `None` when `t` is a cut. Linear scan.
fn piece(cuts: &[Algebraic], t: &Rational) -> Option<usize> {
    let mut k = 0;
    for c in cuts {
        match c.cmp_rational(t) {
            std::cmp::Ordering::Less => k += 1,
            std::cmp::Ordering::Equal => return None,
            std::cmp::Ordering::Greater => break,
        }
    }
    Some(k)
}

/// Edges `(lower piece, upper piece)` recomputed pairwise from exact heights.
pub fn depth_edges(lines: &[Line3], cuts: &BTreeMap<u64, Vec<Algebraic>>) -> BTreeSet<(Piece, Piece)> {
    let empty = Vec::new();
    let mut out = BTreeSet::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a, b) = (&lines[i], &lines[j]);
            let Some((t, s)) = crossing(a, b) else { continue };
            let za = &a.origin[2] + &t * &a.dir[2];
            let zb = &b.origin[2] + &s * &b.dir[2];
            let (pa, pb) = (
                piece(cuts.get(&a.id).unwrap_or(&empty), &t),
                piece(cuts.get(&b.id).unwrap_or(&empty), &s),
            );
            let (Some(pa), Some(pb)) = (pa, pb) else { continue };
            if za < zb {
                out.insert(((a.id, pa), (b.id, pb)));
            } else if zb < za {
                out.insert(((b.id, pb), (a.id, pa)));
            }
        }
    }
    out
}

/// A shortest directed cycle through some node of a nontrivial strongly
/// connected component, as a list of node indices; `None` if acyclic.
pub fn find_cycle(g: &DepthGraph) -> Option<Vec<usize>> {
    let n = g.nodes.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &g.edges {
        adj[a].push(b);
    }
    // Tarjan's strongly connected components, iteratively.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut start = None;
    'outer: for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on[root] = true;
        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            if *k < adj[v].len() {
                let w = adj[v][*k];
                *k += 1;
                if w == v {
                    start = Some(v);
                    break 'outer;
                }
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on[w] = true;
                    call.push((w, 0));
                } else if on[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut size = 0;
                    loop {
                        let w = stack.pop().unwrap();
                        on[w] = false;
                        size += 1;
                        if w == v {
                            break;
                        }
                    }
                    if size > 1 {
                        start = Some(v);
                        break 'outer;
                    }
                }
            }
        }
    }
    let s = start?;
    // Shortest cycle through s by breadth-first search.
    let mut prev = vec![usize::MAX; n];
    let mut queue = VecDeque::from([s]);
    let mut seen = vec![false; n];
    seen[s] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if w == s {
                let mut cyc = vec![v];
                let mut u = v;
                while u != s {
                    u = prev[u];
                    cyc.push(u);
                }
                cyc.reverse();
                return Some(cyc);
            }
            if !seen[w] {
                seen[w] = true;
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("a nontrivial component has a cycle through each node")
}

/// Checks a cut set for the lines: the recomputed edge set equals the
/// reported graph, every edge follows exact heights, and the graph is
/// acyclic.
pub fn verify_elimination(lines: &[Line3], cuts: &[(u64, Algebraic, CutKind)], graph: &DepthGraph) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let mut by_line: BTreeMap<u64, Vec<Algebraic>> = BTreeMap::new();
    for (l, t, _) in cuts {
        by_line.entry(*l).or_default().push(t.clone());
    }
    for v in by_line.values_mut() {
        v.sort();
        v.dedup();
    }
    let mine = depth_edges(lines, &by_line);
    let theirs: BTreeSet<(Piece, Piece)> = graph.edges.iter().map(|&(a, b)| (graph.nodes[a], graph.nodes[b])).collect();
    let diff = mine.symmetric_difference(&theirs).next().map(|e| format!("edge {e:?}"));
    rep.push("depth.edges", diff.is_none(), theirs.len(), mine.len(), diff);
    let cyc = find_cycle(graph);
    rep.push(
        "depth.acyclic",
        cyc.is_none(),
        cyc.as_ref().map_or(0, Vec::len),
        0,
        cyc.map(|c| format!("cycle {:?}", c.iter().map(|&i| graph.nodes[i]).collect::<Vec<_>>())),
    );
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::cycle_gadget;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    #[test]
    fn point_partition_examples() {
        let cube: Vec<WeightedPoint> = (0..8)
            .map(|i| WeightedPoint::new(vec![q(i & 1), q((i >> 1) & 1), q((i >> 2) & 1)], 1))
            .collect();
        let half = Rational::new(1.into(), 2.into());
        let planes: Vec<Poly> = (0..3)
            .map(|v| &Poly::var(3, v) - &Poly::constant(3, half.clone()))
            .collect();
        assert!(verify_point_partition(&planes, &cube, 8, 1).passed());
        assert!(verify_point_partition(&[], &[], 8, 1).passed());
        // All weight coincident: passes only when the atom is on the zero set.
        let atom = vec![WeightedPoint::new(vec![q(0), q(0), q(0)], 5)];
        assert!(!verify_point_partition(&[Poly::one(3)], &atom, 2, 1).passed());
        assert!(verify_point_partition(&[Poly::var(3, 0)], &atom, 2, 1).passed());
    }

    #[test]
    fn gadget_cycle_has_length_three() {
        let g = cycle_gadget(3);
        let edges = depth_edges(&g, &BTreeMap::new());
        let mut graph = DepthGraph::default();
        let nodes: BTreeSet<Piece> = edges.iter().flat_map(|(a, b)| [*a, *b]).collect();
        graph.nodes = nodes.into_iter().collect();
        let idx = |p: &Piece| graph.nodes.iter().position(|x| x == p).unwrap();
        graph.edges = edges.iter().map(|(a, b)| (idx(a), idx(b))).collect();
        assert_eq!(find_cycle(&graph).unwrap().len(), 3);
        assert_eq!(find_cycle(&DepthGraph::default()), None);
    }
}
