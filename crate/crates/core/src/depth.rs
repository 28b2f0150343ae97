//! Depth cycles among lines and their elimination by cutting.
//!
//! A line passes above another if, on the vertical line through their
//! projection crossing, it has the larger height. After cutting, pieces are
//! the open parameter intervals between consecutive cuts; a crossing exactly
//! at a cut belongs to no piece and produces no edge.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutting::{second_stage, FullDecomposition};
use crate::curve_partition::{first_stage, Label};
use crate::error::{Error, Result};
use crate::geometry::{above_pair, check_disjoint_non_vertical, projection_crossing, Bound, Line3, Segment3};
use crate::polynomial::{isolate_real_roots, resultant, Algebraic};
use crate::rng::{child_seed, from_seed};
use crate::{Params, Poly, Rational, UniPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutKind {
    Type1,
    Type2,
    PrismWall,
    BaseCase,
    /// Added after the final acyclicity check found a cycle.
    Repair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub line: u64,
    pub t: Algebraic,
    pub kind: CutKind,
}

/// `Some((upper_id, lower_id))` for crossing projections.
pub fn above(l1: &Line3, l2: &Line3) -> Result<Option<(u64, u64)>> {
    Ok(above_pair(l1, l2)?.map(|(u, l, _, _)| (u, l)))
}

/// Parameters where the line crosses the zero set of `p`.
pub fn type1_cuts(line: &Line3, p: &Poly) -> Result<Vec<Algebraic>> {
    let u = line.restrict(p);
    if u.is_zero() {
        return Err(Error::LineInZeroSet(line.id));
    }
    isolate_real_roots(&u)
}

/// Planar polynomials whose union of zero sets is the zero set of the
/// z-resultant of a product and its z-derivative, computed factor by
/// factor: `Res_z(f, f_z)` for each factor and `Res_z(f, g)` for each pair.
/// Factors of degree 0 in z contribute curves already met by the first
/// type of cuts and are skipped.
#[derive(Debug, Clone)]
pub struct Discriminant {
    pub parts: Vec<Poly>,
    /// Factors of positive z-degree, and for each part the factor pair it
    /// came from (`None` for a factor's own discriminant).
    factors: Vec<Poly>,
    sources: Vec<(usize, Option<usize>)>,
    /// Degree of the full resultant, `deg P * (deg P - 1)`, an upper bound
    /// for the number of its real roots on a line.
    pub degree_bound: u32,
}

impl Discriminant {
    pub fn new(factors: &[Poly]) -> Result<Self> {
        let zf: Vec<&Poly> = factors.iter().filter(|f| f.degree_in(2).unwrap_or(0) > 0).collect();
        if zf.is_empty() {
            return Err(Error::ZFree);
        }
        let mut jobs: Vec<(usize, Option<usize>)> = (0..zf.len()).map(|i| (i, None)).collect();
        for i in 0..zf.len() {
            for j in i + 1..zf.len() {
                jobs.push((i, Some(j)));
            }
        }
        let parts = jobs
            .par_iter()
            .map(|&(i, j)| match j {
                None => resultant(zf[i], &zf[i].partial(2), 2),
                Some(j) => resultant(zf[i], zf[j], 2),
            })
            .collect::<Result<Vec<_>>>()?;
        let (parts, sources) = parts.into_iter().zip(jobs).filter(|(p, _)| !p.is_constant()).unzip();
        let d: u32 = factors.iter().map(|f| f.degree().unwrap_or(0)).sum();
        Ok(Self {
            parts,
            factors: zf.into_iter().cloned().collect(),
            sources,
            degree_bound: d * d.saturating_sub(1),
        })
    }

    /// Distinct real parameters where the projection of `line` meets the
    /// discriminant curve.
    pub fn cuts(&self, line: &Line3) -> Result<Vec<Algebraic>> {
        let o = [line.origin[0].clone(), line.origin[1].clone()];
        let d = [line.dir[0].clone(), line.dir[1].clone()];
        let mut out: Vec<Algebraic> = Vec::new();
        for p in &self.parts {
            let u = p.restrict_to_line(&o, &d)?;
            if u.is_zero() {
                return Err(Error::ProjectionInDiscriminant(line.id));
            }
            out.extend(isolate_real_roots(&u)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Like [`Discriminant::cuts`], keeping only parameters where the
    /// critical point lies on or below the line. A parameter is kept
    /// whenever the side cannot be decided from a single simple common root.
    pub fn cuts_below(&self, line: &Line3) -> Result<Vec<Algebraic>> {
        let o = [line.origin[0].clone(), line.origin[1].clone()];
        let d = [line.dir[0].clone(), line.dir[1].clone()];
        let shifted: Vec<WPoly> = self.factors.iter().map(|f| below_line(f, line)).collect::<Result<_>>()?;
        let mut out: Vec<Algebraic> = Vec::new();
        for (p, &(i, j)) in self.parts.iter().zip(&self.sources) {
            let u = p.restrict_to_line(&o, &d)?;
            if u.is_zero() {
                return Err(Error::ProjectionInDiscriminant(line.id));
            }
            let roots = isolate_real_roots(&u)?;
            if roots.is_empty() {
                continue;
            }
            let f = &shifted[i];
            let g = match j {
                Some(j) => shifted[j].clone(),
                None => derivative_w(f),
            };
            let side = common_root_side(f, &g);
            out.extend(roots.into_iter().filter(|tau| side.keep(tau)));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Polynomial in `w` with coefficients in `Q[t]`, low degree first.
type WPoly = Vec<UniPoly>;

fn trim(mut p: WPoly) -> WPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// `f` on the vertical plane over the projection of `line`, in the
/// coordinates `(t, w)` with `z = z_line(t) - w`; `w > 0` is below the line.
fn below_line(f: &Poly, line: &Line3) -> Result<WPoly> {
    let r = f.restrict_to_vertical_plane([&line.origin[0], &line.origin[1]], [&line.dir[0], &line.dir[1]])?;
    let cz: Vec<UniPoly> = r.coeffs_in(1).iter().map(|c| c.to_univariate()).collect();
    let height = UniPoly::new(vec![line.origin[2].clone(), line.dir[2].clone()]);
    // (height - w)^k, as a polynomial in w.
    let mut power: WPoly = vec![UniPoly::one()];
    let mut out: WPoly = Vec::new();
    for c in &cz {
        if out.len() < power.len() {
            out.resize(power.len(), UniPoly::zero());
        }
        for (k, pk) in power.iter().enumerate() {
            out[k] = &out[k] + &(c * pk);
        }
        let mut next = vec![UniPoly::zero(); power.len() + 1];
        for (k, pk) in power.iter().enumerate() {
            next[k] = &next[k] + &(&height * pk);
            next[k + 1] = &next[k + 1] - pk;
        }
        power = next;
    }
    Ok(trim(out))
}

fn derivative_w(f: &WPoly) -> WPoly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&Rational::from_integer((k as i64).into())))
            .collect(),
    )
}

/// Fraction-free determinant over `Q[t]`.
fn det(mut a: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = a.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut negate = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return UniPoly::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Where the common root of `f` and `g` in `w` lies, as a function of `t`.
enum Side {
    /// Keep every parameter.
    Unknown,
    /// The common root is `-s0(t) / s1(t)` where `s1(t) != 0`; parameters
    /// where a leading coefficient vanishes are kept.
    Root { s0: UniPoly, s1: UniPoly, leads: [UniPoly; 2] },
}

impl Side {
    fn keep(&self, tau: &Algebraic) -> bool {
        match self {
            Side::Unknown => true,
            Side::Root { s0, s1, leads } => {
                if leads.iter().any(|l| tau.sign_of(l) == 0) {
                    return true;
                }
                let b = tau.sign_of(s1);
                b == 0 || -tau.sign_of(s0) * b >= 0
            }
        }
    }
}

/// The first subresultant of `f` and `g`, `s1(t) w + s0(t)`.
fn common_root_side(f: &WPoly, g: &WPoly) -> Side {
    let (f, g) = if f.len() >= g.len() { (f, g) } else { (g, f) };
    let (m, n) = (f.len().saturating_sub(1), g.len().saturating_sub(1));
    if n == 0 {
        return Side::Unknown;
    }
    let leads = [f[m].clone(), g[n].clone()];
    if n == 1 {
        return Side::Root { s0: g[0].clone(), s1: g[1].clone(), leads };
    }
    // Rows w^k f (k < n - 1) and w^k g (k < m - 1); columns are the powers
    // m + n - 2 down to 0.
    let cols = m + n - 1;
    let mut rows: Vec<Vec<UniPoly>> = Vec::new();
    for (p, shifts) in [(f, n - 1), (g, m - 1)] {
        for k in (0..shifts).rev() {
            let mut row = vec![UniPoly::zero(); cols];
            for (i, c) in p.iter().enumerate() {
                row[cols - 1 - (i + k)] = c.clone();
            }
            rows.push(row);
        }
    }
    let minor = |last: usize| -> UniPoly {
        let a = rows
            .iter()
            .map(|r| {
                let mut v = r[..cols - 2].to_vec();
                v.push(r[last].clone());
                v
            })
            .collect();
        det(a)
    };
    let s1 = minor(cols - 2);
    let s0 = minor(cols - 1);
    Side::Root { s0, s1, leads }
}

/// Parameters where the projection of `line` crosses the discriminant
/// curve of `p` (all of them, without selecting the side of `z`).
pub fn type2_cuts(line: &Line3, p: &Poly) -> Result<Vec<Algebraic>> {
    if line.is_vertical() {
        return Err(Error::VerticalInput(line.id));
    }
    Discriminant::new(std::slice::from_ref(p))?.cuts(line)
}

/// Cut parameters per line, sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CutSet {
    lines: BTreeMap<u64, Vec<(Algebraic, CutKind)>>,
}

impl CutSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, line: u64, t: Algebraic, kind: CutKind) {
        self.lines.entry(line).or_default().push((t, kind));
    }

    pub fn add_rational(&mut self, line: u64, t: Rational, kind: CutKind) {
        self.add(line, Algebraic::Rational(t), kind);
    }

    pub fn extend(&mut self, other: CutSet) {
        for (l, v) in other.lines {
            self.lines.entry(l).or_default().extend(v);
        }
    }

    /// Sorts each line's cuts, keeping one per coordinate (the smallest
    /// kind).
    pub fn normalize(&mut self) {
        for v in self.lines.values_mut() {
            v.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
            v.dedup_by(|b, a| a.0 == b.0);
        }
    }

    pub fn len(&self) -> usize {
        self.lines.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn on(&self, line: u64) -> &[(Algebraic, CutKind)] {
        self.lines.get(&line).map_or(&[], Vec::as_slice)
    }

    pub fn cuts(&self) -> Vec<Cut> {
        self.lines
            .iter()
            .flat_map(|(&line, v)| v.iter().map(move |(t, kind)| Cut { line, t: t.clone(), kind: *kind }))
            .collect()
    }

    pub fn from_cuts(cuts: &[Cut]) -> Self {
        let mut s = Self::new();
        for c in cuts {
            s.add(c.line, c.t.clone(), c.kind);
        }
        s.normalize();
        s
    }

    /// Index of the piece of `line` containing `t`; `None` if `t` is a cut.
    pub fn piece_of(&self, line: u64, t: &Rational) -> Option<usize> {
        let cuts = self.on(line);
        let mut lo = 0;
        let mut hi = cuts.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match cuts[mid].0.cmp_rational(t) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return None,
            }
        }
        Some(lo)
    }
}

/// A piece is identified by its line and its index among the line's
/// pieces (index `k` lies between cuts `k - 1` and `k`).
pub type Piece = (u64, usize);

/// Directed graph on pieces; an edge `(a, b)` means piece `a` lies below
/// piece `b` at their projection crossing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthGraph {
    pub nodes: Vec<Piece>,
    pub edges: Vec<(usize, usize)>,
    /// For each edge, the crossing parameters on the lower and upper line.
    #[serde(skip)]
    pub witnesses: Vec<(Rational, Rational)>,
}

impl DepthGraph {
    /// Builds the graph of the cut lines. Nodes are the pieces that take
    /// part in at least one edge.
    pub fn build(lines: &[Line3], cuts: &CutSet) -> Result<Self> {
        let rows: Vec<Result<Vec<(Piece, Piece, Rational, Rational)>>> = (0..lines.len())
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::new();
                for j in i + 1..lines.len() {
                    if let Some((u, l, tu, tl)) = above_pair(&lines[i], &lines[j])? {
                        let (Some(pu), Some(pl)) = (cuts.piece_of(u, &tu), cuts.piece_of(l, &tl)) else {
                            continue;
                        };
                        row.push(((l, pl), (u, pu), tl, tu));
                    }
                }
                Ok(row)
            })
            .collect();
        let mut index: BTreeMap<Piece, usize> = BTreeMap::new();
        let mut raw = Vec::new();
        for r in rows {
            raw.extend(r?);
        }
        for (a, b, _, _) in &raw {
            index.insert(*a, 0);
            index.insert(*b, 0);
        }
        let nodes: Vec<Piece> = index.keys().copied().collect();
        for (k, v) in index.values_mut().enumerate() {
            *v = k;
        }
        let mut g = DepthGraph { nodes, edges: Vec::with_capacity(raw.len()), witnesses: Vec::with_capacity(raw.len()) };
        for (a, b, ta, tb) in raw {
            g.edges.push((index[&a], index[&b]));
            g.witnesses.push((ta, tb));
        }
        Ok(g)
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
        }
        adj
    }

    /// Kahn's algorithm; `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.nodes.len()];
        for &(_, b) in &self.edges {
            indeg[b] += 1;
        }
        let adj = self.adjacency();
        let mut stack: Vec<usize> = (0..self.nodes.len()).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, _) in adj[v].iter().rev() {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    /// Edge indices of some directed cycle.
    pub fn cycle_edges(&self) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        let n = self.nodes.len();
        // 0 unvisited, 1 on stack, 2 done.
        let mut state = vec![0u8; n];
        let mut parent_edge = vec![usize::MAX; n];
        for s in 0..n {
            if state[s] != 0 {
                continue;
            }
            let mut stack = vec![(s, 0usize)];
            state[s] = 1;
            while let Some(&mut (v, ref mut k)) = stack.last_mut() {
                if *k < adj[v].len() {
                    let (w, e) = adj[v][*k];
                    *k += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            parent_edge[w] = e;
                            stack.push((w, 0));
                        }
                        1 => {
                            let mut cyc = vec![e];
                            let mut u = v;
                            while u != w {
                                let pe = parent_edge[u];
                                cyc.push(pe);
                                u = self.edges[pe].0;
                            }
                            cyc.reverse();
                            return Some(cyc);
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// How a subproblem was solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    BaseCase,
    Partition,
}

/// One node of the recursion tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionNode {
    pub depth: u32,
    pub size: usize,
    pub strategy: Strategy,
    /// Cuts placed by this node and its descendants.
    pub cuts: usize,
    /// Cuts the base case would have placed.
    pub base_cuts: usize,
    pub degree: u32,
    pub children: Vec<usize>,
    pub max_type1: usize,
    pub max_type2: usize,
    pub type2_bound: u32,
    pub zero_set_lines: usize,
    pub discriminant_lines: usize,
    pub max_child: usize,
    pub child_bound: usize,
}

/// Result of [`eliminate_cycles`].
#[derive(Debug, Clone)]
pub struct Elimination {
    pub cuts: CutSet,
    pub graph: DepthGraph,
    pub order: Vec<usize>,
    pub trace: Vec<RecursionNode>,
    pub repairs: usize,
}

/// Visibility cuts of `who` against every other segment of `all`.
fn base_cuts_for(who: &[&Segment3], all: &[Segment3], kind: CutKind) -> Result<CutSet> {
    let mut cs = CutSet::new();
    for a in who {
        for b in all {
            if a.id() == b.id() {
                continue;
            }
            if let Some((t, s)) = projection_crossing(&a.line, &b.line)? {
                if a.contains(&t) && b.contains(&s) {
                    cs.add_rational(a.id(), t, kind);
                    cs.add_rational(b.id(), s, kind);
                }
            }
        }
    }
    cs.normalize();
    Ok(cs)
}

fn base_case(segs: &[Segment3]) -> Result<CutSet> {
    let refs: Vec<&Segment3> = segs.iter().collect();
    base_cuts_for(&refs, segs, CutKind::BaseCase)
}

fn hull(a: (Bound, Bound), b: (&Bound, &Bound)) -> (Bound, Bound) {
    let lo = if a.0.cmp_bound(b.0).is_le() { a.0 } else { b.0.clone() };
    let hi = if a.1.cmp_bound(b.1).is_ge() { a.1 } else { b.1.clone() };
    (lo, hi)
}

fn max_bound<'a>(a: &'a Bound, b: &'a Bound) -> &'a Bound {
    if a.cmp_bound(b).is_ge() { a } else { b }
}

fn min_bound<'a>(a: &'a Bound, b: &'a Bound) -> &'a Bound {
    if a.cmp_bound(b).is_le() { a } else { b }
}

struct Level {
    cuts: CutSet,
    children: Vec<Vec<Segment3>>,
    degree: u32,
    max_type1: usize,
    max_type2: usize,
    type2_bound: u32,
    zero_set_lines: usize,
    discriminant_lines: usize,
    child_bound: usize,
}

/// Cuts and child subproblems of one partition step.
fn partition_level(segs: &[Segment3], d: u32, params: &Params, seed: u64) -> Result<Level> {
    let mut rng = from_seed(seed);
    let s1 = first_stage(segs, d, params, &mut rng)?;
    let full: FullDecomposition = second_stage(s1, segs, params, child_seed(seed, u64::MAX))?;
    let s1 = &full.stage1;
    let mut cuts = CutSet::new();
    let by_id: BTreeMap<u64, &Segment3> = segs.iter().map(|s| (s.id(), s)).collect();

    // First type: the recorded crossings with the zero set.
    let mut special: Vec<&Segment3> = Vec::new();
    let mut max_type1 = 0;
    let mut zero_set_lines = 0;
    for lc in &s1.lines {
        if lc.in_zero_set {
            zero_set_lines += 1;
            special.push(by_id[&lc.id]);
            continue;
        }
        max_type1 = max_type1.max(lc.crossings());
        for b in &lc.breaks {
            cuts.add(lc.id, b.clone(), CutKind::Type1);
        }
    }

    // Second type.
    let mut max_type2 = 0;
    let mut discriminant_lines = 0;
    let mut type2_bound = 0;
    if let Ok(disc) = Discriminant::new(&s1.factors) {
        type2_bound = disc.degree_bound;
        let per: Vec<(u64, Result<(usize, Vec<Algebraic>)>)> = segs
            .par_iter()
            .map(|s| {
                let r = disc.cuts(&s.line).and_then(|all| {
                    let ts = if params.type2_below_only { disc.cuts_below(&s.line)? } else { all.clone() };
                    Ok((all.len(), ts))
                });
                (s.id(), r)
            })
            .collect();
        for (id, r) in per {
            match r {
                Ok((count, ts)) => {
                    max_type2 = max_type2.max(count);
                    let s = by_id[&id];
                    for t in ts {
                        if s.contains_alg(&t) {
                            cuts.add(id, t, CutKind::Type2);
                        }
                    }
                }
                Err(Error::ProjectionInDiscriminant(_)) => {
                    discriminant_lines += 1;
                    if !special.iter().any(|x| x.id() == id) {
                        special.push(by_id[&id]);
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }

    // Curves in the zero set, or whose projection lies in the discriminant
    // curve, are cut at all their visibility points.
    cuts.extend(base_cuts_for(&special, segs, CutKind::BaseCase)?);

    // Children: acceptable first-stage cells, and refined trapezoids with
    // prism-wall cuts.
    let mut children: Vec<Vec<Segment3>> = Vec::new();
    let arcs_in = |signs: &[i8]| -> Vec<(&Segment3, &Bound, &Bound)> {
        let mut out = Vec::new();
        for lc in &s1.lines {
            for g in &lc.gaps {
                if g.signs == signs {
                    out.push((by_id[&lc.id], &g.lo, &g.hi));
                }
            }
        }
        out
    };
    let mut push_child = |pieces: BTreeMap<u64, (Bound, Bound)>| {
        if pieces.len() >= 3 {
            let child = pieces
                .into_iter()
                .map(|(id, (lo, hi))| Segment3 { line: by_id[&id].line.clone(), lo, hi })
                .collect();
            children.push(child);
        }
    };
    for cell in &s1.cells {
        if cell.label != Label::Acceptable {
            continue;
        }
        let mut pieces: BTreeMap<u64, (Bound, Bound)> = BTreeMap::new();
        for (s, lo, hi) in arcs_in(&cell.signs) {
            let e = pieces.entry(s.id()).or_insert((lo.clone(), hi.clone()));
            *e = hull(e.clone(), (lo, hi));
        }
        push_child(pieces);
    }
    for r in &full.refined {
        let arcs = arcs_in(&s1.cells[r.parent].signs);
        let dec = &r.decomposition;
        let mut per_trap: Vec<BTreeMap<u64, (Bound, Bound)>> = vec![BTreeMap::new(); dec.trapezoids.len()];
        for (s, glo, ghi) in arcs {
            let l = &s.line;
            let a = [&l.origin[0] + &r.shear * &l.origin[1], l.origin[1].clone()];
            let b = [&l.dir[0] + &r.shear * &l.dir[1], l.dir[1].clone()];
            for (ti, slot) in per_trap.iter_mut().enumerate() {
                let Some((lo, hi)) = dec.line_interval(ti, [&a[0], &a[1]], [&b[0], &b[1]]) else { continue };
                let lo = lo.map_or(Bound::NegInf, Bound::rational);
                let hi = hi.map_or(Bound::PosInf, Bound::rational);
                let plo = max_bound(&lo, glo);
                let phi = min_bound(&hi, ghi);
                if plo.cmp_bound(phi).is_ge() {
                    continue;
                }
                for w in [&lo, &hi] {
                    if let Bound::Finite(t) = w {
                        if glo.cmp_bound(w).is_lt() && ghi.cmp_bound(w).is_gt() {
                            cuts.add(s.id(), t.clone(), CutKind::PrismWall);
                        }
                    }
                }
                let e = slot.entry(s.id()).or_insert((plo.clone(), phi.clone()));
                *e = hull(e.clone(), (plo, phi));
            }
        }
        for p in per_trap {
            push_child(p);
        }
    }
    cuts.normalize();
    Ok(Level {
        cuts,
        children,
        degree: s1.degree(),
        max_type1,
        max_type2,
        type2_bound,
        zero_set_lines,
        discriminant_lines,
        child_bound: s1.cell_bound,
    })
}

fn solve(
    segs: Vec<Segment3>,
    depth: u32,
    d: u32,
    n0: usize,
    params: &Params,
    seed: u64,
) -> Result<(CutSet, Vec<RecursionNode>)> {
    let n = segs.len();
    let base = base_case(&segs)?;
    let leaf = |base: CutSet, degree| {
        let node = RecursionNode {
            depth,
            size: n,
            strategy: Strategy::BaseCase,
            cuts: base.len(),
            base_cuts: base.len(),
            degree,
            children: Vec::new(),
            max_type1: 0,
            max_type2: 0,
            type2_bound: 0,
            zero_set_lines: 0,
            discriminant_lines: 0,
            max_child: 0,
            child_bound: 0,
        };
        (base, vec![node])
    };
    if n <= n0 || base.is_empty() || d <= 1 {
        return Ok(leaf(base, 0));
    }
    let level = partition_level(&segs, d, params, seed)?;
    let max_child = level.children.iter().map(Vec::len).max().unwrap_or(0);
    if max_child >= n {
        return Ok(leaf(base, level.degree));
    }
    let results = level
        .children
        .into_par_iter()
        .enumerate()
        .map(|(i, c)| solve(c, depth + 1, d, n0, params, child_seed(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mut cuts = level.cuts;
    let mut trace = Vec::new();
    let mut children = Vec::new();
    for (c, t) in results {
        cuts.extend(c);
        children.push(t[0].size);
        trace.extend(t);
    }
    cuts.normalize();
    // Below the root, fall back to the base case when it is cheaper.
    if depth > 0 && base.len() <= cuts.len() {
        return Ok(leaf(base, level.degree));
    }
    let node = RecursionNode {
        depth,
        size: n,
        strategy: Strategy::Partition,
        cuts: cuts.len(),
        base_cuts: base.len(),
        degree: level.degree,
        children,
        max_type1: level.max_type1,
        max_type2: level.max_type2,
        type2_bound: level.type2_bound,
        zero_set_lines: level.zero_set_lines,
        discriminant_lines: level.discriminant_lines,
        max_child,
        child_bound: level.child_bound,
    };
    let mut out = vec![node];
    out.extend(trace);
    Ok((cuts, out))
}

/// Cuts `lines` into pieces free of depth cycles.
///
/// Subproblems of at most `n0` lines are solved by cutting at every
/// visibility point. Larger ones are partitioned with parameter `d`; every
/// line is cut where it crosses the zero set, where its projection crosses
/// the discriminant curve, and where it crosses a prism wall, and the lines
/// meeting each cell form a child subproblem. Below the root, a subproblem
/// keeps whichever of the two strategies uses fewer cuts. Any cycle left at the end is
/// broken by cutting both pieces of each of its edges at their crossing.
pub fn eliminate_cycles(lines: &[Line3], d: u32, n0: usize, params: &Params, seed: u64) -> Result<Elimination> {
    check_disjoint_non_vertical(lines)?;
    let segs: Vec<Segment3> = lines.iter().cloned().map(Segment3::full).collect();
    let (mut cuts, trace) = solve(segs, 0, d, n0, params, seed)?;
    let mut repairs = 0;
    loop {
        let graph = DepthGraph::build(lines, &cuts)?;
        if let Some(order) = graph.topological_order() {
            return Ok(Elimination { cuts, graph, order, trace, repairs });
        }
        let cyc = graph.cycle_edges().expect("a graph without topological order has a cycle");
        for e in cyc {
            let (a, b) = graph.edges[e];
            let (ta, tb) = &graph.witnesses[e];
            cuts.add_rational(graph.nodes[a].0, ta.clone(), CutKind::Repair);
            cuts.add_rational(graph.nodes[b].0, tb.clone(), CutKind::Repair);
            repairs += 1;
        }
        cuts.normalize();
    }
}

/// The all-pairs fallback: cut every line at every visibility point.
pub fn quadratic_baseline(lines: &[Line3]) -> Result<CutSet> {
    check_disjoint_non_vertical(lines)?;
    let segs: Vec<Segment3> = lines.iter().cloned().map(Segment3::full).collect();
    base_case(&segs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cycle_gadget, parallel_family, random_lines};
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }
    fn line(id: u64, o: [i64; 3], d: [i64; 3]) -> Line3 {
        Line3::new(id, o.map(q), d.map(q)).unwrap()
    }

    #[test]
    fn above_examples() {
        let x = line(1, [0, 0, 0], [1, 0, 0]);
        assert_eq!(above(&x, &line(2, [0, 0, 1], [0, 1, 0])).unwrap(), Some((2, 1)));
        assert_eq!(above(&x, &line(3, [0, 1, 7], [1, 0, 0])).unwrap(), None);
        assert_eq!(above(&x, &line(4, [1, 0, 2], [0, 1, 1])).unwrap(), Some((4, 1)));
        assert_eq!(above(&x, &line(5, [0, 1, 0], [0, 1, 0])).unwrap_err(), Error::IntersectingLines(1, 5));
    }

    #[test]
    fn type1_examples() {
        let z = Poly::var(3, 2);
        assert_eq!(type1_cuts(&line(0, [0, 0, 0], [1, 0, 1]), &z).unwrap(), vec![Algebraic::Rational(q(0))]);
        let p = &(&z * &z) - &Poly::one(3);
        assert!(type1_cuts(&line(0, [0, 0, 0], [1, 0, 0]), &p).unwrap().is_empty());
        assert_eq!(type1_cuts(&line(7, [0, 0, 0], [1, 0, 0]), &z).unwrap_err(), Error::LineInZeroSet(7));
    }

    #[test]
    fn type2_examples() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let p = &(&z * &z) - &(&(&x * &x) + &(&y * &y));
        assert!(type2_cuts(&line(0, [0, 1, 5], [1, 0, 0]), &p).unwrap().is_empty());
        assert_eq!(type2_cuts(&line(0, [0, 0, 5], [1, 0, 0]), &p).unwrap(), vec![Algebraic::Rational(q(0))]);
        assert_eq!(type2_cuts(&line(0, [0, 0, 5], [1, 0, 0]), &x).unwrap_err(), Error::ZFree);
        // Linear in z: the discriminant is the leading coefficient.
        let p = &(&x * &z) - &y;
        assert_eq!(type2_cuts(&line(0, [-1, 3, 0], [1, 1, 0]), &p).unwrap(), vec![Algebraic::Rational(q(1))]);
    }

    #[test]
    fn second_type_side_filter() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let sphere = &(&(&(&x * &x) + &(&y * &y)) + &(&z * &z)) - &Poly::one(3);
        let d = Discriminant::new(std::slice::from_ref(&sphere)).unwrap();
        let r = |n| Algebraic::Rational(q(n));
        assert_eq!(d.cuts(&line(0, [0, 0, 5], [1, 0, 0])).unwrap(), vec![r(-1), r(1)]);
        assert_eq!(d.cuts_below(&line(0, [0, 0, 5], [1, 0, 0])).unwrap(), vec![r(-1), r(1)]);
        assert!(d.cuts_below(&line(0, [0, 0, -5], [1, 0, 0])).unwrap().is_empty());
        assert_eq!(d.cuts_below(&line(0, [0, 0, 0], [1, 0, 1])).unwrap(), vec![r(1)]);

        let planes = [z.clone(), &z - &x];
        let d = Discriminant::new(&planes).unwrap();
        assert_eq!(d.cuts_below(&line(0, [0, 1, 1], [1, 0, 0])).unwrap(), vec![r(0)]);
        assert!(d.cuts_below(&line(0, [0, 1, -1], [1, 0, 2])).unwrap().is_empty());
        // A critical point on the line is kept.
        assert_eq!(d.cuts_below(&line(0, [0, 1, 0], [1, 0, 3])).unwrap(), vec![r(0)]);
    }

    #[test]
    fn gadget_is_cut() {
        let g = cycle_gadget(3);
        let cuts = CutSet::new();
        let graph = DepthGraph::build(&g, &cuts).unwrap();
        assert_eq!(graph.cycle_edges().unwrap().len(), 3);
        let e = eliminate_cycles(&g, 3, 8, &Params::default(), 1).unwrap();
        assert!(!e.cuts.is_empty());
        assert!(e.graph.topological_order().is_some());
    }

    #[test]
    fn parallel_needs_no_cuts() {
        let e = eliminate_cycles(&parallel_family(12), 3, 8, &Params::default(), 1).unwrap();
        assert!(e.cuts.is_empty());
        assert!(e.graph.edges.is_empty());
    }

    #[test]
    fn random_lines_become_acyclic() {
        let lines = random_lines(50, &mut from_seed(9)).unwrap();
        let e = eliminate_cycles(&lines, 3, 8, &Params::default(), 2).unwrap();
        assert!(e.graph.topological_order().is_some());
        assert_eq!(e.repairs, 0);
        for (k, &(a, b)) in e.graph.edges.iter().enumerate() {
            let (la, lb) = (e.graph.nodes[a].0, e.graph.nodes[b].0);
            let (u, l) = above(&lines[la as usize], &lines[lb as usize]).unwrap().unwrap();
            assert_eq!((u, l), (lb, la), "edge {k}");
        }
    }

    #[test]
    fn piece_lookup_treats_cuts_as_boundary() {
        let mut c = CutSet::new();
        c.add_rational(0, q(1), CutKind::Type1);
        c.add_rational(0, q(3), CutKind::Type1);
        c.normalize();
        assert_eq!(c.piece_of(0, &q(0)), Some(0));
        assert_eq!(c.piece_of(0, &q(1)), None);
        assert_eq!(c.piece_of(0, &q(2)), Some(1));
        assert_eq!(c.piece_of(0, &q(5)), Some(2));
        assert_eq!(c.piece_of(4, &q(5)), Some(0));
    }
}
