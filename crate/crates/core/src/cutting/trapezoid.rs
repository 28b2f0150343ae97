//! Vertical (trapezoidal) decomposition of a set of planar segments.
//!
//! Segments are non-vertical, written `y = m x + c` on an open x-range whose
//! ends may be infinite. The decomposition is built slab by slab between
//! consecutive event abscissae (finite endpoints and crossings); a gap
//! between the same two segments is carried across an event unless a vertex
//! at that event lies inside it.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Bound;
use crate::Rational;

/// An open non-vertical planar segment `y = m x + c`, `lo < x < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarSegment {
    /// Source curve.
    pub curve: u64,
    #[serde(with = "crate::polynomial::rational_serde")]
    pub m: Rational,
    #[serde(with = "crate::polynomial::rational_serde")]
    pub c: Rational,
    #[serde(with = "crate::polynomial::opt_rational_serde")]
    pub lo: Option<Rational>,
    #[serde(with = "crate::polynomial::opt_rational_serde")]
    pub hi: Option<Rational>,
}

impl PlanarSegment {
    pub fn y_at(&self, x: &Rational) -> Rational {
        &self.m * x + &self.c
    }

    pub fn spans(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|l| l < x) && self.hi.as_ref().is_none_or(|h| x < h)
    }
}

/// Vertex that generates a vertical wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vertex {
    Endpoint(usize),
    Crossing(usize, usize),
}

/// An open trapezoid `lo < x < hi`, strictly between `floor` and `ceiling`
/// (segment indices, `None` for infinity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trapezoid {
    pub lo: Bound,
    pub hi: Bound,
    pub floor: Option<usize>,
    pub ceiling: Option<usize>,
    pub left: Option<Vertex>,
    pub right: Option<Vertex>,
}

/// A linear constraint `a + b t > 0`.
fn constrain(lo: &mut Option<Rational>, hi: &mut Option<Rational>, a: Rational, b: Rational) -> bool {
    if b.is_zero() {
        return a.is_positive();
    }
    let root = -a / &b;
    if b.is_positive() {
        if lo.as_ref().is_none_or(|l| *l < root) {
            *lo = Some(root);
        }
    } else if hi.as_ref().is_none_or(|h| root < *h) {
        *hi = Some(root);
    }
    true
}

/// The trapezoidal decomposition together with its segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub segments: Vec<PlanarSegment>,
    pub trapezoids: Vec<Trapezoid>,
}

impl Decomposition {
    fn y_of(&self, s: Option<usize>, x: &Rational) -> Option<Rational> {
        s.map(|i| self.segments[i].y_at(x))
    }

    /// Whether `(x, y)` lies in the open trapezoid `i`.
    pub fn contains(&self, i: usize, x: &Rational, y: &Rational) -> bool {
        let tr = &self.trapezoids[i];
        if tr.lo.cmp_rational(x).is_ge() || tr.hi.cmp_rational(x).is_le() {
            return false;
        }
        self.y_of(tr.floor, x).is_none_or(|f| f < *y) && self.y_of(tr.ceiling, x).is_none_or(|c| *y < c)
    }

    /// The trapezoid containing `(x, y)`; `None` on walls and segments.
    pub fn locate(&self, x: &Rational, y: &Rational) -> Option<usize> {
        (0..self.trapezoids.len()).find(|&i| self.contains(i, x, y))
    }

    /// Open parameter interval on which `(ax + bx t, ay + by t)` lies in
    /// trapezoid `i`, `None` if empty. Ends are `None` when unbounded.
    pub fn line_interval(
        &self,
        i: usize,
        a: [&Rational; 2],
        b: [&Rational; 2],
    ) -> Option<(Option<Rational>, Option<Rational>)> {
        let tr = &self.trapezoids[i];
        let (mut lo, mut hi) = (None, None);
        let [ax, ay] = a;
        let [bx, by] = b;
        let mut ok = true;
        if let Some(l) = tr.lo.as_rational() {
            ok &= constrain(&mut lo, &mut hi, ax - l, bx.clone());
        }
        if let Some(h) = tr.hi.as_rational() {
            ok &= constrain(&mut lo, &mut hi, h - ax, -bx);
        }
        if let Some(f) = tr.floor {
            let s = &self.segments[f];
            ok &= constrain(&mut lo, &mut hi, ay - &s.m * ax - &s.c, by - &s.m * bx);
        }
        if let Some(c) = tr.ceiling {
            let s = &self.segments[c];
            ok &= constrain(&mut lo, &mut hi, &s.m * ax + &s.c - ay, &s.m * bx - by);
        }
        if !ok {
            return None;
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l >= h {
                return None;
            }
        }
        Some((lo, hi))
    }
}

fn crossing(a: &PlanarSegment, b: &PlanarSegment) -> Option<Rational> {
    if a.m == b.m {
        return None;
    }
    let x = (&b.c - &a.c) / (&a.m - &b.m);
    (a.spans(&x) && b.spans(&x)).then_some(x)
}

fn overlaps(a: &PlanarSegment, b: &PlanarSegment) -> bool {
    let lo = match (&a.lo, &b.lo) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.as_ref().or(y.as_ref()),
    };
    let hi = match (&a.hi, &b.hi) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.as_ref().or(y.as_ref()),
    };
    match (lo, hi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    }
}

/// Builds the vertical decomposition of `segments`.
///
/// Fails with [`Error::OverlappingSegments`] when two collinear segments
/// share more than a point.
pub fn trapezoidal_decomposition(segments: Vec<PlanarSegment>) -> Result<Decomposition> {
    let n = segments.len();
    // Vertices keyed by abscissa.
    let mut vertices: Vec<(Rational, Rational, Vertex)> = Vec::new();
    for (i, s) in segments.iter().enumerate() {
        for e in [&s.lo, &s.hi].into_iter().flatten() {
            vertices.push((e.clone(), s.y_at(e), Vertex::Endpoint(i)));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&segments[i], &segments[j]);
            if a.m == b.m && a.c == b.c && overlaps(a, b) {
                return Err(Error::OverlappingSegments(i, j));
            }
            if let Some(x) = crossing(a, b) {
                let y = a.y_at(&x);
                vertices.push((x, y, Vertex::Crossing(i, j)));
            }
        }
    }
    vertices.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let mut events: Vec<Rational> = vertices.iter().map(|v| v.0.clone()).collect();
    events.dedup();

    let two = Rational::from_integer(2.into());
    let sample = |k: usize| -> Rational {
        match (k.checked_sub(1).map(|i| &events[i]), events.get(k)) {
            (None, None) => Rational::zero(),
            (None, Some(r)) => r - Rational::one(),
            (Some(l), None) => l + Rational::one(),
            (Some(l), Some(r)) => (l + r) / &two,
        }
    };

    let mut dec = Decomposition { segments, trapezoids: Vec::new() };
    let mut open: HashMap<(Option<usize>, Option<usize>), usize> = HashMap::new();
    let mut vi = 0;
    for k in 0..=events.len() {
        let xs = sample(k);
        let mut spanning: Vec<usize> = (0..n).filter(|&i| dec.segments[i].spans(&xs)).collect();
        spanning.sort_by_key(|&i| dec.segments[i].y_at(&xs));
        let mut pieces = Vec::with_capacity(spanning.len() + 1);
        let mut below = None;
        for &s in &spanning {
            pieces.push((below, Some(s)));
            below = Some(s);
        }
        pieces.push((below, None));

        // Vertices on the wall at the left of this slab.
        let wall_x = k.checked_sub(1).map(|i| events[i].clone());
        let at_wall: &[(Rational, Rational, Vertex)] = match &wall_x {
            Some(x) => {
                let start = vi;
                while vi < vertices.len() && vertices[vi].0 == *x {
                    vi += 1;
                }
                &vertices[start..vi]
            }
            None => &[],
        };
        let in_gap = |p: &(Option<usize>, Option<usize>), strict: bool, dec: &Decomposition| -> Option<Vertex> {
            let x = wall_x.as_ref()?;
            let f = dec.y_of(p.0, x);
            let c = dec.y_of(p.1, x);
            at_wall
                .iter()
                .find(|(_, y, _)| {
                    let above = f.as_ref().is_none_or(|f| if strict { f < y } else { f <= y });
                    let below = c.as_ref().is_none_or(|c| if strict { y < c } else { y <= c });
                    above && below
                })
                .map(|v| v.2)
        };

        let mut next_open = HashMap::with_capacity(pieces.len());
        for p in &pieces {
            if let Some(&t) = open.get(p) {
                if in_gap(p, true, &dec).is_none() {
                    open.remove(p);
                    next_open.insert(*p, t);
                    continue;
                }
            }
            let lo = wall_x.clone().map_or(Bound::NegInf, Bound::rational);
            let left = in_gap(p, false, &dec);
            dec.trapezoids.push(Trapezoid { lo, hi: Bound::PosInf, floor: p.0, ceiling: p.1, left, right: None });
            next_open.insert(*p, dec.trapezoids.len() - 1);
        }
        // Trapezoids that did not continue end at this wall.
        let mut closed: Vec<_> = open.drain().collect();
        closed.sort_by_key(|(_, t)| *t);
        for (p, t) in closed {
            dec.trapezoids[t].hi = Bound::rational(wall_x.clone().expect("closed at a wall"));
            dec.trapezoids[t].right = in_gap(&p, false, &dec);
        }
        open = next_open;
    }
    Ok(dec)
}
