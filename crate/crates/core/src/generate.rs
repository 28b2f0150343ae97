//! Random and structured instances that satisfy the pipeline preconditions
//! by construction.

use num_traits::FromPrimitive;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::geometry::{above_pair, projection_crossing, Line3, WeightedPoint};
use crate::rng::Rng;
use crate::Rational;

fn q(n: i64) -> Rational {
    Rational::from_i64(n).unwrap()
}

/// Half-width of the integer box from which line points are drawn.
pub const BOX: i64 = 1 << 10;

const ATTEMPTS: usize = 10_000;

fn compatible(l: &Line3, others: &[Line3]) -> bool {
    others.iter().all(|o| match projection_crossing(l, o) {
        Ok(None) => true,
        Ok(Some((t, s))) => l.z_at(&t) != o.z_at(&s),
        Err(_) => false,
    })
}

/// `n` pairwise disjoint non-vertical lines with pairwise distinct
/// projections, each through two random integer points of the box.
pub fn random_lines(n: usize, rng: &mut Rng) -> Result<Vec<Line3>> {
    let mut out: Vec<Line3> = Vec::with_capacity(n);
    let coord = |rng: &mut Rng| q(rng.gen_range(-BOX..=BOX));
    while out.len() < n {
        let mut ok = false;
        for _ in 0..ATTEMPTS {
            let a = [coord(rng), coord(rng), coord(rng)];
            let b = [coord(rng), coord(rng), coord(rng)];
            let dir = [&b[0] - &a[0], &b[1] - &a[1], &b[2] - &a[2]];
            let Ok(l) = Line3::new(out.len() as u64, a, dir) else { continue };
            if l.is_vertical() || !compatible(&l, &out) {
                continue;
            }
            out.push(l);
            ok = true;
            break;
        }
        if !ok {
            return Err(Error::InvalidInput("generation retries exhausted".into()));
        }
    }
    Ok(out)
}

/// `n` unit-weight random integer points in the box of dimension `d`.
pub fn random_points(n: usize, d: usize, rng: &mut Rng) -> Vec<WeightedPoint> {
    (0..n).map(|_| WeightedPoint::new((0..d).map(|_| q(rng.gen_range(-BOX..=BOX))).collect(), 1)).collect()
}

/// Three lines forming a depth cycle: each passes above the next. Further
/// lines (for `n > 3`) are stacked far above and parallel in projection.
pub fn cycle_gadget(n: usize) -> Vec<Line3> {
    // Projections form a triangle; each line tilts so that it is high where
    // it meets its successor and low where it meets its predecessor.
    let base = [
        ([0, 0, 1], [1, 0, 0]),
        ([0, 0, 0], [1, 2, 1]),
        ([4, 0, 2], [-1, 2, -1]),
    ];
    let mut out: Vec<Line3> = base
        .iter()
        .enumerate()
        .map(|(i, (o, d))| Line3::new(i as u64, o.map(q), d.map(q)).unwrap())
        .collect();
    out.truncate(n.min(3));
    for i in 3..n {
        let off = 100 * i as i64;
        out.push(Line3::new(i as u64, [q(0), q(off), q(off)], [q(1), q(0), q(0)]).unwrap());
    }
    out
}

/// `n` lines with parallel projections at distinct heights.
pub fn parallel_family(n: usize) -> Vec<Line3> {
    (0..n).map(|i| Line3::new(i as u64, [q(0), q(i as i64), q(3 * i as i64)], [q(1), q(0), q(1)]).unwrap()).collect()
}

/// Whether the three lines form a cycle under the "passes above" relation.
pub fn is_three_cycle(l: &[Line3]) -> bool {
    if l.len() < 3 {
        return false;
    }
    let up = |i: usize, j: usize| matches!(above_pair(&l[i], &l[j]), Ok(Some((u, _, _, _))) if u == l[i].id);
    (up(0, 1) && up(1, 2) && up(2, 0)) || (up(1, 0) && up(2, 1) && up(0, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::check_disjoint_non_vertical;
    use crate::rng::from_seed;

    #[test]
    fn gadget_is_a_cycle() {
        let g = cycle_gadget(3);
        check_disjoint_non_vertical(&g).unwrap();
        assert!(is_three_cycle(&g));
        check_disjoint_non_vertical(&cycle_gadget(6)).unwrap();
    }

    #[test]
    fn random_lines_are_valid() {
        let l = random_lines(40, &mut from_seed(3)).unwrap();
        check_disjoint_non_vertical(&l).unwrap();
        assert_eq!(random_lines(1, &mut from_seed(3)).unwrap().len(), 1);
    }

    #[test]
    fn parallel_family_has_no_crossings() {
        let l = parallel_family(10);
        for i in 0..10 {
            for j in i + 1..10 {
                assert_eq!(projection_crossing(&l[i], &l[j]).unwrap(), None);
            }
        }
    }
}
