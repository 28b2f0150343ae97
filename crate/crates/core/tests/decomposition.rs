use num_traits::FromPrimitive;
use rand::Rng as _;

use polypart::curve_partition::{first_stage, Label};
use polypart::cutting::{second_stage, trapezoid::trapezoidal_decomposition, Location, PlanarSegment};
use polypart::depth::{eliminate_cycles, CutKind, DepthGraph};
use polypart::generate::{cycle_gadget, parallel_family, random_lines};
use polypart::geometry::{check_disjoint_non_vertical, Line3, Segment3};
use polypart::oracle::{find_cycle, verify_decomposition, verify_elimination};
use polypart::polynomial::Algebraic;
use polypart::rng::from_seed;
use polypart::{Params, Rational};

fn q(n: i64) -> Rational {
    Rational::from_i64(n).unwrap()
}

/// Parallel lines piled into one region plus random lines around them.
fn mixed(n_par: usize, n_rand: usize, seed: u64) -> Vec<Line3> {
    let mut lines = parallel_family(n_par);
    for l in random_lines(n_rand, &mut from_seed(seed)).unwrap() {
        let l = Line3::new(lines.len() as u64, l.origin, l.dir).unwrap();
        lines.push(l);
        if check_disjoint_non_vertical(&lines).is_err() {
            lines.pop();
        }
    }
    lines
}

#[test]
fn mixed_instance_is_refined_and_verified() {
    let lines = mixed(180, 20, 4);
    let segs: Vec<Segment3> = lines.into_iter().map(Segment3::full).collect();
    let params = Params::default();
    let s1 = first_stage(&segs, 3, &params, &mut from_seed(17)).unwrap();
    assert!(s1.cells.iter().any(|c| c.label == Label::Unacceptable));
    let full = second_stage(s1, &segs, &params, 17).unwrap();
    assert!(!full.refined.is_empty());
    let rep = verify_decomposition(&full, &segs, &params);
    assert!(rep.passed(), "{:#?}", rep.failures());

    // Probe points land in a cell whose sign vector they share.
    let mut rng = from_seed(99);
    for _ in 0..200 {
        let x = [0, 1, 2].map(|_| Rational::new(rng.gen_range(-4000..4000).into(), 7.into()));
        match full.locate(&x) {
            Location::Boundary => {}
            Location::Stage1(signs) => {
                if let Some(c) = full.stage1.cells.iter().find(|c| c.signs == signs) {
                    assert_eq!(c.label, Label::Acceptable);
                }
            }
            Location::Refined { refined, trapezoid } => {
                let r = &full.refined[refined];
                assert!(trapezoid < r.decomposition.trapezoids.len());
                assert!(r.decomposition.contains(trapezoid, &r.sheared(&x[0], &x[1]), &x[1]));
            }
        }
    }
}

#[test]
fn mutated_cell_list_is_caught() {
    let segs: Vec<Segment3> = mixed(60, 40, 2).into_iter().map(Segment3::full).collect();
    let params = Params::default();
    let s1 = first_stage(&segs, 2, &params, &mut from_seed(3)).unwrap();
    let mut full = second_stage(s1, &segs, &params, 3).unwrap();
    assert!(verify_decomposition(&full, &segs, &params).passed());
    let cell = full.stage1.cells.iter_mut().find(|c| !c.incident.is_empty()).unwrap();
    cell.incident.pop();
    let rep = verify_decomposition(&full, &segs, &params);
    let failed: Vec<_> = rep.failures().iter().map(|c| c.name.clone()).collect();
    assert!(failed.contains(&"stage1.cell_lists".to_string()), "{failed:?}");
    assert!(rep.failures().iter().all(|c| c.witness.is_some() || c.name.ends_with("matches")));
}

/// Bounded segments in general position: every endpoint and crossing adds
/// three trapezoids to the initial one.
#[test]
fn trapezoid_count_formula() {
    let mut rng = from_seed(8);
    for round in 0..10 {
        let n = 2 + round;
        let segs: Vec<PlanarSegment> = (0..n)
            .map(|i| {
                let x0 = rng.gen_range(-50..0);
                PlanarSegment {
                    curve: i as u64,
                    m: Rational::new(rng.gen_range(-40..40).into(), rng.gen_range(1..9).into()),
                    c: Rational::new(rng.gen_range(-400..400).into(), rng.gen_range(1..9).into()),
                    lo: Some(q(x0) + Rational::new(i.into(), 97.into())),
                    hi: Some(q(x0 + rng.gen_range(10..60)) + Rational::new(i.into(), 89.into())),
                }
            })
            .collect();
        let mut k = 0;
        let mut generic = true;
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&segs[i], &segs[j]);
                if a.m == b.m {
                    generic &= a.c != b.c;
                    continue;
                }
                let x = (&b.c - &a.c) / (&a.m - &b.m);
                if a.spans(&x) && b.spans(&x) {
                    k += 1;
                }
                // Crossings on another segment's end wall are not generic.
                for s in [a, b] {
                    generic &= s.lo.as_ref() != Some(&x) && s.hi.as_ref() != Some(&x);
                }
            }
        }
        if !generic {
            continue;
        }
        let dec = trapezoidal_decomposition(segs).unwrap();
        assert_eq!(dec.trapezoids.len(), 1 + 3 * n + 3 * k, "round {round}");
    }
}

#[test]
fn gadget_cycle_found_then_eliminated() {
    let lines = cycle_gadget(3);
    let before = DepthGraph::build(&lines, &Default::default()).unwrap();
    assert_eq!(find_cycle(&before).map(|c| c.len()), Some(3));
    let el = eliminate_cycles(&lines, 3, 8, &Params::default(), 1).unwrap();
    assert!(!el.cuts.is_empty());
    assert_eq!(find_cycle(&el.graph), None);
    let cuts: Vec<(u64, Algebraic, CutKind)> = el.cuts.cuts().into_iter().map(|c| (c.line, c.t, c.kind)).collect();
    assert!(verify_elimination(&lines, &cuts, &el.graph).passed());
}

#[test]
fn moved_cut_is_caught() {
    let lines = random_lines(40, &mut from_seed(6)).unwrap();
    let el = eliminate_cycles(&lines, 3, 8, &Params::default(), 6).unwrap();
    let mut cuts: Vec<(u64, Algebraic, CutKind)> = el.cuts.cuts().into_iter().map(|c| (c.line, c.t, c.kind)).collect();
    assert!(verify_elimination(&lines, &cuts, &el.graph).passed());
    // Dropping a cut merges two pieces, which renumbers the graph.
    cuts.remove(cuts.len() / 2);
    assert!(!verify_elimination(&lines, &cuts, &el.graph).passed());
}
