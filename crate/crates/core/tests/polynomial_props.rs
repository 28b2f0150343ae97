use num_traits::{FromPrimitive, Zero};
use polypart::polynomial::{isolate_real_roots, real_roots, resultant_z, Algebraic};
use polypart::{Poly, Rational, UniPoly};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_i64(n).unwrap()
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn arb_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg, 0..=max_deg), -9i64..=9), 1..=max_terms).prop_map(
        move |terms| {
            Poly::from_terms(
                3,
                terms.into_iter().filter(|((a, b, c), _)| a + b + c <= max_deg).map(|((a, b, c), k)| ([a, b, c], q(k))),
            )
        },
    )
}

fn arb_point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(arb_rational(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_is_multiplicative(p in arb_poly(3, 6), r in arb_poly(3, 6), x in arb_point()) {
        let lhs = (&p * &r).eval(&x).unwrap();
        prop_assert_eq!(lhs, p.eval(&x).unwrap() * r.eval(&x).unwrap());
        let sum = (&p + &r).eval(&x).unwrap();
        prop_assert_eq!(sum, p.eval(&x).unwrap() + r.eval(&x).unwrap());
    }

    #[test]
    fn planted_roots_are_recovered(roots in prop::collection::vec(arb_rational(), 1..7), lead in 1i64..5) {
        let p = UniPoly::from_roots(&roots).scale(&q(lead));
        let found = real_roots(&p).unwrap();
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(found.len(), distinct.len());
        for (f, r) in found.iter().zip(&distinct) {
            prop_assert_eq!(f.value.as_rational(), Some(r));
            let mult = roots.iter().filter(|x| *x == r).count() as u32;
            prop_assert_eq!(f.multiplicity, mult);
        }
    }

    #[test]
    fn bezout_bound_on_lines(p in arb_poly(4, 8), o in arb_point(), d in arb_point()) {
        prop_assume!(d.iter().any(|c| !c.is_zero()));
        let u = p.restrict_to_line(&o, &d).unwrap();
        if !u.is_zero() {
            let n = real_roots(&u).unwrap().len();
            prop_assert!(n as u32 <= p.degree().unwrap_or(0));
        }
    }

    #[test]
    fn gap_signs_alternate_for_squarefree(roots in prop::collection::vec(arb_rational(), 1..5), extra in -5i64..5) {
        // Product with an irreducible-ish cubic adds irrational roots.
        let cubic = UniPoly::new(vec![q(extra), q(-3), q(0), q(1)]);
        let p = &UniPoly::from_roots(&roots) * &cubic;
        let iso = isolate_real_roots(&p).unwrap();
        let mut samples = vec![iso[0].rational_below()];
        for w in iso.windows(2) {
            prop_assert!(w[0] < w[1]);
            samples.push(Algebraic::rational_between(&w[0], &w[1]));
        }
        samples.push(iso.last().unwrap().rational_above());
        for s in &samples {
            prop_assert!(!p.eval(s).is_zero());
        }
        // Every sample lies in its own gap.
        for (i, r) in iso.iter().enumerate() {
            prop_assert!(r.cmp_rational(&samples[i]).is_gt());
            prop_assert!(r.cmp_rational(&samples[i + 1]).is_lt());
        }
    }

    #[test]
    fn resultant_vanishes_over_double_roots(a in arb_rational(), x0 in arb_rational(), k in arb_poly(2, 4), y in arb_rational()) {
        let x = Poly::var(3, 0);
        let z = Poly::var(3, 2);
        let za = &z - &Poly::constant(3, a);
        let shift = &x - &Poly::constant(3, x0.clone());
        let p = &(&za * &za) + &(&shift * &k);
        prop_assume!(p.degree_in(2).unwrap_or(0) >= 1);
        let dz = p.partial(2);
        prop_assume!(dz.degree_in(2).unwrap_or(0) >= 1);
        let r = resultant_z(&p, &dz).unwrap();
        prop_assert!(r.eval(&[x0, y]).unwrap().is_zero());
    }
}
