use crate::scalar::Scalar;

use super::Exponent;

/// `binom(D + d, d)`: number of monomials of degree at most `D` in `d`
/// variables.
pub fn veronese_dim(d: usize, degree: u32) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = acc * (degree as u128 + i) / i;
    }
    acc as usize
}

/// Exponents of all monomials of degree at most `degree` in `d` variables,
/// in graded lexicographic order: `1, x, y, z, x^2, xy, xz, y^2, yz, z^2, ...`.
pub fn monomial_exponents(d: usize, degree: u32) -> Vec<Exponent> {
    assert!((1..=3).contains(&d));
    let mut out = Vec::with_capacity(veronese_dim(d, degree));
    for k in 0..=degree {
        match d {
            1 => out.push([k, 0, 0]),
            2 => {
                for a in (0..=k).rev() {
                    out.push([a, k - a, 0]);
                }
            }
            _ => {
                for a in (0..=k).rev() {
                    for b in (0..=k - a).rev() {
                        out.push([a, b, k - a - b]);
                    }
                }
            }
        }
    }
    out
}

/// Veronese lift: every monomial of degree at most `degree` evaluated at `x`,
/// in the order of [`monomial_exponents`].
pub fn veronese<T: Scalar>(x: &[T], degree: u32) -> Vec<T> {
    let d = x.len();
    let mut powers: Vec<Vec<T>> = Vec::with_capacity(d);
    for xi in x {
        let mut pw = vec![T::one()];
        for k in 1..=degree as usize {
            let next = pw[k - 1].clone() * xi.clone();
            pw.push(next);
        }
        powers.push(pw);
    }
    monomial_exponents(d, degree)
        .into_iter()
        .map(|e| {
            let mut v = T::one();
            for (i, pw) in powers.iter().enumerate() {
                if e[i] > 0 {
                    v = v * pw[e[i] as usize].clone();
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(veronese(&[q(1), q(2), q(3)], 1), vec![q(1), q(1), q(2), q(3)]);
        assert_eq!(veronese(&[q(1), q(2), q(3)], 2).len(), 10);
        assert_eq!(
            veronese(&[q(0), q(0)], 2),
            vec![q(1), q(0), q(0), q(0), q(0), q(0)]
        );
    }

    #[test]
    fn order_and_dimension() {
        let e = monomial_exponents(3, 2);
        assert_eq!(
            e,
            vec![
                [0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1],
                [2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]
            ]
        );
        for d in 1..=3 {
            for deg in 0..=8 {
                assert_eq!(monomial_exponents(d, deg).len(), veronese_dim(d, deg));
            }
        }
        assert_eq!(veronese_dim(3, 3), 20);
        assert_eq!(veronese_dim(2, 4), 15);
    }
}
