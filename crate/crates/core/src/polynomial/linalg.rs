use crate::scalar::Scalar;

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<T: Scalar>(m: &mut [Vec<T>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let pick = if T::EXACT {
            (row..m.len()).find(|&r| !m[r][col].is_zero())
        } else {
            (row..m.len())
                .filter(|&r| m[r][col].approx().abs() > 1e-12)
                .max_by(|&a, &b| m[a][col].approx().abs().total_cmp(&m[b][col].approx().abs()))
        };
        let Some(p) = pick else { continue };
        m.swap(row, p);
        let inv = T::one() / m[row][col].clone();
        for v in m[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let delta = f.clone() * m[row][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of a matrix given by rows of equal length `ncols`.
pub fn rank<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of the right null space `{v : M v = 0}`.
pub fn null_space<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![T::zero(); ncols];
        v[free] = T::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -m[i][free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::{FromPrimitive, Zero};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    #[test]
    fn null_space_is_annihilated() {
        let rows = vec![
            vec![q(1), q(2), q(3), q(4)],
            vec![q(2), q(4), q(6), q(8)],
            vec![q(0), q(1), q(-1), q(5)],
        ];
        assert_eq!(rank(&rows, 4), 2);
        let ns = null_space(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot = r.iter().zip(v).fold(Rational::zero(), |a, (x, y)| a + x * y);
                assert!(dot.is_zero());
            }
        }
    }
}
