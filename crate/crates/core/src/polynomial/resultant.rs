use super::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::{Rational, UniPoly};

/// Removes variable `var` (which must not occur) and renumbers the others.
fn drop_var<T: Scalar>(p: &Polynomial<T>, var: usize) -> Polynomial<T> {
    let n = p.nvars() - 1;
    Polynomial::from_terms(
        n,
        p.terms().map(|(e, c)| {
            debug_assert_eq!(e[var], 0);
            let mut f = [0u32; 3];
            let mut k = 0;
            for (i, &x) in e.iter().enumerate().take(p.nvars()) {
                if i != var {
                    f[k] = x;
                    k += 1;
                }
            }
            (f, c.clone())
        }),
    )
}

/// Determinant by fraction-free (Bareiss) elimination over polynomial
/// entries.
fn bareiss<T: Scalar>(mut m: Vec<Vec<Polynomial<T>>>, nvars: usize) -> Polynomial<T> {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(nvars);
    }
    let mut sign_flip = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Polynomial::zero(nvars);
            };
            m.swap(k, r);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Polynomial::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

/// Sylvester resultant of `p` and `q` with respect to variable `var`. The
/// result lives in the remaining `nvars - 1` variables.
///
/// When one input has degree 0 in `var` the usual convention
/// `Res(a, q) = a^deg(q)` applies.
pub fn resultant<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>, var: usize) -> Result<Polynomial<T>> {
    if p.nvars() != q.nvars() {
        return Err(Error::DimensionMismatch { expected: p.nvars(), got: q.nvars() });
    }
    let nv = p.nvars();
    assert!(nv >= 2, "resultant needs at least two variables");
    if p.is_zero() || q.is_zero() {
        return Ok(Polynomial::zero(nv - 1));
    }
    let a = p.coeffs_in(var);
    let b = q.coeffs_in(var);
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Polynomial::zero(nv); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Polynomial::zero(nv); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    Ok(drop_var(&bareiss(rows, nv), var))
}

/// `Res_z(p, q)` for trivariate inputs, a polynomial in `(x, y)`.
pub fn resultant_z<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>) -> Result<Polynomial<T>> {
    if p.nvars() != 3 || q.nvars() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: p.nvars().min(q.nvars()) });
    }
    if p.degree_in(2).unwrap_or(0) == 0 || q.degree_in(2).unwrap_or(0) == 0 {
        return Err(Error::ZFree);
    }
    resultant(p, q, 2)
}

/// Resultant in `z` of `p` and `q` after restricting both to the vertical
/// plane over the planar line `origin_xy + t * dir_xy`; a univariate
/// polynomial in `t`.
///
/// Its roots contain every `t` over which `p` and `q` have a common zero on
/// the vertical line through the planar point. A restriction that is
/// constant in `z` contributes its own `t`-polynomial instead.
pub fn restricted_resultant_z(
    p: &Polynomial<Rational>,
    q: &Polynomial<Rational>,
    origin_xy: [&Rational; 2],
    dir_xy: [&Rational; 2],
) -> Result<UniPoly> {
    let pr = p.restrict_to_vertical_plane(origin_xy, dir_xy)?;
    let qr = q.restrict_to_vertical_plane(origin_xy, dir_xy)?;
    if pr.is_zero() || qr.is_zero() {
        return Ok(UniPoly::zero());
    }
    let dp = pr.degree_in(1).unwrap_or(0);
    let dq = qr.degree_in(1).unwrap_or(0);
    let r = match (dp, dq) {
        (0, 0) => &pr * &qr,
        (0, _) => pr,
        (_, 0) => qr,
        _ => {
            let r = resultant(&pr, &qr, 1)?;
            return Ok(r.to_univariate());
        }
    };
    Ok(drop_var(&r, 1).to_univariate())
}
