//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::RationalMatrix;
use crate::error::{Error, Result};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(a: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m.get(r, c).recip();
        for j in c..cols {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..cols {
                let v = m.get(i, j) - &f * m.get(r, j);
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &RationalMatrix) -> usize {
    rref(a).1.len()
}

/// Columns form a basis of the right null space.
pub fn nullspace(a: &RationalMatrix) -> RationalMatrix {
    let (m, pivots) = rref(a);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    RationalMatrix::from_fn(n, free.len(), |i, k| {
        let f = free[k];
        if i == f {
            BigRational::one()
        } else if let Some(r) = pivots.iter().position(|&p| p == i) {
            -m.get(r, f).clone()
        } else {
            BigRational::zero()
        }
    })
}

pub fn determinant(a: &RationalMatrix) -> Result<BigRational> {
    if !a.is_square() {
        return Err(Error::validation("determinant of a non-square matrix"));
    }
    let mut m = a.clone();
    let n = m.rows();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
            return Ok(BigRational::zero());
        };
        if p != c {
            m.swap_rows(p, c);
            det = -det;
        }
        let piv = m.get(c, c).clone();
        det *= &piv;
        for i in c + 1..n {
            if m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c) / &piv;
            for j in c..n {
                let v = m.get(i, j) - &f * m.get(c, j);
                m.set(i, j, v);
            }
        }
    }
    Ok(det)
}

pub fn inverse(a: &RationalMatrix) -> Result<RationalMatrix> {
    if !a.is_square() {
        return Err(Error::validation("inverse of a non-square matrix"));
    }
    let n = a.rows();
    let aug = RationalMatrix::hstack(&[a.clone(), RationalMatrix::identity(n)], n)?;
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::validation("matrix is singular"));
    }
    Ok(r.column_range(n, 2 * n))
}

/// Solve `A X = B`; `None` when inconsistent. Picks the solution with free variables zero.
pub fn solve(a: &RationalMatrix, b: &RationalMatrix) -> Option<RationalMatrix> {
    let n = a.cols();
    let aug = RationalMatrix::hstack(&[a.clone(), b.clone()], a.rows()).ok()?;
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = RationalMatrix::zeros(n, b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, r.get(row, n + j).clone());
        }
    }
    Some(x)
}

/// Coefficients `c_0..c_n` (ascending) of the monic characteristic polynomial
/// `det(λI − A)`, via reduction to upper Hessenberg form.
pub fn char_poly(a: &RationalMatrix) -> Result<Vec<BigRational>> {
    if !a.is_square() {
        return Err(Error::validation(format!(
            "characteristic polynomial of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut h = a.clone();
    // similarity reduction to Hessenberg form
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !h.get(i, c).is_zero()) else {
            continue;
        };
        if p != c + 1 {
            h.swap_rows(p, c + 1);
            h.swap_cols(p, c + 1);
        }
        let piv = h.get(c + 1, c).clone();
        for r in c + 2..n {
            if h.get(r, c).is_zero() {
                continue;
            }
            let f = h.get(r, c) / &piv;
            for j in 0..n {
                let v = h.get(r, j) - &f * h.get(c + 1, j);
                h.set(r, j, v);
            }
            for i in 0..n {
                let v = h.get(i, c + 1) + &f * h.get(i, r);
                h.set(i, c + 1, v);
            }
        }
    }
    // p_k(λ) = (λ − h_kk) p_{k−1} − Σ_{i<k} h_ik (Π_{j=i+1}^{k} h_{j,j−1}) p_{i−1}
    let mut polys: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![BigRational::zero(); k + 2];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * h.get(k, k);
        }
        let mut prod = BigRational::one();
        for i in (0..k).rev() {
            prod *= h.get(i + 1, i);
            if prod.is_zero() {
                break;
            }
            let coef = h.get(i, k) * &prod;
            if coef.is_zero() {
                continue;
            }
            for (d, c) in polys[i].iter().enumerate() {
                next[d] -= &coef * c;
            }
        }
        polys.push(next);
    }
    Ok(polys.pop().expect("at least the constant polynomial"))
}

/// Product of the nonzero eigenvalues of a symmetric matrix, exactly.
pub fn det_prime(s: &RationalMatrix) -> Result<BigRational> {
    if !s.is_symmetric() {
        return Err(Error::validation("det' requires a symmetric matrix"));
    }
    det_prime_unchecked(s)
}

/// Same as [`det_prime`] for any diagonalizable matrix (e.g. self-adjoint
/// with respect to a non-standard inner product).
pub(crate) fn det_prime_unchecked(s: &RationalMatrix) -> Result<BigRational> {
    let cp = char_poly(s)?;
    let n = s.rows();
    let k = cp.iter().position(|c| !c.is_zero()).expect("monic");
    let sign = if (n - k) % 2 == 0 { q(1) } else { q(-1) };
    Ok(sign * cp[k].clone())
}

/// Evaluate a polynomial (ascending coefficients) at a square matrix.
pub fn eval_poly_at(coeffs: &[BigRational], a: &RationalMatrix) -> RationalMatrix {
    let n = a.rows();
    let mut acc = RationalMatrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = &acc * a;
        for i in 0..n {
            let v = acc.get(i, i) + c;
            acc.set(i, i, v);
        }
    }
    acc
}

pub fn is_positive_definite(g: &RationalMatrix) -> bool {
    // Sylvester: all leading principal minors positive
    if !g.is_symmetric() {
        return false;
    }
    (1..=g.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        determinant(&g.submatrix(&idx, &idx))
            .map(|d| d.is_positive())
            .unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn char_poly_examples() {
        let a = RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(char_poly(&a).unwrap(), qs(&[-1, 0, 1]));
        let a = RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(char_poly(&a).unwrap(), qs(&[6, -5, 1]));
        let a = RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(char_poly(&a).unwrap(), qs(&[1, -3, 1]));
        let e = RationalMatrix::zeros(0, 0);
        assert_eq!(char_poly(&e).unwrap(), qs(&[1]));
        let r = RationalMatrix::zeros(2, 3);
        assert!(matches!(char_poly(&r), Err(Error::Validation(_))));
    }

    #[test]
    fn char_poly_needs_row_swap() {
        // zero subdiagonal entry forces a pivot search during reduction
        let a = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[0, 4, 5], &[7, 8, 10]]);
        let cp = char_poly(&a).unwrap();
        assert!(eval_poly_at(&cp, &a).is_zero_matrix());
        assert_eq!(cp[0], -determinant(&a).unwrap());
    }

    #[test]
    fn det_prime_examples() {
        let a = RationalMatrix::from_i64_rows(&[&[0, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert_eq!(det_prime(&a).unwrap(), q(6));
        assert_eq!(det_prime(&RationalMatrix::identity(4)).unwrap(), q(1));
        let a = RationalMatrix::from_i64_rows(&[&[1, -1], &[-1, 1]]);
        assert_eq!(det_prime(&a).unwrap(), q(2));
        assert_eq!(det_prime(&RationalMatrix::zeros(3, 3)).unwrap(), q(1));
        let ns = RationalMatrix::from_i64_rows(&[&[1, 2], &[0, 1]]);
        assert!(matches!(det_prime(&ns), Err(Error::Validation(_))));
    }

    #[test]
    fn nullspace_and_inverse() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let n = nullspace(&a);
        assert_eq!(n.cols(), 2);
        assert!((&a * &n).is_zero_matrix());
        let b = RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let bi = inverse(&b).unwrap();
        assert_eq!(&b * &bi, RationalMatrix::identity(2));
        assert!(inverse(&a.submatrix(&[0, 1], &[0, 1])).is_err());
    }

    #[test]
    fn positive_definite() {
        assert!(is_positive_definite(&RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 2]])));
        assert!(!is_positive_definite(&RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 1]])));
    }
}
