//! Hermite normal form and lattice helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::matrix::{IntMatrix, RationalMatrix};
use super::rational;
use super::smith::axpy_row;
use crate::error::{Error, Result};

/// Row Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`. Zero rows are dropped. Canonical for the
/// row lattice.
pub fn hnf_rows(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below row r
            let mut best: Option<usize> = None;
            for i in r..rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                if best.map_or(true, |b| m.get(i, c).abs() < m.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let q = m.get(i, c).div_floor(m.get(r, c));
                axpy_row(&mut m, i, r, &q);
                if !m.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m.get(r, c).is_zero() {
            continue;
        }
        if m.get(r, c).is_negative() {
            for j in 0..cols {
                let x = m.get_mut(r, j);
                *x = -std::mem::take(x);
            }
        }
        for i in 0..r {
            let q = m.get(i, c).div_floor(m.get(r, c));
            axpy_row(&mut m, i, r, &q);
        }
        r += 1;
    }
    let keep: Vec<usize> = (0..r).collect();
    let all: Vec<usize> = (0..cols).collect();
    m.submatrix(&keep, &all)
}

/// Canonical basis (as columns) of the Z-lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    hnf_rows(&gens.transpose()).transpose()
}

/// Canonical basis (columns) of the Z-lattice spanned by rational columns.
pub fn rational_lattice_basis(gens: &RationalMatrix) -> RationalMatrix {
    let d = gens.common_denominator();
    let scaled = gens
        .map(|x| x * BigRational::from_integer(d.clone()))
        .to_integer()
        .expect("cleared denominators");
    let dq = BigRational::from_integer(d);
    lattice_basis(&scaled).map(|x| BigRational::from_integer(x.clone()) / &dq)
}

/// Is every column of `vecs` an integral combination of the columns of `basis`?
/// `basis` must have full column rank.
pub fn in_lattice(basis: &RationalMatrix, vecs: &RationalMatrix) -> bool {
    match rational::solve(basis, vecs) {
        Some(x) => {
            // solve() returns the unique solution only when consistent
            (&basis.clone() * &x) == *vecs && x.entries().iter().all(|e| e.is_integer())
        }
        None => false,
    }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> Result<IntMatrix> {
    rational::inverse(&u.to_rational())?
        .to_integer()
        .ok_or_else(|| Error::validation("matrix is not unimodular"))
}

pub fn max_denominator(m: &RationalMatrix) -> BigInt {
    m.entries()
        .iter()
        .map(|x| x.denom().clone())
        .max()
        .unwrap_or_else(|| BigInt::from(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_is_canonical() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8], &[4, 4]]);
        let h = hnf_rows(&a);
        assert_eq!(h, IntMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]));
        let b = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 4], &[-2, 4]]);
        assert_eq!(hnf_rows(&b), h);
    }

    #[test]
    fn rational_lattice_membership() {
        let g = RationalMatrix::from_fn(2, 3, |i, j| match (i, j) {
            (0, 0) | (1, 1) => BigRational::from_integer(1.into()),
            (0, 2) => BigRational::new(1.into(), 2.into()),
            (1, 2) => BigRational::from_integer(1.into()),
            _ => BigRational::zero(),
        });
        let b = rational_lattice_basis(&g);
        assert_eq!(b.cols(), 2);
        let half = RationalMatrix::from_fn(2, 1, |i, _| {
            if i == 0 {
                BigRational::new(1.into(), 2.into())
            } else {
                BigRational::zero()
            }
        });
        assert!(in_lattice(&b, &half));
        let quarter = half.map(|x| x / BigRational::from_integer(2.into()));
        assert!(!in_lattice(&b, &quarter));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let u = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let ui = unimodular_inverse(&u).unwrap();
        assert_eq!(&u * &ui, IntMatrix::identity(2));
        let nu = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert!(unimodular_inverse(&nu).is_err());
    }
}
