//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal of `S`, positive, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Structure of a finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/f_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    #[serde(with = "crate::io::bigint_vec")]
    pub torsion_factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion_factors: Vec::new(),
        }
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion_factors.iter().product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }
}

/// Row/column operations are mirrored into `u`/`v` only when tracking is on.
struct Reducer {
    s: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        if let Some(v) = self.v.as_mut() {
            v.swap_cols(a, b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        axpy_row(&mut self.s, dst, src, q);
        if let Some(u) = self.u.as_mut() {
            axpy_row(u, dst, src, q);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        axpy_col(&mut self.s, dst, src, q);
        if let Some(v) = self.v.as_mut() {
            axpy_col(v, dst, src, q);
        }
    }

    fn negate_row(&mut self, r: usize) {
        negate_row(&mut self.s, r);
        if let Some(u) = self.u.as_mut() {
            negate_row(u, r);
        }
    }
}

pub(crate) fn axpy_row(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let t = m.get(src, j) * q;
        if !t.is_zero() {
            *m.get_mut(dst, j) -= t;
        }
    }
}

pub(crate) fn axpy_col(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let t = m.get(i, src) * q;
        if !t.is_zero() {
            *m.get_mut(i, dst) -= t;
        }
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let x = m.get_mut(r, j);
        *x = -std::mem::take(x);
    }
}

/// Smallest nonzero |entry| in the trailing block starting at (t, t).
/// Ties go to the smallest row index, then the smallest column index.
fn min_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = s.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if s.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn reduce(mut r: Reducer) -> (Reducer, Vec<BigInt>) {
    let (m, n) = (r.s.rows(), r.s.cols());
    let mut factors = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_pivot(&r.s, t) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let p = r.s.get(t, t).clone();
            for i in t + 1..m {
                if !r.s.get(i, t).is_zero() {
                    let q = r.s.get(i, t) / &p;
                    r.row_axpy(i, t, &q);
                }
            }
            for j in t + 1..n {
                if !r.s.get(t, j).is_zero() {
                    let q = r.s.get(t, j) / &p;
                    r.col_axpy(j, t, &q);
                }
            }
            let dirty = (t + 1..m).any(|i| !r.s.get(i, t).is_zero())
                || (t + 1..n).any(|j| !r.s.get(t, j).is_zero());
            if dirty {
                let (pi, pj) = min_pivot(&r.s, t).expect("nonzero entries remain");
                r.swap_rows(t, pi);
                r.swap_cols(t, pj);
                continue;
            }
            // pivot row and column are clear; enforce divisibility of the rest
            let bad = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !r.s.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    r.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if r.s.get(t, t).is_negative() {
            r.negate_row(t);
        }
        factors.push(r.s.get(t, t).clone());
        t += 1;
    }
    (r, factors)
}

/// Smith normal form with transforms. Deterministic for a fixed input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let r = Reducer {
        s: a.clone(),
        u: Some(IntMatrix::identity(a.rows())),
        v: Some(IntMatrix::identity(a.cols())),
    };
    let (r, invariant_factors) = reduce(r);
    SmithForm {
        u: r.u.expect("tracked"),
        s: r.s,
        v: r.v.expect("tracked"),
        invariant_factors,
    }
}

/// Invariant factors only; skips transform bookkeeping.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let r = Reducer {
        s: a.clone(),
        u: None,
        v: None,
    };
    reduce(r).1
}

pub fn rank(a: &IntMatrix) -> usize {
    invariant_factors(a).len()
}

/// Structure of `Z^ambient_rank / im(A)`.
pub fn cokernel_invariants(a: &IntMatrix, ambient_rank: usize) -> Result<AbelianGroup> {
    if a.rows() != ambient_rank {
        return Err(Error::validation(format!(
            "matrix has {} rows but maps into Z^{}",
            a.rows(),
            ambient_rank
        )));
    }
    Ok(cokernel_from_factors(&invariant_factors(a), ambient_rank))
}

pub(crate) fn cokernel_from_factors(factors: &[BigInt], ambient_rank: usize) -> AbelianGroup {
    AbelianGroup {
        free_rank: ambient_rank - factors.len(),
        torsion_factors: factors.iter().filter(|f| !f.is_one()).cloned().collect(),
    }
}

/// Columns form a Z-basis of `ker A`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    snf.v.column_range(snf.rank(), a.cols())
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::validation("determinant of a non-square matrix"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                m.set(i, j, v);
            }
        }
        prev = m.get(k, k).clone();
    }
    Ok(sign * m.get(n - 1, n - 1).clone())
}

/// `d_k` = gcd of all k×k minors, by direct enumeration. Exponential; meant
/// for small matrices and as an independent check of [`smith_normal_form`].
pub fn determinantal_divisors(a: &IntMatrix) -> Vec<BigInt> {
    let (m, n) = (a.rows(), a.cols());
    let mut out = Vec::new();
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rows in combinations(m, k) {
            for cols in combinations(n, k) {
                let d = determinant(&a.submatrix(&rows, &cols)).expect("square minor");
                g = g.gcd(&d);
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(g);
    }
    out
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_transforms(a: &IntMatrix, f: &SmithForm) {
        assert_eq!(&(&f.u * a) * &f.v, f.s);
        assert!(determinant(&f.u).unwrap().abs().is_one());
        assert!(determinant(&f.v).unwrap().abs().is_one());
        assert!(f.s.is_diagonal());
        for w in f.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn two_by_two_example() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let f = smith_normal_form(&a);
        assert_eq!(f.invariant_factors, big(&[2, 4]));
        check_transforms(&a, &f);
    }

    #[test]
    fn identity_and_zero() {
        let i3 = IntMatrix::identity(3);
        let f = smith_normal_form(&i3);
        assert_eq!(f.invariant_factors, big(&[1, 1, 1]));
        assert_eq!(f.u, i3);
        assert_eq!(f.v, i3);
        let z = IntMatrix::zeros(2, 3);
        let f = smith_normal_form(&z);
        assert!(f.invariant_factors.is_empty());
        assert_eq!(f.rank(), 0);
        check_transforms(&z, &f);
    }

    #[test]
    fn empty_shapes() {
        let a = IntMatrix::zeros(0, 3);
        let f = smith_normal_form(&a);
        assert!(f.invariant_factors.is_empty());
        assert_eq!(kernel_basis(&a).cols(), 3);
        let b = IntMatrix::zeros(4, 0);
        assert_eq!(cokernel_invariants(&b, 4).unwrap().free_rank, 4);
    }

    #[test]
    fn cokernels() {
        let a = IntMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 0]]);
        let c = cokernel_invariants(&a, 3).unwrap();
        assert_eq!(c.free_rank, 1);
        assert_eq!(c.torsion_factors, big(&[2]));

        let z = IntMatrix::zeros(2, 2);
        let c = cokernel_invariants(&z, 2).unwrap();
        assert_eq!(c, AbelianGroup { free_rank: 2, torsion_factors: vec![] });

        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 0]]);
        assert!(cokernel_invariants(&a, 2).unwrap().is_trivial());

        assert!(matches!(cokernel_invariants(&a, 3), Err(Error::Validation(_))));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) is not in Smith form; the answer is (1, 6)
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let f = smith_normal_form(&a);
        assert_eq!(f.invariant_factors, big(&[1, 6]));
        check_transforms(&a, &f);
    }

    #[test]
    fn kernel_is_saturated() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero_matrix());
        // the kernel lattice is saturated: its own cokernel in Z^3 is free
        let c = cokernel_invariants(&k, 3).unwrap();
        assert!(c.torsion_factors.is_empty());
    }

    #[test]
    fn bareiss_matches_small_cases() {
        let a = IntMatrix::from_i64_rows(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]);
        assert_eq!(determinant(&a).unwrap(), BigInt::from(-3));
        let b = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(determinant(&b).unwrap(), BigInt::one());
    }

    #[test]
    fn minors_oracle_on_fixed_case() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        assert_eq!(determinantal_divisors(&a), big(&[2, 8]));
    }
}
