//! Symmetric powers of 2×2 matrices over any coefficient ring, realification,
//! the ρ_{m,n} family and saturation of Γ-stable lattices.
//!
//! Basis and action: Sym^n has basis x^n, x^{n−1}y, …, y^n and
//! g = [[a,b],[c,d]] acts by x ↦ ax + cy, y ↦ bx + dy. Column i of Sym^n(g)
//! is the image of x^{n−i}y^i.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::hermite::{in_lattice, max_denominator};
use crate::linalg::{rational_lattice_basis, IntMatrix, Matrix, RationalMatrix};
use crate::ring::{det, mat_kron, Conjugate, QuadElem, QuadraticField, QuadraticIntegers, Ring};

pub const DEFAULT_MAX_ITER: usize = 64;
pub const DEFAULT_DENOM_BITS: u64 = 256;

/// Homogeneous polynomial of degree k: coefficient of x^{k−j}y^j at index j.
fn poly_mul<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

/// Sym^n(g) over the ring of `g`'s entries; fails when g is not invertible.
pub fn sym_pow<R: Ring>(r: &R, g: &Matrix<R::Elem>, n: usize) -> Result<Matrix<R::Elem>> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::validation(format!("sym_pow needs a 2x2 matrix, got {}x{}", g.rows(), g.cols())));
    }
    let dt = det(r, g)?;
    if !r.is_unit(&dt) {
        return Err(Error::validation(format!(
            "matrix is not invertible over the ring (det = {})",
            r.format(&dt)
        )));
    }
    Ok(sym_pow_unchecked(r, g, n))
}

/// Same as [`sym_pow`] without the invertibility check.
pub fn sym_pow_unchecked<R: Ring>(r: &R, g: &Matrix<R::Elem>, n: usize) -> Matrix<R::Elem> {
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let img_x = vec![a.clone(), c.clone()];
    let img_y = vec![b.clone(), d.clone()];
    // powers of the images of x and y
    let mut px = vec![vec![r.one()]];
    let mut py = vec![vec![r.one()]];
    for k in 1..=n {
        px.push(poly_mul(r, &px[k - 1], &img_x));
        py.push(poly_mul(r, &py[k - 1], &img_y));
    }
    let mut out = Matrix::from_fn(n + 1, n + 1, |_, _| r.zero());
    for i in 0..=n {
        let col = poly_mul(r, &px[n - i], &py[i]);
        for (j, v) in col.into_iter().enumerate() {
            out.set(j, i, v);
        }
    }
    out
}

/// Sym^n of an integer matrix.
pub fn sym_pow_int(g: &IntMatrix, n: usize) -> Result<IntMatrix> {
    sym_pow(&crate::ring::Integers, g, n)
}

/// Real matrix of A acting on F^n viewed as ℚ^{2n} with basis (1, w) per
/// coordinate, w = √−d: the entry u + v w becomes [[u, −d v], [v, u]].
pub fn realify(field: &QuadraticField, a: &Matrix<QuadElem>) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(2 * a.rows(), 2 * a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let blk = field.regular_matrix(a.get(i, j));
            for (bi, row) in blk.iter().enumerate() {
                for (bj, x) in row.iter().enumerate() {
                    out.set(2 * i + bi, 2 * j + bj, x.clone());
                }
            }
        }
    }
    out
}

/// Integral realification over 𝒪_F with basis (1, ω) per coordinate.
pub fn realify_integral(o: &QuadraticIntegers, a: &Matrix<QuadElem>) -> Result<IntMatrix> {
    let om = o.omega();
    let mut out = IntMatrix::zeros(2 * a.rows(), 2 * a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let z = a.get(i, j);
            let images = [z.clone(), o.mul(z, &om)];
            for (bj, img) in images.iter().enumerate() {
                let (x, y) = o
                    .coords(img)
                    .ok_or_else(|| Error::validation(format!("entry ({i},{j}) is not integral")))?;
                out.set(2 * i, 2 * j + bj, x);
                out.set(2 * i + 1, 2 * j + bj, y);
            }
        }
    }
    Ok(out)
}

fn conj_matrix<R: Conjugate>(r: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|x| r.conj(x))
}

/// Sym^m(g) ⊗ conj(Sym^n(g)) over the field.
pub fn rho_mn_complex(field: &QuadraticField, g: &Matrix<QuadElem>, m: usize, n: usize) -> Result<Matrix<QuadElem>> {
    let sm = sym_pow(field, g, m)?;
    let sn = sym_pow(field, g, n)?;
    Ok(mat_kron(field, &sm, &conj_matrix(field, &sn)))
}

/// Realification of ρ_{m,n}(g); size 2(m+1)(n+1).
pub fn rho_mn(field: &QuadraticField, g: &Matrix<QuadElem>, m: usize, n: usize) -> Result<RationalMatrix> {
    Ok(realify(field, &rho_mn_complex(field, g, m, n)?))
}

/// Integral version of ρ_{m,n} over 𝒪_F, in the (1, ω) coordinates.
pub fn rho_mn_integral(o: &QuadraticIntegers, g: &Matrix<QuadElem>, m: usize, n: usize) -> Result<IntMatrix> {
    let sm = sym_pow(o, g, m)?;
    let sn = sym_pow(o, g, n)?;
    realify_integral(o, &mat_kron(o, &sm, &conj_matrix(o, &sn)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationOptions {
    pub max_iter: usize,
    pub denom_bound: BigInt,
}

impl Default for SaturationOptions {
    fn default() -> Self {
        SaturationOptions {
            max_iter: DEFAULT_MAX_ITER,
            denom_bound: num_traits::pow(BigInt::from(2), DEFAULT_DENOM_BITS as usize),
        }
    }
}

/// Smallest lattice containing `start` (columns) and stable under every
/// generator: iterate M ← M + Σ g_i M in Hermite normal form.
pub fn saturate_stable_lattice(
    gens: &[RationalMatrix],
    start: &RationalMatrix,
    opts: &SaturationOptions,
) -> Result<RationalMatrix> {
    let n = start.rows();
    for (i, g) in gens.iter().enumerate() {
        if g.rows() != n || g.cols() != n {
            return Err(Error::validation(format!("generator {i} is not {n}x{n}")));
        }
    }
    if crate::linalg::rational::rank(start) != n {
        return Err(Error::validation("starting lattice does not have full rank"));
    }
    let mut m = rational_lattice_basis(start);
    for _ in 0..opts.max_iter {
        let mut blocks = vec![m.clone()];
        blocks.extend(gens.iter().map(|g| g * &m));
        let next = rational_lattice_basis(&RationalMatrix::hstack(&blocks, n)?);
        let den = max_denominator(&next);
        if den > opts.denom_bound {
            return Err(Error::NoStableLattice(format!(
                "denominators reached {} bits",
                den.bits()
            )));
        }
        if next == m {
            for (i, g) in gens.iter().enumerate() {
                if !in_lattice(&m, &(g * &m)) {
                    return Err(Error::computation(format!("closure is not stable under generator {i}")));
                }
            }
            return Ok(m);
        }
        m = next;
    }
    Err(Error::NoStableLattice(format!("no fixed point after {} iterations", opts.max_iter)))
}

/// Same over F = ℚ(√−d): the result is an 𝒪_F-lattice in F^n, returned as a
/// ℚ-basis of its realification (coordinates (1, w) per entry).
pub fn saturate_stable_lattice_quadratic(
    o: &QuadraticIntegers,
    gens: &[Matrix<QuadElem>],
    opts: &SaturationOptions,
) -> Result<RationalMatrix> {
    let f = o.field();
    let n = gens.first().map_or(0, |g| g.rows());
    let om = o.omega();
    let omega_mult = Matrix::from_fn(n, n, |i, j| if i == j { om.clone() } else { f.zero() });
    let mut real: Vec<RationalMatrix> = gens.iter().map(|g| realify(f, g)).collect();
    real.push(realify(f, &omega_mult));
    // 𝒪_F^n in realified coordinates
    let start = RationalMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i / 2 != j / 2 {
            return BigRational::zero();
        }
        match (i % 2, j % 2) {
            (0, 0) => BigRational::one(),
            (0, 1) => om.u.clone(),
            (1, 1) => om.v.clone(),
            _ => BigRational::zero(),
        }
    });
    saturate_stable_lattice(&real, &start, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{GaloisRing, Integers, Rationals};

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn unipotent_square() {
        let s = sym_pow_int(&im(&[&[1, 1], &[0, 1]]), 2).unwrap();
        assert_eq!(s, im(&[&[1, 1, 1], &[0, 1, 2], &[0, 0, 1]]));
        assert_eq!(sym_pow_int(&im(&[&[3, 1], &[2, 1]]), 0).unwrap(), im(&[&[1]]));
    }

    #[test]
    fn diagonal_torus() {
        let g = RationalMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => q(3, 1),
            (1, 1) => q(1, 3),
            _ => q(0, 1),
        });
        let s = sym_pow(&Rationals, &g, 2).unwrap();
        assert!(s.is_diagonal());
        assert_eq!((s.get(0, 0), s.get(1, 1), s.get(2, 2)), (&q(9, 1), &q(1, 1), &q(1, 9)));
    }

    #[test]
    fn non_invertible_rejected() {
        assert!(matches!(sym_pow_int(&im(&[&[2, 0], &[0, 1]]), 2), Err(Error::Validation(_))));
        let f5 = GaloisRing::prime_field(&5.into()).unwrap();
        let g = Matrix::from_fn(2, 2, |i, j| f5.from_i64(if i == j { 5 } else { 0 }));
        assert!(sym_pow(&f5, &g, 1).is_err());
    }

    #[test]
    fn realify_examples() {
        let gf = QuadraticField::gaussian();
        let i = Matrix::from_vec(1, 1, vec![QuadElem::ints(0, 1)]).unwrap();
        assert_eq!(realify(&gf, &i), RationalMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]));
        let z = Matrix::from_vec(1, 1, vec![QuadElem::ints(3, 4)]).unwrap();
        assert_eq!(crate::linalg::rational::determinant(&realify(&gf, &z)).unwrap(), q(25, 1));
    }

    #[test]
    fn rho_small_cases() {
        let gf = QuadraticField::gaussian();
        let g = Matrix::from_fn(2, 2, |i, j| QuadElem::ints((i * 2 + j) as i64 + 1, i as i64));
        assert_eq!(rho_mn(&gf, &g, 0, 0).unwrap(), RationalMatrix::identity(2));
        // real g, n = 0: two copies of Sym²(g) interleaved by the realification
        let r = Matrix::from_fn(2, 2, |i, j| QuadElem::ints([[2, 1], [1, 1]][i][j], 0));
        let rho = rho_mn(&gf, &r, 2, 0).unwrap();
        let s2 = sym_pow_int(&im(&[&[2, 1], &[1, 1]]), 2).unwrap().to_rational();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(rho.get(2 * i, 2 * j), s2.get(i, j));
                assert_eq!(rho.get(2 * i + 1, 2 * j + 1), s2.get(i, j));
                assert!(rho.get(2 * i, 2 * j + 1).is_zero());
            }
        }
        // diag(i, −i), m = n = 1: complex eigenvalues 1, −1, −1, 1
        let d = Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => QuadElem::ints(0, 1),
            (1, 1) => QuadElem::ints(0, -1),
            _ => QuadElem::ints(0, 0),
        });
        let c = rho_mn_complex(&gf, &d, 1, 1).unwrap();
        let diag: Vec<QuadElem> = (0..4).map(|k| c.get(k, k).clone()).collect();
        assert_eq!(diag, vec![QuadElem::ints(1, 0), QuadElem::ints(-1, 0), QuadElem::ints(-1, 0), QuadElem::ints(1, 0)]);
    }

    #[test]
    fn integral_realification_matches_rational() {
        let o = QuadraticIntegers::new(3).unwrap();
        let om = o.omega();
        let g = Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => QuadElem::ints(1, 0),
            (0, 1) => om.clone(),
            (1, 0) => QuadElem::ints(0, 0),
            _ => QuadElem::ints(1, 0),
        });
        let a = rho_mn_integral(&o, &g, 1, 1).unwrap();
        assert_eq!(a.rows(), 8);
        assert_eq!(crate::linalg::determinant(&a).unwrap(), BigInt::one());
    }

    #[test]
    fn saturation_examples() {
        let opts = SaturationOptions::default();
        let sl2 = [im(&[&[1, 1], &[0, 1]]), im(&[&[1, 0], &[1, 1]])];
        let gens: Vec<RationalMatrix> = sl2.iter().map(|g| sym_pow_int(g, 2).unwrap().to_rational()).collect();
        let m = saturate_stable_lattice(&gens, &RationalMatrix::identity(3), &opts).unwrap();
        assert_eq!(m, RationalMatrix::identity(3));

        let half = RationalMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => q(1, 2),
            (i, j) if i == j => q(1, 1),
            _ => q(0, 1),
        });
        let m = saturate_stable_lattice(&[half], &RationalMatrix::identity(2), &opts).unwrap();
        assert_eq!(m, RationalMatrix::from_fn(2, 2, |i, j| if i == j { if i == 0 { q(1, 2) } else { q(1, 1) } } else { q(0, 1) }));

        let expand = RationalMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => q(2, 1),
            (1, 1) => q(1, 2),
            _ => q(0, 1),
        });
        let r = saturate_stable_lattice(&[expand], &RationalMatrix::identity(2), &opts);
        assert!(matches!(r, Err(Error::NoStableLattice(_))));
    }

    #[test]
    fn quadratic_saturation_keeps_standard_lattice() {
        let o = QuadraticIntegers::new(1).unwrap();
        let g = Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => QuadElem::ints(0, 1),
            (i, j) if i == j => QuadElem::ints(1, 0),
            _ => QuadElem::ints(0, 0),
        });
        let m = saturate_stable_lattice_quadratic(&o, &[g], &SaturationOptions::default()).unwrap();
        assert_eq!(m, RationalMatrix::identity(4));
    }

    #[test]
    fn integer_ring_functoriality() {
        let g = im(&[&[2, 1], &[1, 1]]);
        let h = im(&[&[1, -1], &[0, 1]]);
        for n in 0..6 {
            let lhs = sym_pow(&Integers, &(&g * &h), n).unwrap();
            let rhs = &sym_pow(&Integers, &g, n).unwrap() * &sym_pow(&Integers, &h, n).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
