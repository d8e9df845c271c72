//! Smith form over the local ring `Z/p^t`.
//!
//! Every element of `Z/p^t` is a unit times a power of `p`, so a pivot of
//! minimal valuation divides its whole row and column and no gcd steps are
//! needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(x: &BigInt, p: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Valuations of the Smith diagonal of `a` over `Z/p^t`, one per position
/// `0..min(rows, cols)`, ascending. A value of `t` means the diagonal entry
/// is zero modulo `p^t`.
pub fn smith_valuations(a: &IntMatrix, p: &BigInt, t: u32) -> Vec<u32> {
    let modulus = num_traits::pow(p.clone(), t as usize);
    let mut m = a.map(|x| x.mod_floor(&modulus));
    let (rows, cols) = (m.rows(), m.cols());
    let k = rows.min(cols);
    let mut out = Vec::with_capacity(k);
    for s in 0..k {
        // pivot of least valuation; ties by row then column
        let mut best: Option<(u32, usize, usize)> = None;
        for i in s..rows {
            for j in s..cols {
                if let Some(v) = valuation(m.get(i, j), p) {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            out.extend(std::iter::repeat(t).take(k - s));
            break;
        };
        m.swap_rows(s, pi);
        m.swap_cols(s, pj);
        let pv = num_traits::pow(p.clone(), v as usize);
        let unit = m.get(s, s) / &pv;
        let uinv = mod_inverse(&unit, &modulus).expect("unit part is invertible");
        // clear column below pivot
        for i in s + 1..rows {
            if m.get(i, s).is_zero() {
                continue;
            }
            let f = (m.get(i, s) / &pv * &uinv).mod_floor(&modulus);
            for j in s..cols {
                let x = (m.get(i, j) - &f * m.get(s, j)).mod_floor(&modulus);
                m.set(i, j, x);
            }
        }
        // clear row right of pivot
        for j in s + 1..cols {
            if m.get(s, j).is_zero() {
                continue;
            }
            let f = (m.get(s, j) / &pv * &uinv).mod_floor(&modulus);
            for i in s..rows {
                let x = (m.get(i, j) - &f * m.get(i, s)).mod_floor(&modulus);
                m.set(i, j, x);
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    out
}

/// Order exponent `e` with `|ker(A mod p^t)| = p^e`, for `A: (Z/p^t)^cols → (Z/p^t)^rows`.
pub fn kernel_exponent(a: &IntMatrix, p: &BigInt, t: u32) -> u64 {
    let vals = smith_valuations(a, p, t);
    let missing = a.cols().saturating_sub(vals.len()) as u64;
    vals.iter().map(|&v| v as u64).sum::<u64>() + missing * t as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&b(24), &b(2)), Some(3));
        assert_eq!(valuation(&b(-9), &b(3)), Some(2));
        assert_eq!(valuation(&b(0), &b(3)), None);
        assert_eq!(mod_inverse(&b(3), &b(8)), Some(b(3)));
        assert_eq!(mod_inverse(&b(2), &b(8)), None);
    }

    #[test]
    fn local_smith_simple() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        // over Z/2^5: factors 2 and 4 → valuations 1, 2
        assert_eq!(smith_valuations(&a, &b(2), 5), vec![1, 2]);
        // over Z/3^2: factors 2, 4 are units
        assert_eq!(smith_valuations(&a, &b(3), 2), vec![0, 0]);
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(smith_valuations(&z, &b(5), 3), vec![3, 3]);
    }

    #[test]
    fn kernel_orders() {
        // (−2) on Z/4: kernel {0, 2}
        let a = IntMatrix::from_i64_rows(&[&[-2]]);
        assert_eq!(kernel_exponent(&a, &b(2), 2), 1);
        // zero map Z/p^t^3 → ... kernel everything
        let z = IntMatrix::zeros(1, 3);
        assert_eq!(kernel_exponent(&z, &b(3), 4), 12);
    }
}
