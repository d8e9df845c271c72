//! Elementary number theory on arbitrary-precision integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::nt_funcs;
use num_traits::{One, Signed, Zero};

pub use crate::linalg::padic::{mod_inverse, valuation};

fn magnitude(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus || n.is_one() {
        return false;
    }
    nt_funcs::is_prime::<BigUint>(&magnitude(n), None).probably()
}

/// Prime factorization of |n| as ascending (prime, exponent) pairs; empty for |n| ≤ 1.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let m = magnitude(n);
    if m <= BigUint::one() {
        return Vec::new();
    }
    nt_funcs::factorize::<BigUint>(m)
        .into_iter()
        .map(|(p, e)| (BigInt::from(p), e as u32))
        .collect()
}

/// (p, f) with q = p^f.
pub fn prime_power(q: &BigInt) -> Option<(BigInt, u32)> {
    let f = factorize(q);
    if q.is_positive() && f.len() == 1 {
        Some(f[0].clone())
    } else {
        None
    }
}

pub fn is_squarefree(n: &BigInt) -> bool {
    !n.is_zero() && factorize(n).iter().all(|(_, e)| *e == 1)
}

/// Legendre symbol (a|p) for an odd prime p: 0, 1 or −1.
pub fn legendre(a: &BigInt, p: &BigInt) -> i8 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) / 2u32;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo an odd prime p (Tonelli–Shanks), if one exists.
pub fn sqrt_mod_p(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let two = BigInt::from(2);
    let mut q = p - &one;
    let mut s = 0u32;
    while q.is_even() {
        q /= &two;
        s += 1;
    }
    let mut z = two.clone();
    while legendre(&z, p) != -1 {
        z += &one;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) / &two), p);
    while !t.is_one() {
        let mut i = 0;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt).mod_floor(p);
            i += 1;
        }
        let b = c.modpow(&num_traits::pow(two.clone(), (m - i - 1) as usize), p);
        m = i;
        c = (&b * &b).mod_floor(p);
        t = (&t * &c).mod_floor(p);
        r = (&r * &b).mod_floor(p);
    }
    Some(r)
}

/// Lift a simple root r of x² ≡ a (mod p) to modulus p^k (p odd, p ∤ a).
pub fn hensel_sqrt(a: &BigInt, r: &BigInt, p: &BigInt, k: u32) -> BigInt {
    let mut root = r.clone();
    let mut m = p.clone();
    for _ in 1..k {
        m *= p;
        let two_r_inv = mod_inverse(&(BigInt::from(2) * &root), &m).expect("simple root");
        root = (&root - (&root * &root - a) * two_r_inv).mod_floor(&m);
    }
    root
}

/// Square root of `a` in ℤ/2^k for a ≡ 1 mod 8, the branch ≡ 1 mod 4.
pub fn sqrt_mod_2k(a: &BigInt, k: u32) -> Option<BigInt> {
    if a.mod_floor(&BigInt::from(8)) != BigInt::one() {
        return None;
    }
    // x_{n+1} = x_n + (a − x_n²)/2 keeps the precision growing by one bit per step
    let m = num_traits::pow(BigInt::from(2), k as usize + 2);
    let mut x = BigInt::one();
    for _ in 0..k + 2 {
        let err = (a - &x * &x).mod_floor(&m);
        if err.is_zero() {
            break;
        }
        x = (&x + err / 2u32).mod_floor(&m);
    }
    let m = num_traits::pow(BigInt::from(2), k as usize);
    let x = x.mod_floor(&m);
    if (&x * &x - a).mod_floor(&m).is_zero() {
        Some(x)
    } else {
        None
    }
}

/// Squarefree part (with sign) and the square factor: n = s · m².
pub fn squarefree_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = BigInt::one();
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            s *= &p;
        }
        m *= num_traits::pow(p, (e / 2) as usize);
    }
    (s, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(&b(7)));
        assert!(!is_prime(&b(1)));
        assert!(!is_prime(&b(-7)));
        assert_eq!(prime_power(&b(49)), Some((b(7), 2)));
        assert_eq!(prime_power(&b(12)), None);
        assert!(is_squarefree(&b(-30)));
        assert!(!is_squarefree(&b(12)));
        assert_eq!(factorize(&b(360)), vec![(b(2), 3), (b(3), 2), (b(5), 1)]);
    }

    #[test]
    fn legendre_table_mod_7() {
        let residues: Vec<i8> = (0..7).map(|a| legendre(&b(a), &b(7))).collect();
        assert_eq!(residues, vec![0, 1, 1, -1, 1, -1, -1]);
    }

    #[test]
    fn square_roots() {
        for p in [3i64, 5, 7, 13, 17, 41] {
            for a in 1..p {
                match sqrt_mod_p(&b(a), &b(p)) {
                    Some(r) => assert_eq!((&r * &r).mod_floor(&b(p)), b(a)),
                    None => assert_eq!(legendre(&b(a), &b(p)), -1),
                }
            }
        }
        let r = sqrt_mod_p(&b(2), &b(7)).unwrap();
        let lifted = hensel_sqrt(&b(2), &r, &b(7), 4);
        assert!((&lifted * &lifted - b(2)).mod_floor(&b(2401)).is_zero());
        let s = sqrt_mod_2k(&b(-7), 20).unwrap();
        assert!((&s * &s + b(7)).mod_floor(&b(1 << 20)).is_zero());
        assert!(sqrt_mod_2k(&b(3), 10).is_none());
        assert_eq!(squarefree_decomposition(&b(-72)), (b(-2), b(6)));
    }
}
