//! Hilbert symbols over ℚ and ℚ(√−d).
//!
//! Over ℚ every place is handled by the classical formulas. Over ℚ(√−d) the
//! odd places use the tame symbol in the residue field; split primes (odd or
//! dyadic) go through a p-adic embedding of the field into ℚ_p; a single
//! non-split dyadic place is closed by the product formula.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

use super::BaseField;
use crate::arith::{factorize, is_prime, legendre, mod_inverse, sqrt_mod_p, valuation};
use crate::error::{Error, Result};
use crate::ring::{QuadElem, Ring};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeKind {
    /// A prime of ℚ.
    Rational,
    /// (p, ω − r) for a root r of ω's minimal polynomial mod p.
    Split(BigInt),
    Inert,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite { p: BigInt, kind: PrimeKind },
    Infinite,
}

impl Place {
    pub fn rational(p: i64) -> Self {
        Place::Finite { p: p.into(), kind: PrimeKind::Rational }
    }

    pub fn is_dyadic(&self) -> bool {
        matches!(self, Place::Finite { p, .. } if *p == BigInt::from(2))
    }

    /// Printable name; `d` is the field parameter (0 for ℚ). Ideals are written
    /// with w = √−d.
    pub fn label(&self, d: i64) -> String {
        let (p, kind) = match self {
            Place::Infinite => return "inf".into(),
            Place::Finite { p, kind } => (p, kind),
        };
        let two = BigInt::from(2);
        let shift = |s: &BigInt, base: &str| {
            if s.is_zero() {
                format!("({p}, {base})")
            } else {
                format!("({p}, {base}-{s})")
            }
        };
        match kind {
            PrimeKind::Rational => p.to_string(),
            PrimeKind::Inert => format!("({p})"),
            PrimeKind::Ramified if *p == two && d % 4 == 1 => format!("({p}, 1+w)"),
            PrimeKind::Ramified => format!("({p}, w)"),
            PrimeKind::Split(r) if d % 4 != 3 => shift(r, "w"),
            PrimeKind::Split(r) if *p != two => shift(&(BigInt::from(2) * r - BigInt::one()).mod_floor(p), "w"),
            PrimeKind::Split(r) => shift(r, "(1+w)/2"),
        }
    }
}

/// Trace and norm of ω: its minimal polynomial is x² − t x + n.
fn omega_poly(d: i64) -> (BigInt, BigInt) {
    if d % 4 == 3 {
        (BigInt::one(), BigInt::from((1 + d) / 4))
    } else {
        (BigInt::zero(), BigInt::from(d))
    }
}

fn discriminant(d: i64) -> BigInt {
    if d % 4 == 3 {
        BigInt::from(-d)
    } else {
        BigInt::from(-4 * d)
    }
}

fn kind_of(d: i64, p: &BigInt) -> PrimeKind {
    let disc = discriminant(d);
    if (&disc % p).is_zero() {
        return PrimeKind::Ramified;
    }
    let split = if *p == BigInt::from(2) {
        disc.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        legendre(&disc, p) == 1
    };
    if split {
        PrimeKind::Split(BigInt::zero())
    } else {
        PrimeKind::Inert
    }
}

fn omega_roots_mod_p(d: i64, p: &BigInt) -> Vec<BigInt> {
    let (t, n) = omega_poly(d);
    let f = |x: &BigInt| (x * x - &t * x + &n).mod_floor(p);
    if *p == BigInt::from(2) {
        return [BigInt::zero(), BigInt::one()].into_iter().filter(|x| f(x).is_zero()).collect();
    }
    let s = match sqrt_mod_p(&(&t * &t - BigInt::from(4) * &n), p) {
        Some(s) => s,
        None => return Vec::new(),
    };
    let inv2 = mod_inverse(&BigInt::from(2), p).unwrap();
    let mut r = vec![((&t + &s) * &inv2).mod_floor(p), ((&t - &s) * &inv2).mod_floor(p)];
    r.sort();
    r.dedup();
    r
}

/// Places of the field above the rational prime p.
pub fn places_above(field: &BaseField, p: &BigInt) -> Result<Vec<Place>> {
    if !is_prime(p) {
        return Err(Error::validation(format!("{p} is not prime")));
    }
    let d = field.d();
    if d == 0 {
        return Ok(vec![Place::Finite { p: p.clone(), kind: PrimeKind::Rational }]);
    }
    Ok(match kind_of(d, p) {
        PrimeKind::Split(_) => omega_roots_mod_p(d, p)
            .into_iter()
            .map(|r| Place::Finite { p: p.clone(), kind: PrimeKind::Split(r) })
            .collect(),
        k => vec![Place::Finite { p: p.clone(), kind: k }],
    })
}

/// Root of ω's minimal polynomial in ℤ_p, correct modulo p^k, lifting r.
fn lift_root(d: i64, p: &BigInt, r: &BigInt, k: u32) -> BigInt {
    let (t, n) = omega_poly(d);
    let m = num_traits::pow(p.clone(), k as usize);
    let mut x = r.clone();
    for _ in 0..(2 * k + 2) {
        let fx = (&x * &x - &t * &x + &n).mod_floor(&m);
        if fx.is_zero() {
            break;
        }
        let df = mod_inverse(&(BigInt::from(2) * &x - &t), &m).expect("simple root");
        x = (&x - fx * df).mod_floor(&m);
    }
    x
}

/// Valuation and unit part (mod p³) of a nonzero rational.
fn rational_local(x: &BigRational, p: &BigInt) -> (i64, BigInt) {
    let vn = valuation(x.numer(), p).unwrap();
    let vd = valuation(x.denom(), p).unwrap();
    let m = num_traits::pow(p.clone(), 3);
    let un = x.numer() / num_traits::pow(p.clone(), vn as usize);
    let ud = x.denom() / num_traits::pow(p.clone(), vd as usize);
    let u = (un * mod_inverse(&ud, &m).unwrap()).mod_floor(&m);
    (vn as i64 - vd as i64, u)
}

/// Local data of a nonzero x at the split prime (p, ω − r), via ℚ(√−d) → ℚ_p.
fn split_local(d: i64, p: &BigInt, r: &BigInt, x: &QuadElem) -> (i64, BigInt) {
    let omega = if d % 4 == 3 {
        QuadElem::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()))
    } else {
        QuadElem::ints(0, 1)
    };
    let y = &x.v / &omega.v;
    let xx = &x.u - &y * &omega.u;
    let den = xx.denom().lcm(y.denom());
    let nx = (&xx * BigRational::from_integer(den.clone())).to_integer();
    let ny = (&y * BigRational::from_integer(den.clone())).to_integer();
    let (t, n) = omega_poly(d);
    let nz = &nx * &nx + &t * &nx * &ny + &n * &ny * &ny;
    let k = valuation(&nz, p).expect("nonzero element") + 4;
    let rho = lift_root(d, p, r, k);
    let m = num_traits::pow(p.clone(), k as usize);
    let z = (&nx + &ny * &rho).mod_floor(&m);
    let alpha = valuation(&z, p).expect("precision covers the valuation");
    let unit = &z / num_traits::pow(p.clone(), alpha as usize);
    let e = valuation(&den, p).unwrap();
    let dp = &den / num_traits::pow(p.clone(), e as usize);
    let m3 = num_traits::pow(p.clone(), 3);
    let u = (unit * mod_inverse(&dp, &m3).unwrap()).mod_floor(&m3);
    (alpha as i64 - e as i64, u)
}

/// Hilbert symbol over ℚ_p from valuations and unit residues.
fn qp_symbol(p: &BigInt, (al, u): &(i64, BigInt), (be, v): &(i64, BigInt)) -> i8 {
    if *p == BigInt::from(2) {
        let u = u.mod_floor(&BigInt::from(8)).to_i64().unwrap();
        let v = v.mod_floor(&BigInt::from(8)).to_i64().unwrap();
        let eps = |x: i64| ((x - 1) / 2) & 1;
        let om = |x: i64| ((x * x - 1) / 8) & 1;
        let e = eps(u) * eps(v) + al.rem_euclid(2) * om(v) + be.rem_euclid(2) * om(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s = 1i8;
    if (al * be).rem_euclid(2) == 1 && p.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
        s = -s;
    }
    if be.rem_euclid(2) == 1 {
        s *= legendre(u, p);
    }
    if al.rem_euclid(2) == 1 {
        s *= legendre(v, p);
    }
    s
}

fn field_norm(field: &BaseField, x: &QuadElem) -> BigRational {
    match field {
        BaseField::Rationals => x.u.clone(),
        BaseField::Imaginary(o) => o.field().norm(x),
    }
}

fn field_pow(field: &BaseField, x: &QuadElem, e: i64) -> QuadElem {
    let base = if e < 0 { field.inv(x).expect("nonzero") } else { x.clone() };
    field.pow(&base, e.unsigned_abs())
}

fn check_args(field: &BaseField, a: &QuadElem, b: &QuadElem) -> Result<()> {
    if field.is_zero(a) || field.is_zero(b) {
        return Err(Error::validation("Hilbert symbol needs nonzero arguments"));
    }
    if matches!(field, BaseField::Rationals) && !(a.v.is_zero() && b.v.is_zero()) {
        return Err(Error::validation("arguments must be rational over Q"));
    }
    Ok(())
}

/// Odd primes dividing numerator or denominator of the norms of a and b.
fn odd_support(field: &BaseField, a: &QuadElem, b: &QuadElem) -> BTreeSet<BigInt> {
    let mut out = BTreeSet::new();
    for x in [a, b] {
        let n = field_norm(field, x);
        for m in [n.numer(), n.denom()] {
            for (p, _) in factorize(m) {
                if p != BigInt::from(2) {
                    out.insert(p);
                }
            }
        }
    }
    out
}

/// (a, b)_v ∈ {+1, −1}.
pub fn hilbert_symbol(field: &BaseField, a: &QuadElem, b: &QuadElem, place: &Place) -> Result<i8> {
    check_args(field, a, b)?;
    let d = field.d();
    let (p, kind) = match place {
        Place::Infinite if d == 0 => {
            return Ok(if a.u.is_negative() && b.u.is_negative() { -1 } else { 1 });
        }
        Place::Infinite => {
            return Err(Error::validation("an imaginary quadratic field has no real place"));
        }
        Place::Finite { p, kind } => (p, kind),
    };
    let valid = places_above(field, p)?;
    if !valid.contains(place) {
        return Err(Error::validation(format!("{} is not a place of the field", place.label(d))));
    }
    if d == 0 {
        return Ok(qp_symbol(p, &rational_local(&a.u, p), &rational_local(&b.u, p)));
    }
    let two = BigInt::from(2);
    match kind {
        PrimeKind::Split(r) => Ok(qp_symbol(p, &split_local(d, p, r, a), &split_local(d, p, r, b))),
        _ if *p == two => dyadic_by_product(field, a, b),
        PrimeKind::Inert => {
            let (na, ua) = rational_local(&field_norm(field, a), p);
            let (nb, ub) = rational_local(&field_norm(field, b), p);
            let (al, be) = (na / 2, nb / 2);
            let mut s = 1;
            if be.rem_euclid(2) == 1 {
                s *= legendre(&ua, p);
            }
            if al.rem_euclid(2) == 1 {
                s *= legendre(&ub, p);
            }
            Ok(s)
        }
        PrimeKind::Ramified => {
            let (al, _) = rational_local(&field_norm(field, a), p);
            let (be, _) = rational_local(&field_norm(field, b), p);
            let mut t = field.mul(&field_pow(field, a, be), &field_pow(field, b, -al));
            if (al * be).rem_euclid(2) == 1 {
                t = field.neg(&t);
            }
            let r = (t.u.numer() * mod_inverse(t.u.denom(), p).expect("unit at the prime")).mod_floor(p);
            Ok(legendre(&r, p))
        }
        PrimeKind::Rational => unreachable!("checked against places_above"),
    }
}

/// The unique dyadic place of a field where 2 does not split.
fn dyadic_by_product(field: &BaseField, a: &QuadElem, b: &QuadElem) -> Result<i8> {
    let mut s = 1i8;
    for p in odd_support(field, a, b) {
        for v in places_above(field, &p)? {
            s *= hilbert_symbol(field, a, b, &v)?;
        }
    }
    Ok(s)
}

/// Places where H(a, b; F) ramifies, sorted; always of even size.
pub fn ramification_set(field: &BaseField, a: &QuadElem, b: &QuadElem) -> Result<Vec<Place>> {
    check_args(field, a, b)?;
    let mut primes = odd_support(field, a, b);
    primes.insert(BigInt::from(2));
    let mut places = Vec::new();
    for p in &primes {
        places.extend(places_above(field, p)?);
    }
    if field.d() == 0 {
        places.push(Place::Infinite);
    }
    let mut out = Vec::new();
    for v in places {
        if hilbert_symbol(field, a, b, &v)? == -1 {
            out.push(v);
        }
    }
    out.sort();
    if out.len() % 2 == 1 {
        return Err(Error::computation(format!(
            "odd number of ramified places {:?}",
            out.iter().map(|v| v.label(field.d())).collect::<Vec<_>>()
        )));
    }
    Ok(out)
}
