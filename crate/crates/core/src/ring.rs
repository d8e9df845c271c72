//! Coefficient rings: ℤ, ℚ, Galois rings GR(p^t, f) (covering 𝔽_p, 𝔽_q and
//! ℤ/p^t), imaginary quadratic fields ℚ(√−d) and their rings of integers.
//! Matrices over any of them are plain `Matrix<R::Elem>` with helpers below.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{parse_bigint, parse_rational, rational_to_string};
use crate::linalg::padic::mod_inverse;
use crate::linalg::Matrix;

pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse when `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inv(a).is_some()
    }
}

/// Rings with an involution (complex conjugation on ℚ(√−d)).
pub trait Conjugate: Ring {
    fn conj(&self, a: &Self::Elem) -> Self::Elem;
}

// ---------------------------------------------------------------- ℤ and ℚ

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn parse(&self, s: &str) -> Result<BigInt> {
        parse_bigint(s)
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn format(&self, a: &BigRational) -> String {
        rational_to_string(a)
    }
}

// ---------------------------------------------------------- Galois rings

/// GR(p^t, f) = (ℤ/p^t)[x]/(m(x)) with m monic of degree f, irreducible mod p.
/// Elements are coefficient vectors of length f, ascending powers of x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRing {
    p: BigInt,
    t: u32,
    modulus: Vec<BigInt>,
    pt: BigInt,
}

impl GaloisRing {
    /// `modulus` lists ascending coefficients and must be monic.
    pub fn new(p: &BigInt, t: u32, modulus: Vec<BigInt>) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::validation(format!("{p} is not prime")));
        }
        if t == 0 {
            return Err(Error::validation("precision exponent t must be at least 1"));
        }
        if modulus.len() < 2 || !modulus.last().unwrap().is_one() {
            return Err(Error::validation("modulus must be monic of degree at least 1"));
        }
        if !poly_irreducible_mod_p(&modulus, p) {
            return Err(Error::validation(format!(
                "modulus polynomial is not irreducible mod {p}"
            )));
        }
        let pt = num_traits::pow(p.clone(), t as usize);
        Ok(GaloisRing { p: p.clone(), t, modulus, pt })
    }

    /// ℤ/p^t.
    pub fn zmod(p: &BigInt, t: u32) -> Result<Self> {
        GaloisRing::new(p, t, vec![BigInt::zero(), BigInt::one()])
    }

    /// 𝔽_p.
    pub fn prime_field(p: &BigInt) -> Result<Self> {
        GaloisRing::zmod(p, 1)
    }

    /// GR(p^t, f) with the lexicographically first irreducible monic modulus.
    pub fn unramified(p: &BigInt, f: u32, t: u32) -> Result<Self> {
        if f == 0 {
            return Err(Error::validation("residue degree f must be at least 1"));
        }
        if f == 1 {
            return GaloisRing::zmod(p, t);
        }
        if !crate::arith::is_prime(p) {
            return Err(Error::validation(format!("{p} is not prime")));
        }
        let m = first_irreducible(p, f as usize)
            .ok_or_else(|| Error::computation("no irreducible polynomial found"))?;
        GaloisRing::new(p, t, m)
    }

    /// 𝔽_q for q = p^f.
    pub fn finite_field(q: &BigInt) -> Result<Self> {
        let (p, f) = crate::arith::prime_power(q)
            .ok_or_else(|| Error::validation(format!("{q} is not a prime power")))?;
        GaloisRing::unramified(&p, f, 1)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Size of the residue field, p^f.
    pub fn residue_size(&self) -> BigInt {
        num_traits::pow(self.p.clone(), self.degree())
    }

    pub fn characteristic(&self) -> &BigInt {
        &self.pt
    }

    /// Same modulus at a different precision.
    pub fn with_precision(&self, t: u32) -> Self {
        GaloisRing {
            p: self.p.clone(),
            t,
            modulus: self.modulus.clone(),
            pt: num_traits::pow(self.p.clone(), t as usize),
        }
    }

    pub fn constant(&self, c: &BigInt) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = c.mod_floor(&self.pt);
        v
    }

    /// The class of x.
    pub fn generator(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.degree()];
        if self.degree() == 1 {
            v[0] = (-&self.modulus[0]).mod_floor(&self.pt);
        } else {
            v[1] = BigInt::one();
        }
        v
    }

    /// Element valuation: largest v ≤ t with a ∈ p^v·GR.
    pub fn valuation(&self, a: &[BigInt]) -> u32 {
        a.iter()
            .filter(|c| !c.is_zero())
            .map(|c| crate::linalg::padic::valuation(c, &self.p).unwrap_or(self.t))
            .min()
            .unwrap_or(self.t)
            .min(self.t)
    }

    /// Reduction to the residue field 𝔽_q (precision 1).
    pub fn residue(&self, a: &[BigInt]) -> Vec<BigInt> {
        a.iter().map(|c| c.mod_floor(&self.p)).collect()
    }

    /// All elements, for small rings only.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let n = self.pt.to_usize().expect("small ring");
        let f = self.degree();
        let mut out = vec![vec![]];
        for _ in 0..f {
            let mut next = Vec::with_capacity(out.len() * n);
            for v in &out {
                for c in 0..n {
                    let mut w: Vec<BigInt> = v.clone();
                    w.push(BigInt::from(c));
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    fn reduce(&self, mut a: Vec<BigInt>) -> Vec<BigInt> {
        let f = self.degree();
        while a.len() > f {
            let top = a.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = a.len() - f;
            for (i, m) in self.modulus[..f].iter().enumerate() {
                a[k + i] -= &top * m;
            }
        }
        a.resize(f, BigInt::zero());
        a.iter().map(|c| c.mod_floor(&self.pt)).collect()
    }

    /// Inverse over the residue field 𝔽_q via the polynomial extended gcd.
    fn residue_inverse(&self, a: &[BigInt]) -> Option<Vec<BigInt>> {
        let p = &self.p;
        let a: Vec<BigInt> = a.iter().map(|c| c.mod_floor(p)).collect();
        let m: Vec<BigInt> = self.modulus.iter().map(|c| c.mod_floor(p)).collect();
        let (g, s) = poly_ext_gcd_mod_p(&a, &m, p);
        if g.len() != 1 {
            return None;
        }
        let ginv = mod_inverse(&g[0], p)?;
        let s: Vec<BigInt> = s.iter().map(|c| (c * &ginv).mod_floor(p)).collect();
        Some(self.reduce(s))
    }
}

impl Ring for GaloisRing {
    type Elem = Vec<BigInt>;
    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree()]
    }
    fn one(&self) -> Vec<BigInt> {
        self.constant(&BigInt::one())
    }
    fn from_int(&self, n: &BigInt) -> Vec<BigInt> {
        self.constant(n)
    }
    fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x + y).mod_floor(&self.pt)).collect()
    }
    fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        let f = self.degree();
        if f == 1 {
            return vec![(&a[0] * &b[0]).mod_floor(&self.pt)];
        }
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce(prod)
    }
    fn neg(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().map(|x| (-x).mod_floor(&self.pt)).collect()
    }
    fn is_zero(&self, a: &Vec<BigInt>) -> bool {
        a.iter().all(|x| x.is_zero())
    }
    fn inv(&self, a: &Vec<BigInt>) -> Option<Vec<BigInt>> {
        let mut x = self.residue_inverse(a)?;
        // Newton: x ← x(2 − ax) doubles the p-adic precision
        let two = self.from_i64(2);
        let mut prec = 1;
        while prec < self.t {
            let ax = self.mul(a, &x);
            x = self.mul(&x, &self.sub(&two, &ax));
            prec *= 2;
        }
        Some(x)
    }
    fn parse(&self, s: &str) -> Result<Vec<BigInt>> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() > self.degree() {
            return Err(Error::validation(format!(
                "element {s:?} has more than {} coefficients",
                self.degree()
            )));
        }
        let mut v = Vec::with_capacity(self.degree());
        for part in parts {
            v.push(parse_bigint(part)?);
        }
        Ok(self.reduce(v))
    }
    fn format(&self, a: &Vec<BigInt>) -> String {
        let mut end = a.len();
        while end > 1 && a[end - 1].is_zero() {
            end -= 1;
        }
        a[..end].iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn poly_trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    if a.is_empty() {
        a.push(BigInt::zero());
    }
    a
}

fn poly_mul_mod_p(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out.iter().map(|c| c.mod_floor(p)).collect())
}

fn poly_sub_mod_p(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    poly_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(p))
            .collect(),
    )
}

fn poly_divrem_mod_p(a: &[BigInt], b: &[BigInt], p: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let b = poly_trim(b.to_vec());
    let lead_inv = mod_inverse(b.last().unwrap(), p).expect("nonzero leading coefficient");
    let mut r = poly_trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![BigInt::zero()], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let c = (r.last().unwrap() * &lead_inv).mod_floor(p);
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = (&r[shift + i] - &c * bc).mod_floor(p);
        }
        q[shift] = c;
        r = poly_trim(r);
        if shift == 0 {
            break;
        }
    }
    (poly_trim(q), r)
}

/// (g, s) with g = gcd(a, m) and s·a ≡ g mod m, over 𝔽_p.
fn poly_ext_gcd_mod_p(a: &[BigInt], m: &[BigInt], p: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let (mut r0, mut r1) = (poly_trim(m.to_vec()), poly_trim(a.to_vec()));
    let (mut s0, mut s1) = (vec![BigInt::zero()], vec![BigInt::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem_mod_p(&r0, &r1, p);
        let s = poly_sub_mod_p(&s0, &poly_mul_mod_p(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

fn poly_powmod_mod_p(base: &[BigInt], mut e: BigInt, m: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    let mut b = poly_divrem_mod_p(base, m, p).1;
    let two = BigInt::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            acc = poly_divrem_mod_p(&poly_mul_mod_p(&acc, &b, p), m, p).1;
        }
        b = poly_divrem_mod_p(&poly_mul_mod_p(&b, &b, p), m, p).1;
        e /= &two;
    }
    acc
}

/// Rabin-style check: no common factor with x^{p^i} − x for i ≤ deg/2.
pub fn poly_irreducible_mod_p(m: &[BigInt], p: &BigInt) -> bool {
    let m = poly_trim(m.iter().map(|c| c.mod_floor(p)).collect());
    let n = m.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![BigInt::zero(), BigInt::one()];
    let mut xp = x.clone();
    for _ in 1..=n / 2 {
        xp = poly_powmod_mod_p(&xp, p.clone(), &m, p);
        let diff = poly_sub_mod_p(&xp, &x, p);
        let (g, _) = poly_ext_gcd_mod_p(&diff, &m, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn first_irreducible(p: &BigInt, f: usize) -> Option<Vec<BigInt>> {
    let pu = p.to_u64()?;
    let total = pu.checked_pow(f as u32)?;
    for code in 0..total {
        let mut m = Vec::with_capacity(f + 1);
        let mut c = code;
        for _ in 0..f {
            m.push(BigInt::from(c % pu));
            c /= pu;
        }
        m.push(BigInt::one());
        if poly_irreducible_mod_p(&m, p) {
            return Some(m);
        }
    }
    None
}

// ------------------------------------------------ imaginary quadratic fields

/// u + v·w with w = √−d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub u: BigRational,
    pub v: BigRational,
}

impl QuadElem {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        QuadElem { u, v }
    }

    pub fn rational(u: BigRational) -> Self {
        QuadElem { u, v: BigRational::zero() }
    }

    pub fn ints(u: i64, v: i64) -> Self {
        QuadElem {
            u: BigRational::from_integer(u.into()),
            v: BigRational::from_integer(v.into()),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }
}

/// ℚ(√−d) for squarefree d ≥ 1; d = 1 gives the Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticField {
    d: BigInt,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d < 1 {
            return Err(Error::validation(format!("d must be a positive squarefree integer, got {d}")));
        }
        if !crate::arith::is_squarefree(&BigInt::from(d)) {
            return Err(Error::validation(format!("d = {d} is not squarefree")));
        }
        Ok(QuadraticField { d: BigInt::from(d) })
    }

    pub fn gaussian() -> Self {
        QuadraticField { d: BigInt::one() }
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// N(u + v w) = u² + d v².
    pub fn norm(&self, a: &QuadElem) -> BigRational {
        &a.u * &a.u + BigRational::from_integer(self.d.clone()) * &a.v * &a.v
    }

    pub fn trace(&self, a: &QuadElem) -> BigRational {
        &a.u + &a.u
    }

    /// Is the element an algebraic integer of 𝒪_F?
    pub fn is_integral(&self, a: &QuadElem) -> bool {
        self.trace(a).is_integer() && self.norm(a).is_integer()
    }

    pub fn is_square(&self, a: &QuadElem) -> bool {
        self.sqrt(a).is_some()
    }

    /// A square root inside the field, if one exists.
    pub fn sqrt(&self, a: &QuadElem) -> Option<QuadElem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        // (x + y w)² = x² − d y² + 2xy w
        let d = BigRational::from_integer(self.d.clone());
        if a.v.is_zero() {
            if let Some(x) = rational_sqrt(&a.u) {
                return Some(QuadElem::rational(x));
            }
            // x = 0: −d y² = u
            let y2 = -&a.u / &d;
            return rational_sqrt(&y2).map(|y| QuadElem::new(BigRational::zero(), y));
        }
        // x² satisfies x⁴ − u x² − d v²/4 = 0, so x² = (u + √(u² + d v²))/2
        let n = self.norm(a);
        let r = rational_sqrt(&n)?;
        for cand in [(&a.u + &r) / BigRational::from_integer(2.into()), (&a.u - &r) / BigRational::from_integer(2.into())] {
            if let Some(x) = rational_sqrt(&cand) {
                if x.is_zero() {
                    continue;
                }
                let y = &a.v / (BigRational::from_integer(2.into()) * &x);
                let s = QuadElem::new(x, y);
                if &self.mul(&s, &s) == a {
                    return Some(s);
                }
            }
        }
        let _ = d;
        None
    }

    /// Multiplication-by-a matrix on the ℚ-basis (1, w).
    pub fn regular_matrix(&self, a: &QuadElem) -> [[BigRational; 2]; 2] {
        let d = BigRational::from_integer(self.d.clone());
        [[a.u.clone(), -(&d * &a.v)], [a.v.clone(), a.u.clone()]]
    }
}

pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Ring for QuadraticField {
    type Elem = QuadElem;
    fn zero(&self) -> QuadElem {
        QuadElem::ints(0, 0)
    }
    fn one(&self) -> QuadElem {
        QuadElem::ints(1, 0)
    }
    fn from_int(&self, n: &BigInt) -> QuadElem {
        QuadElem::rational(BigRational::from_integer(n.clone()))
    }
    fn add(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        QuadElem::new(&a.u + &b.u, &a.v + &b.v)
    }
    fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        let d = BigRational::from_integer(self.d.clone());
        QuadElem::new(&a.u * &b.u - d * &a.v * &b.v, &a.u * &b.v + &a.v * &b.u)
    }
    fn neg(&self, a: &QuadElem) -> QuadElem {
        QuadElem::new(-&a.u, -&a.v)
    }
    fn is_zero(&self, a: &QuadElem) -> bool {
        a.u.is_zero() && a.v.is_zero()
    }
    fn inv(&self, a: &QuadElem) -> Option<QuadElem> {
        let n = self.norm(a);
        if n.is_zero() {
            return None;
        }
        Some(QuadElem::new(&a.u / &n, -&a.v / &n))
    }
    fn parse(&self, s: &str) -> Result<QuadElem> {
        parse_quad(s)
    }
    fn format(&self, a: &QuadElem) -> String {
        format_quad(a)
    }
}

impl Conjugate for QuadraticField {
    fn conj(&self, a: &QuadElem) -> QuadElem {
        QuadElem::new(a.u.clone(), -&a.v)
    }
}

/// Parse `"u+v*w"`, `"-3/2-w"`, `"2*w"`, `"5"`.
pub fn parse_quad(s: &str) -> Result<QuadElem> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::validation("empty field element"));
    }
    let bytes = t.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' && bytes[i - 1] != b'*' {
            terms.push(&t[start..i]);
            start = i;
        }
    }
    terms.push(&t[start..]);
    let mut u = BigRational::zero();
    let mut v = BigRational::zero();
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        let (coef, is_w) = if body == "w" {
            (BigRational::one(), true)
        } else if let Some(c) = body.strip_suffix("*w") {
            (parse_rational(c)?, true)
        } else if let Some(c) = body.strip_prefix("w*") {
            (parse_rational(c)?, true)
        } else {
            if body.contains('w') {
                return Err(Error::validation(format!("cannot parse field element {s:?}")));
            }
            (parse_rational(body)?, false)
        };
        let coef = if neg { -coef } else { coef };
        if is_w {
            v += coef;
        } else {
            u += coef;
        }
    }
    Ok(QuadElem::new(u, v))
}

pub fn format_quad(a: &QuadElem) -> String {
    if a.v.is_zero() {
        return rational_to_string(&a.u);
    }
    let vs = if a.v.abs().is_one() {
        "w".to_string()
    } else {
        format!("{}*w", rational_to_string(&a.v.abs()))
    };
    let sign = if a.v.is_negative() { "-" } else { "+" };
    if a.u.is_zero() {
        if a.v.is_negative() {
            format!("-{vs}")
        } else {
            vs
        }
    } else {
        format!("{}{sign}{vs}", rational_to_string(&a.u))
    }
}

/// Class-number-one rings of integers 𝒪_F, F = ℚ(√−d), d ∈ {1, 2, 3, 7, 11}.
/// Elements are stored as field elements that are checked to be integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticIntegers {
    field: QuadraticField,
}

pub const CLASS_NUMBER_ONE: [i64; 5] = [1, 2, 3, 7, 11];

impl QuadraticIntegers {
    pub fn new(d: i64) -> Result<Self> {
        if !CLASS_NUMBER_ONE.contains(&d) {
            return Err(Error::validation(format!(
                "rings of integers are supported for d in {CLASS_NUMBER_ONE:?}, got {d}"
            )));
        }
        Ok(QuadraticIntegers { field: QuadraticField::new(d)? })
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    /// Integral basis (1, ω): ω = √−d for d ≡ 1, 2 mod 4, else (1 + √−d)/2.
    pub fn omega(&self) -> QuadElem {
        let d = self.field.d().to_i64().unwrap();
        if d % 4 == 3 {
            QuadElem::new(
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 2.into()),
            )
        } else {
            QuadElem::ints(0, 1)
        }
    }

    /// Coordinates (x, y) with a = x + y ω.
    pub fn coords(&self, a: &QuadElem) -> Option<(BigInt, BigInt)> {
        let om = self.omega();
        let y = &a.v / &om.v;
        let x = &a.u - &y * &om.u;
        if x.is_integer() && y.is_integer() {
            Some((x.to_integer(), y.to_integer()))
        } else {
            None
        }
    }

    pub fn from_coords(&self, x: &BigInt, y: &BigInt) -> QuadElem {
        let om = self.omega();
        let y = BigRational::from_integer(y.clone());
        QuadElem::new(BigRational::from_integer(x.clone()) + &y * &om.u, &y * &om.v)
    }
}

impl Ring for QuadraticIntegers {
    type Elem = QuadElem;
    fn zero(&self) -> QuadElem {
        self.field.zero()
    }
    fn one(&self) -> QuadElem {
        self.field.one()
    }
    fn from_int(&self, n: &BigInt) -> QuadElem {
        self.field.from_int(n)
    }
    fn add(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        self.field.add(a, b)
    }
    fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        self.field.mul(a, b)
    }
    fn neg(&self, a: &QuadElem) -> QuadElem {
        self.field.neg(a)
    }
    fn is_zero(&self, a: &QuadElem) -> bool {
        self.field.is_zero(a)
    }
    fn inv(&self, a: &QuadElem) -> Option<QuadElem> {
        let i = self.field.inv(a)?;
        if self.field.is_integral(&i) {
            Some(i)
        } else {
            None
        }
    }
    fn parse(&self, s: &str) -> Result<QuadElem> {
        let a = parse_quad(s)?;
        if !self.field.is_integral(&a) {
            return Err(Error::validation(format!("{s:?} is not an algebraic integer")));
        }
        Ok(a)
    }
    fn format(&self, a: &QuadElem) -> String {
        format_quad(a)
    }
}

impl Conjugate for QuadraticIntegers {
    fn conj(&self, a: &QuadElem) -> QuadElem {
        self.field.conj(a)
    }
}

// --------------------------------------------------------- descriptors

/// Serialized ring choice, tagged by `"kind"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Integers,
    Rationals,
    /// 𝔽_p (f = 1) or 𝔽_q with an optional explicit modulus (ascending coefficients).
    FiniteField {
        q: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<i64>>,
    },
    /// ℤ/p^t, or GR(p^t, f) when `f` > 1.
    Zmod {
        p: u64,
        t: u32,
        #[serde(default = "one_u32")]
        f: u32,
    },
    QuadraticField { d: i64 },
    GaussianRationals,
    QuadraticIntegers { d: i64 },
}

fn one_u32() -> u32 {
    1
}

impl RingDescriptor {
    pub fn galois(&self) -> Result<Option<GaloisRing>> {
        match self {
            RingDescriptor::FiniteField { q, modulus } => {
                let q = BigInt::from(*q);
                match modulus {
                    None => GaloisRing::finite_field(&q).map(Some),
                    Some(m) => {
                        let (p, f) = crate::arith::prime_power(&q).ok_or_else(|| {
                            Error::validation(format!("{q} is not a prime power"))
                        })?;
                        if m.len() != f as usize + 1 {
                            return Err(Error::validation(format!(
                                "modulus must have degree {f} for q = {q}"
                            )));
                        }
                        GaloisRing::new(&p, 1, m.iter().map(|&c| BigInt::from(c)).collect()).map(Some)
                    }
                }
            }
            RingDescriptor::Zmod { p, t, f } => {
                GaloisRing::unramified(&BigInt::from(*p), *f, *t).map(Some)
            }
            _ => Ok(None),
        }
    }
}

// ------------------------------------------------------ matrix helpers

pub fn mat_identity<R: Ring>(r: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { r.one() } else { r.zero() })
}

pub fn mat_zeros<R: Ring>(r: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(rows, cols, |_, _| r.zero())
}

pub fn mat_mul<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.cols() != b.rows() {
        return Err(Error::validation(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = r.zero();
        for k in 0..a.cols() {
            let x = a.get(i, k);
            if r.is_zero(x) {
                continue;
            }
            acc = r.add(&acc, &r.mul(x, b.get(k, j)));
        }
        acc
    }))
}

pub fn mat_add<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::validation("matrix shapes differ"));
    }
    Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| r.add(a.get(i, j), b.get(i, j))))
}

pub fn mat_sub<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::validation("matrix shapes differ"));
    }
    Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| r.sub(a.get(i, j), b.get(i, j))))
}

pub fn mat_minus_identity<R: Ring>(r: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| {
        if i == j {
            r.sub(a.get(i, j), &r.one())
        } else {
            a.get(i, j).clone()
        }
    })
}

pub fn mat_is_zero<R: Ring>(r: &R, a: &Matrix<R::Elem>) -> bool {
    a.entries().iter().all(|x| r.is_zero(x))
}

pub fn mat_kron<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        r.mul(a.get(i / b.rows(), j / b.cols()), b.get(i % b.rows(), j % b.cols()))
    })
}

/// Characteristic polynomial det(λI − A), descending coefficients, by the
/// division-free Samuelson–Berkowitz recursion (valid over any commutative ring).
pub fn char_poly_desc<R: Ring>(r: &R, a: &Matrix<R::Elem>) -> Result<Vec<R::Elem>> {
    if !a.is_square() {
        return Err(Error::validation("characteristic polynomial of a non-square matrix"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(vec![r.one()]);
    }
    let mut cp = vec![r.one(), r.neg(a.get(n - 1, n - 1))];
    for k in (0..n - 1).rev() {
        let m = n - k - 1;
        let mut t = vec![r.one(), r.neg(a.get(k, k))];
        let mut v: Vec<R::Elem> = (k + 1..n).map(|i| a.get(i, k).clone()).collect();
        for step in 0..m {
            let mut dot = r.zero();
            for (jj, vj) in v.iter().enumerate() {
                dot = r.add(&dot, &r.mul(a.get(k, k + 1 + jj), vj));
            }
            t.push(r.neg(&dot));
            if step + 1 < m {
                v = (0..m)
                    .map(|ii| {
                        let mut acc = r.zero();
                        for (jj, vj) in v.iter().enumerate() {
                            acc = r.add(&acc, &r.mul(a.get(k + 1 + ii, k + 1 + jj), vj));
                        }
                        acc
                    })
                    .collect();
            }
        }
        let next: Vec<R::Elem> = (0..m + 2)
            .map(|i| {
                let mut acc = r.zero();
                for (j, c) in cp.iter().enumerate() {
                    if i >= j {
                        acc = r.add(&acc, &r.mul(&t[i - j], c));
                    }
                }
                acc
            })
            .collect();
        cp = next;
    }
    Ok(cp)
}

pub fn det<R: Ring>(r: &R, a: &Matrix<R::Elem>) -> Result<R::Elem> {
    let cp = char_poly_desc(r, a)?;
    let c = cp.last().unwrap().clone();
    Ok(if a.rows() % 2 == 0 { c } else { r.neg(&c) })
}

pub fn parse_matrix<R: Ring>(r: &R, entries: &[Vec<String>]) -> Result<Matrix<R::Elem>> {
    let rows = entries.len();
    let cols = entries.first().map_or(0, |row| row.len());
    if entries.iter().any(|row| row.len() != cols) {
        return Err(Error::validation("ragged matrix rows"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in entries {
        for e in row {
            data.push(r.parse(e)?);
        }
    }
    Matrix::from_vec(rows, cols, data)
}

pub fn format_matrix<R: Ring>(r: &R, a: &Matrix<R::Elem>) -> Vec<Vec<String>> {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| r.format(a.get(i, j))).collect()).collect()
}
