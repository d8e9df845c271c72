//! Quaternion algebras H(a, b; F) over F = ℚ or ℚ(√−d): element arithmetic,
//! Hilbert symbols and ramification, orders with a bounded norm-one search,
//! and the split embedding into 2×2 matrices over F(√a).

pub mod hilbert;
pub mod order;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{format_quad, parse_quad, Conjugate, QuadElem, QuadraticField, QuadraticIntegers, Ring, CLASS_NUMBER_ONE};

pub use hilbert::{hilbert_symbol, places_above, ramification_set, Place, PrimeKind};
pub use order::QuatOrder;

/// ℚ, or ℚ(√−d) for a class-number-one d. Elements are `QuadElem` with v = 0 over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseField {
    Rationals,
    Imaginary(QuadraticIntegers),
}

impl BaseField {
    /// `d = 0` selects ℚ.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 {
            return Ok(BaseField::Rationals);
        }
        if !CLASS_NUMBER_ONE.contains(&d) {
            return Err(Error::validation(format!(
                "quaternion algebras are supported over Q (d = 0) and Q(sqrt(-d)) for d in {CLASS_NUMBER_ONE:?}, got d = {d}"
            )));
        }
        Ok(BaseField::Imaginary(QuadraticIntegers::new(d)?))
    }

    pub fn d(&self) -> i64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Imaginary(o) => o.field().d().to_i64().unwrap(),
        }
    }

    pub fn quadratic(&self) -> Option<&QuadraticField> {
        match self {
            BaseField::Rationals => None,
            BaseField::Imaginary(o) => Some(o.field()),
        }
    }

    /// Is `x` in the ring of integers?
    pub fn is_integral(&self, x: &QuadElem) -> bool {
        match self {
            BaseField::Rationals => x.v.is_zero() && x.u.is_integer(),
            BaseField::Imaginary(o) => o.field().is_integral(x),
        }
    }

    /// Integral basis of the ring of integers: (1) or (1, ω).
    pub fn integral_basis(&self) -> Vec<QuadElem> {
        match self {
            BaseField::Rationals => vec![QuadElem::ints(1, 0)],
            BaseField::Imaginary(o) => vec![QuadElem::ints(1, 0), o.omega()],
        }
    }

    pub fn is_square(&self, x: &QuadElem) -> bool {
        match self {
            BaseField::Rationals => crate::ring::rational_sqrt(&x.u).is_some(),
            BaseField::Imaginary(o) => o.field().is_square(x),
        }
    }

    fn dq(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.d()))
    }
}

impl Ring for BaseField {
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
        QuadElem::new(&a.u * &b.u - self.dq() * &a.v * &b.v, &a.u * &b.v + &a.v * &b.u)
    }
    fn neg(&self, a: &QuadElem) -> QuadElem {
        QuadElem::new(-&a.u, -&a.v)
    }
    fn is_zero(&self, a: &QuadElem) -> bool {
        a.u.is_zero() && a.v.is_zero()
    }
    fn inv(&self, a: &QuadElem) -> Option<QuadElem> {
        let n = &a.u * &a.u + self.dq() * &a.v * &a.v;
        if n.is_zero() {
            return None;
        }
        Some(QuadElem::new(&a.u / &n, -&a.v / &n))
    }
    fn parse(&self, s: &str) -> Result<QuadElem> {
        let x = parse_quad(s)?;
        if matches!(self, BaseField::Rationals) && !x.v.is_zero() {
            return Err(Error::validation(format!("{s:?} is not rational")));
        }
        Ok(x)
    }
    fn format(&self, a: &QuadElem) -> String {
        format_quad(a)
    }
}

impl Conjugate for BaseField {
    fn conj(&self, a: &QuadElem) -> QuadElem {
        QuadElem::new(a.u.clone(), -&a.v)
    }
}

/// H(a, b; F): i² = a, j² = b, ij = −ji = k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    field: BaseField,
    a: QuadElem,
    b: QuadElem,
}

/// Coordinates in the basis 1, i, j, k.
pub type Coords = [QuadElem; 4];

impl QuaternionAlgebra {
    pub fn new(field: BaseField, a: QuadElem, b: QuadElem) -> Result<Self> {
        if field.is_zero(&a) || field.is_zero(&b) {
            return Err(Error::validation("a and b must be nonzero"));
        }
        if matches!(field, BaseField::Rationals) && !(a.v.is_zero() && b.v.is_zero()) {
            return Err(Error::validation("a and b must be rational over Q"));
        }
        Ok(QuaternionAlgebra { field, a, b })
    }

    /// Parse `a`, `b` written as "u+v*w" over the field with parameter `d` (0 for ℚ).
    pub fn parse(d: i64, a: &str, b: &str) -> Result<Self> {
        let field = BaseField::new(d)?;
        let a = field.parse(a)?;
        let b = field.parse(b)?;
        QuaternionAlgebra::new(field, a, b)
    }

    /// The Hamilton quaternions H(−1, −1; ℚ).
    pub fn hamilton() -> Self {
        QuaternionAlgebra::new(BaseField::Rationals, QuadElem::ints(-1, 0), QuadElem::ints(-1, 0)).unwrap()
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn a(&self) -> &QuadElem {
        &self.a
    }

    pub fn b(&self) -> &QuadElem {
        &self.b
    }

    pub fn zero(&self) -> Coords {
        std::array::from_fn(|_| self.field.zero())
    }

    pub fn one(&self) -> Coords {
        let mut x = self.zero();
        x[0] = self.field.one();
        x
    }

    /// Basis element 1, i, j or k.
    pub fn basis(&self, n: usize) -> Coords {
        let mut x = self.zero();
        x[n] = self.field.one();
        x
    }

    pub fn add(&self, x: &Coords, y: &Coords) -> Coords {
        std::array::from_fn(|n| self.field.add(&x[n], &y[n]))
    }

    pub fn sub(&self, x: &Coords, y: &Coords) -> Coords {
        std::array::from_fn(|n| self.field.sub(&x[n], &y[n]))
    }

    pub fn scale(&self, c: &QuadElem, x: &Coords) -> Coords {
        std::array::from_fn(|n| self.field.mul(c, &x[n]))
    }

    pub fn mul(&self, x: &Coords, y: &Coords) -> Coords {
        let f = &self.field;
        let m = |p: &QuadElem, q: &QuadElem| f.mul(p, q);
        let ab = f.mul(&self.a, &self.b);
        let sum = |terms: &[QuadElem]| terms.iter().fold(f.zero(), |acc, t| f.add(&acc, t));
        [
            sum(&[
                m(&x[0], &y[0]),
                m(&self.a, &m(&x[1], &y[1])),
                m(&self.b, &m(&x[2], &y[2])),
                f.neg(&m(&ab, &m(&x[3], &y[3]))),
            ]),
            sum(&[
                m(&x[0], &y[1]),
                m(&x[1], &y[0]),
                f.neg(&m(&self.b, &m(&x[2], &y[3]))),
                m(&self.b, &m(&x[3], &y[2])),
            ]),
            sum(&[
                m(&x[0], &y[2]),
                m(&x[2], &y[0]),
                m(&self.a, &m(&x[1], &y[3])),
                f.neg(&m(&self.a, &m(&x[3], &y[1]))),
            ]),
            sum(&[m(&x[0], &y[3]), m(&x[3], &y[0]), m(&x[1], &y[2]), f.neg(&m(&x[2], &y[1]))]),
        ]
    }

    pub fn conj(&self, x: &Coords) -> Coords {
        [x[0].clone(), self.field.neg(&x[1]), self.field.neg(&x[2]), self.field.neg(&x[3])]
    }

    /// Reduced norm x0² − a x1² − b x2² + ab x3².
    pub fn norm(&self, x: &Coords) -> QuadElem {
        let f = &self.field;
        let sq = |t: &QuadElem| f.mul(t, t);
        let ab = f.mul(&self.a, &self.b);
        let mut n = sq(&x[0]);
        n = f.sub(&n, &f.mul(&self.a, &sq(&x[1])));
        n = f.sub(&n, &f.mul(&self.b, &sq(&x[2])));
        f.add(&n, &f.mul(&ab, &sq(&x[3])))
    }

    /// Reduced trace 2 x0.
    pub fn trace(&self, x: &Coords) -> QuadElem {
        self.field.add(&x[0], &x[0])
    }

    pub fn inverse(&self, x: &Coords) -> Option<Coords> {
        let n = self.field.inv(&self.norm(x))?;
        Some(self.scale(&n, &self.conj(x)))
    }

    /// Parse four field elements.
    pub fn parse_element(&self, coords: &[String]) -> Result<Coords> {
        if coords.len() != 4 {
            return Err(Error::validation(format!("a quaternion needs 4 coordinates, got {}", coords.len())));
        }
        let v: Vec<QuadElem> = coords.iter().map(|s| self.field.parse(s)).collect::<Result<_>>()?;
        Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
    }

    pub fn format_element(&self, x: &Coords) -> Vec<String> {
        x.iter().map(format_quad).collect()
    }

    pub fn ramification(&self) -> Result<Vec<Place>> {
        ramification_set(&self.field, &self.a, &self.b)
    }

    pub fn is_division(&self) -> Result<bool> {
        Ok(!self.ramification()?.is_empty())
    }

    pub fn classify(&self) -> Result<Classification> {
        let places = self.ramification()?;
        let labels: Vec<String> = places.iter().map(|p| p.label(self.field.d())).collect();
        Ok(Classification {
            format: crate::io::FORMAT_TAG,
            d: self.field.d(),
            a: format_quad(&self.a),
            b: format_quad(&self.b),
            division: !places.is_empty(),
            ramification: labels,
        })
    }
}

/// Report of `quat classify`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Classification {
    pub format: &'static str,
    pub d: i64,
    pub a: String,
    pub b: String,
    pub ramification: Vec<String>,
    pub division: bool,
}

/// An element tied to its algebra; operations across different algebras fail.
#[derive(Clone, Debug)]
pub struct QuatElement {
    pub algebra: Arc<QuaternionAlgebra>,
    pub coords: Coords,
}

impl QuatElement {
    pub fn new(algebra: Arc<QuaternionAlgebra>, coords: Coords) -> Self {
        QuatElement { algebra, coords }
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::validation("elements belong to different quaternion algebras"))
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(QuatElement::new(self.algebra.clone(), self.algebra.mul(&self.coords, &other.coords)))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(QuatElement::new(self.algebra.clone(), self.algebra.add(&self.coords, &other.coords)))
    }

    pub fn conj(&self) -> Self {
        QuatElement::new(self.algebra.clone(), self.algebra.conj(&self.coords))
    }

    pub fn norm(&self) -> QuadElem {
        self.algebra.norm(&self.coords)
    }

    pub fn trace(&self) -> QuadElem {
        self.algebra.trace(&self.coords)
    }
}

impl PartialEq for QuatElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.coords == other.coords
    }
}

/// F(√a) with elements p + q√a stored as (p, q); `a` need not be a non-square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtExtension {
    field: BaseField,
    a: QuadElem,
}

impl SqrtExtension {
    pub fn new(field: BaseField, a: QuadElem) -> Self {
        SqrtExtension { field, a }
    }

    pub fn embed(&self, x: &QuadElem) -> (QuadElem, QuadElem) {
        (x.clone(), self.field.zero())
    }
}

impl Ring for SqrtExtension {
    type Elem = (QuadElem, QuadElem);
    fn zero(&self) -> Self::Elem {
        (self.field.zero(), self.field.zero())
    }
    fn one(&self) -> Self::Elem {
        (self.field.one(), self.field.zero())
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        (self.field.from_int(n), self.field.zero())
    }
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (self.field.add(&x.0, &y.0), self.field.add(&x.1, &y.1))
    }
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let f = &self.field;
        let p = f.add(&f.mul(&x.0, &y.0), &f.mul(&self.a, &f.mul(&x.1, &y.1)));
        let q = f.add(&f.mul(&x.0, &y.1), &f.mul(&x.1, &y.0));
        (p, q)
    }
    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        (self.field.neg(&x.0), self.field.neg(&x.1))
    }
    fn is_zero(&self, x: &Self::Elem) -> bool {
        self.field.is_zero(&x.0) && self.field.is_zero(&x.1)
    }
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem> {
        let f = &self.field;
        let n = f.sub(&f.mul(&x.0, &x.0), &f.mul(&self.a, &f.mul(&x.1, &x.1)));
        let ni = f.inv(&n)?;
        Some((f.mul(&x.0, &ni), f.neg(&f.mul(&x.1, &ni))))
    }
    fn parse(&self, s: &str) -> Result<Self::Elem> {
        match s.split_once('|') {
            Some((p, q)) => Ok((self.field.parse(p)?, self.field.parse(q)?)),
            None => Ok((self.field.parse(s)?, self.field.zero())),
        }
    }
    fn format(&self, x: &Self::Elem) -> String {
        format!("{}|{}", format_quad(&x.0), format_quad(&x.1))
    }
}

/// φ(x) = [[x0 + x1√a, x2 + x3√a], [b(x2 − x3√a), x0 − x1√a]]; i ↦ diag(√a, −√a),
/// j ↦ [[0, 1], [b, 0]].
pub fn split_embed(alg: &QuaternionAlgebra, x: &Coords) -> (SqrtExtension, Matrix<(QuadElem, QuadElem)>) {
    let f = alg.field();
    let ext = SqrtExtension::new(f.clone(), alg.a().clone());
    let b = alg.b();
    let m = Matrix::from_vec(
        2,
        2,
        vec![
            (x[0].clone(), x[1].clone()),
            (x[2].clone(), x[3].clone()),
            (f.mul(b, &x[2]), f.neg(&f.mul(b, &x[3]))),
            (x[0].clone(), f.neg(&x[1])),
        ],
    )
    .expect("2x2");
    (ext, m)
}
