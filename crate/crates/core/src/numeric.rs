//! High-precision reals (via astro-float) and exact square roots of rationals.

use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::io::rational_to_string;

pub const DEFAULT_DIGITS: usize = 64;
pub const MIN_DIGITS: usize = 32;
pub const PRECISION_ENV: &str = "TORSIONLAB_PRECISION";

const RM: RoundingMode = RoundingMode::ToEven;

/// Working context: output digits, internal binary precision, constant cache.
pub struct Ctx {
    digits: usize,
    bits: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(digits: usize) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::validation(format!(
                "precision must be at least {MIN_DIGITS} digits, got {digits}"
            )));
        }
        // log2(10) < 3.33; extra words as guard bits
        let bits = digits * 333 / 100 + 128;
        let cc = Consts::new().map_err(|e| Error::computation(format!("astro-float: {e:?}")))?;
        Ok(Ctx { digits, bits, cc })
    }

    /// Precision from `TORSIONLAB_PRECISION`, else the default.
    pub fn from_env() -> Result<Self> {
        Ctx::new(digits_from_env()?)
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn int(&self, x: &BigInt) -> BigFloat {
        if let Ok(v) = i64::try_from(x) {
            return BigFloat::from_i64(v, self.bits);
        }
        let base = BigFloat::from_u64(1 << 32, self.bits);
        let mut acc = BigFloat::from_u64(0, self.bits);
        for d in x.magnitude().to_u32_digits().iter().rev() {
            acc = self.add(&self.mul(&acc, &base), &BigFloat::from_u64(*d as u64, self.bits));
        }
        if x.is_negative() {
            acc.neg()
        } else {
            acc
        }
    }

    pub fn small(&self, x: i64) -> BigFloat {
        BigFloat::from_i64(x, self.bits)
    }

    pub fn rational(&self, x: &BigRational) -> BigFloat {
        self.div(&self.int(x.numer()), &self.int(x.denom()))
    }

    /// Parse a decimal literal such as `"-1.25e-3"`.
    pub fn parse(&mut self, s: &str) -> Result<BigFloat> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        let v = BigFloat::parse(t, Radix::Dec, self.bits, RM, &mut self.cc);
        if !ok || v.is_nan() || v.is_inf() {
            return Err(Error::validation(format!("not a decimal number: {s:?}")));
        }
        Ok(v)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.cc)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.bits, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.bits, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    /// Angle of `(x, y)` in `(−π, π]`.
    pub fn atan2(&mut self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        if x.is_zero() {
            let pi = self.pi();
            let half_pi = self.div(&pi, &self.small(2));
            return if y.is_negative() {
                half_pi.neg()
            } else if y.is_zero() {
                self.small(0)
            } else {
                half_pi
            };
        }
        let base = self.div(y, x).atan(self.bits, RM, &mut self.cc);
        let pi = self.pi();
        if x.is_positive() {
            base
        } else if y.is_negative() {
            self.sub(&base, &pi)
        } else {
            self.add(&base, &pi)
        }
    }

    pub fn ln_int(&mut self, x: &BigInt) -> BigFloat {
        let v = self.int(x);
        self.ln(&v)
    }

    pub fn ln_rational(&mut self, x: &BigRational) -> BigFloat {
        let n = self.ln_int(x.numer());
        let d = self.ln_int(x.denom());
        self.sub(&n, &d)
    }

    /// Decimal string rounded to the context's significant digits.
    pub fn fmt(&mut self, x: &BigFloat) -> String {
        format_sig(x, self.digits, &mut self.cc)
    }

    /// Decimal string rounded to `digits` significant digits.
    pub fn fmt_digits(&mut self, x: &BigFloat, digits: usize) -> String {
        format_sig(x, digits, &mut self.cc)
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        self.fmt_digits(x, 20).parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ctx").field("digits", &self.digits).field("bits", &self.bits).finish()
    }
}

pub fn digits_from_env() -> Result<usize> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => {
            let d: usize = v.trim().parse().map_err(|_| {
                Error::validation(format!("{PRECISION_ENV} must be an integer, got {v:?}"))
            })?;
            if d < MIN_DIGITS {
                return Err(Error::validation(format!(
                    "{PRECISION_ENV} must be at least {MIN_DIGITS}, got {d}"
                )));
            }
            Ok(d)
        }
        Err(_) => Ok(DEFAULT_DIGITS),
    }
}

fn format_sig(x: &BigFloat, digits: usize, cc: &mut Consts) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_inf() {
        return if x.is_negative() { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    let raw = x.format(Radix::Dec, RM, cc).expect("decimal formatting");
    let (neg, body) = match raw.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, raw.as_str()),
    };
    let (mant, exp) = body.split_once('e').unwrap_or((body, "0"));
    let mut exp: i64 = exp.parse().expect("exponent");
    let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    while ds.len() > 1 && ds[0] == 0 {
        ds.remove(0);
        exp -= 1;
    }
    if ds.len() > digits {
        let up = ds[digits] >= 5;
        ds.truncate(digits);
        if up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && *ds.last().unwrap() == 0 {
        ds.pop();
    }
    let digits_str: String = ds.iter().map(|d| (d + b'0') as char).collect();
    let sign = if neg { "-" } else { "" };
    if (-7..21).contains(&exp) {
        let n = digits_str.len() as i64;
        if exp < 0 {
            format!("{sign}0.{}{digits_str}", "0".repeat((-exp - 1) as usize))
        } else if exp + 1 >= n {
            format!("{sign}{digits_str}{}", "0".repeat((exp + 1 - n) as usize))
        } else {
            let (a, b) = digits_str.split_at((exp + 1) as usize);
            format!("{sign}{a}.{b}")
        }
    } else {
        let (a, b) = digits_str.split_at(1);
        if b.is_empty() {
            format!("{sign}{a}e{exp}")
        } else {
            format!("{sign}{a}.{b}e{exp}")
        }
    }
}

/// Exact non-negative real of the form √r with r rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtRational {
    square: BigRational,
}

impl SqrtRational {
    pub fn one() -> Self {
        SqrtRational { square: BigRational::one() }
    }

    /// √r for r ≥ 0.
    pub fn sqrt_of(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::validation("square root of a negative rational"));
        }
        Ok(SqrtRational { square: r })
    }

    /// |x| as a square root.
    pub fn from_rational(x: &BigRational) -> Self {
        SqrtRational { square: x * x }
    }

    pub fn from_int(x: &BigInt) -> Self {
        SqrtRational::from_rational(&BigRational::from_integer(x.clone()))
    }

    pub fn square(&self) -> &BigRational {
        &self.square
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }

    /// The value as a rational when it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        let n = self.square.numer();
        let d = self.square.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(BigRational::new(rn, rd))
        } else {
            None
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        SqrtRational { square: &self.square * &o.square }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::validation("division by zero"));
        }
        Ok(SqrtRational { square: &self.square / &o.square })
    }

    pub fn recip(&self) -> Result<Self> {
        SqrtRational::one().div(self)
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.recip()?.powi(-e);
        }
        Ok(SqrtRational { square: num_traits::pow(self.square.clone(), e as usize) })
    }

    pub fn to_float(&self, ctx: &Ctx) -> BigFloat {
        ctx.sqrt(&ctx.rational(&self.square))
    }

    pub fn ln(&self, ctx: &mut Ctx) -> BigFloat {
        let l = ctx.ln_rational(&self.square);
        ctx.div(&l, &ctx.small(2))
    }

    pub fn to_decimal(&self, ctx: &mut Ctx) -> String {
        match self.to_rational() {
            Some(r) if r.is_integer() => r.numer().to_string(),
            _ => {
                let v = self.to_float(ctx);
                ctx.fmt(&v)
            }
        }
    }

    /// Exact closed form: `"p/q"` when rational, else `"sqrt(p/q)"`.
    pub fn exact_string(&self) -> String {
        match self.to_rational() {
            Some(r) => rational_to_string(&r),
            None => format!("sqrt({})", rational_to_string(&self.square)),
        }
    }

    /// Relative difference |a−b|/b in floating point, for non-rational comparisons.
    pub fn relative_difference(&self, other: &Self, ctx: &Ctx) -> BigFloat {
        let a = self.to_float(ctx);
        let b = other.to_float(ctx);
        ctx.div(&ctx.sub(&a, &b), &b).abs()
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.square.cmp(&other.square)
    }
}

impl Serialize for SqrtRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.exact_string())
    }
}

/// Parse the output of [`SqrtRational::exact_string`].
pub fn parse_sqrt_rational(s: &str) -> Result<SqrtRational> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        SqrtRational::sqrt_of(crate::io::parse_rational(inner)?)
    } else {
        let r = crate::io::parse_rational(t)?;
        if r.is_negative() {
            return Err(Error::validation(format!("expected a non-negative value, got {s:?}")));
        }
        Ok(SqrtRational::from_rational(&r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ln2_to_fifty_digits() {
        let mut c = Ctx::new(50).unwrap();
        let v = c.ln_int(&BigInt::from(2));
        assert_eq!(c.fmt(&v), "0.69314718055994530941723212145817656807550013436026");
    }

    #[test]
    fn formatting_rounds_and_carries() {
        let mut c = Ctx::new(32).unwrap();
        let x = c.parse("9.99999").unwrap();
        assert_eq!(c.fmt_digits(&x, 3), "10");
        let y = c.parse("-0.000123456").unwrap();
        assert_eq!(c.fmt_digits(&y, 4), "-0.0001235");
        let z = c.parse("1.5e-30").unwrap();
        assert_eq!(c.fmt_digits(&z, 5), "1.5e-30");
        assert_eq!(c.fmt(&c.small(0)), "0");
        assert_eq!(c.fmt(&c.small(120)), "120");
        assert!(c.parse("abc").is_err());
    }

    #[test]
    fn precision_floor() {
        assert!(Ctx::new(31).is_err());
        assert!(Ctx::new(32).is_ok());
    }

    #[test]
    fn sqrt_rational_exact() {
        let three = SqrtRational::sqrt_of(q(3, 1)).unwrap();
        assert_eq!(three.to_rational(), None);
        assert_eq!(three.mul(&three).to_rational(), Some(q(3, 1)));
        let r = three.recip().unwrap();
        assert_eq!(r.exact_string(), "sqrt(1/3)");
        assert_eq!(parse_sqrt_rational("sqrt(1/3)").unwrap(), r);
        assert_eq!(SqrtRational::from_rational(&q(-8, 3)).exact_string(), "8/3");
        let mut c = Ctx::new(40).unwrap();
        assert_eq!(
            three.to_decimal(&mut c),
            "1.732050807568877293527446341505872366943"
        );
    }

    #[test]
    fn atan2_quadrants() {
        let mut c = Ctx::new(32).unwrap();
        let a = c.atan2(&c.small(1), &c.small(-1));
        let pi = c.pi();
        let expect = c.div(&c.mul(&c.small(3), &pi), &c.small(4));
        assert_eq!(c.fmt_digits(&a, 30), c.fmt_digits(&expect, 30));
        let b = c.atan2(&c.small(-1), &c.small(0));
        assert!(b.is_negative());
    }
}
