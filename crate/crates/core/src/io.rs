//! Text formats shared by every module: decimal-string numbers and the JSON
//! matrix layout `{"rows":m,"cols":n,"entries":[["-12", ...], ...]}`.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Matrix, RationalMatrix};

pub const FORMAT_TAG: &str = "tl-1";

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::validation(format!("not an integer: {s:?}")))
}

/// Accepts `"n"`, `"p/q"` and finite decimals such as `"-1.25"`, all exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::validation(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let d = parse_bigint(d).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::validation(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(parse_bigint(n).map_err(|_| bad())?, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        let whole = if ip_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_bigint(ip_digits).map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let frac = parse_bigint(fp).map_err(|_| bad())?;
        let mag = BigRational::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    Ok(BigRational::from_integer(parse_bigint(t).map_err(|_| bad())?))
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serialized matrix with decimal-string entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_strings<T>(m: &Matrix<T>, f: impl Fn(&T) -> String) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(m.get(i, j))).collect())
                .collect(),
        }
    }

    pub fn parse_with<T: Clone>(&self, f: impl Fn(&str) -> Result<T>) -> Result<Matrix<T>> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::validation(format!(
                "matrix declares {}x{} but entries have a different shape",
                self.rows, self.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for row in &self.entries {
            for e in row {
                data.push(f(e)?);
            }
        }
        Matrix::from_vec(self.rows, self.cols, data)
    }

    pub fn to_int(&self) -> Result<IntMatrix> {
        self.parse_with(parse_bigint)
    }

    pub fn to_rational(&self) -> Result<RationalMatrix> {
        self.parse_with(parse_rational)
    }
}

impl From<&IntMatrix> for MatrixJson {
    fn from(m: &IntMatrix) -> Self {
        MatrixJson::from_strings(m, |x| x.to_string())
    }
}

impl From<&RationalMatrix> for MatrixJson {
    fn from(m: &RationalMatrix) -> Self {
        MatrixJson::from_strings(m, rational_to_string)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// serde adapter: `Vec<BigInt>` as an array of decimal strings.
pub mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| super::parse_bigint(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// serde adapter: `BigInt` as a decimal string.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_bigint(&raw).map_err(serde::de::Error::custom)
    }
}

/// serde adapter: `BigRational` as `"p/q"`.
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::rational_to_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("3").unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(
            parse_rational("-1/2").unwrap(),
            BigRational::new((-1).into(), 2.into())
        );
        assert_eq!(
            parse_rational("-1.25").unwrap(),
            BigRational::new((-5).into(), 4.into())
        );
        assert_eq!(
            parse_rational(".5").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn matrix_json_shape_checked() {
        let j: MatrixJson =
            serde_json::from_str(r#"{"rows":2,"cols":1,"entries":[["-12"],["123456789012345678901234567890"]]}"#)
                .unwrap();
        let m = j.to_int().unwrap();
        assert_eq!(m.get(1, 0).to_string(), "123456789012345678901234567890");
        let bad: MatrixJson =
            serde_json::from_str(r#"{"rows":2,"cols":2,"entries":[["1","2"]]}"#).unwrap();
        assert!(bad.to_int().is_err());
    }
}
