//! Truncated Ruelle Euler products and the cohomological description of
//! R(s;ρ) at s = 0.

use std::cmp::Ordering;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::CohomologyReport;
use crate::io::FORMAT_TAG;
use crate::numeric::{Ctx, SqrtRational};
use crate::par::Exec;

/// Eigenvalue as decimal strings, in rectangular or polar form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EigenvalueJson {
    Rect { re: String, im: String },
    Polar { log_abs: String, arg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicDatum {
    pub length: String,
    pub eigenvalues: Vec<EigenvalueJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub geodesics: Vec<GeodesicDatum>,
}

#[derive(Clone, Debug)]
struct Complex {
    re: BigFloat,
    im: BigFloat,
}

impl Complex {
    fn mul(&self, o: &Complex, c: &Ctx) -> Complex {
        Complex {
            re: c.sub(&c.mul(&self.re, &o.re), &c.mul(&self.im, &o.im)),
            im: c.add(&c.mul(&self.re, &o.im), &c.mul(&self.im, &o.re)),
        }
    }

    fn norm_sq(&self, c: &Ctx) -> BigFloat {
        c.add(&c.mul(&self.re, &self.re), &c.mul(&self.im, &self.im))
    }

    fn recip(&self, c: &Ctx) -> Complex {
        let n = self.norm_sq(c);
        Complex { re: c.div(&self.re, &n), im: c.div(&self.im, &n).neg() }
    }
}

struct Eigen {
    z: Complex,
    log_abs: BigFloat,
}

struct Geodesic {
    index: usize,
    length: BigFloat,
    eigen: Vec<Eigen>,
}

fn cmp_float(a: &BigFloat, b: &BigFloat) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

fn cmp_eigen(a: &Eigen, b: &Eigen) -> Ordering {
    cmp_float(&a.z.re, &b.z.re).then_with(|| cmp_float(&a.z.im, &b.z.im))
}

fn parse_geodesic(index: usize, g: &GeodesicDatum, ctx: &mut Ctx) -> Result<Geodesic> {
    let at = |m: String| Error::validation(format!("geodesic {index}: {m}"));
    let length = ctx.parse(&g.length).map_err(|e| at(e.to_string()))?;
    if !length.is_positive() {
        return Err(at(format!("length must be positive, got {}", g.length)));
    }
    let mut eigen = Vec::new();
    for (j, e) in g.eigenvalues.iter().enumerate() {
        let (z, log_abs) = match e {
            EigenvalueJson::Rect { re, im } => {
                let z = Complex { re: ctx.parse(re)?, im: ctx.parse(im)? };
                let n = z.norm_sq(ctx);
                if n.is_zero() {
                    return Err(at(format!("eigenvalue {j} is zero")));
                }
                let l = ctx.ln(&n);
                let l = ctx.div(&l, &ctx.small(2));
                (z, l)
            }
            EigenvalueJson::Polar { log_abs, arg } => {
                let l = ctx.parse(log_abs)?;
                let t = ctx.parse(arg)?;
                let r = ctx.exp(&l);
                let (cos, sin) = (ctx.cos(&t), ctx.sin(&t));
                (Complex { re: ctx.mul(&r, &cos), im: ctx.mul(&r, &sin) }, l)
            }
        };
        eigen.push(Eigen { z, log_abs });
    }
    eigen.sort_by(cmp_eigen);
    Ok(Geodesic { index, length, eigen })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductReport {
    pub format: String,
    pub s: [String; 2],
    pub value: [String; 2],
    pub abs: String,
    pub geodesics: usize,
    /// max ln|λ|/ℓ over the data: the product converges absolutely for Re s above it.
    pub abscissa: Option<String>,
    pub warnings: Vec<String>,
}

/// Π_γ Π_λ (1 − λ e^{−sℓ(γ)})^{−1} over the supplied classes, multiplied in
/// order of length and then eigenvalues. Per-geodesic factors are computed in
/// parallel.
pub fn truncated_product(s: (&str, &str), data: &[GeodesicDatum], digits: usize, exec: &Exec) -> Result<ProductReport> {
    let mut ctx = Ctx::new(digits)?;
    let s_re = ctx.parse(s.0)?;
    let s_im = ctx.parse(s.1)?;
    let dim = data.first().map(|g| g.eigenvalues.len());
    if let Some((i, g)) = data.iter().enumerate().find(|(_, g)| Some(g.eigenvalues.len()) != dim) {
        return Err(Error::validation(format!(
            "geodesic {i} has {} eigenvalues, expected {}",
            g.eigenvalues.len(),
            dim.unwrap_or(0)
        )));
    }
    let indexed: Vec<(usize, &GeodesicDatum)> = data.iter().enumerate().collect();
    let parsed = exec.map(&indexed, |(i, g)| -> Result<(Geodesic, Complex, Vec<String>, Option<BigFloat>)> {
        let mut c = Ctx::new(digits)?;
        let geo = parse_geodesic(*i, g, &mut c)?;
        // e^{−sℓ} = e^{−Re(s)ℓ}·(cos(Im(s)ℓ) − i sin(Im(s)ℓ))
        let mag = c.exp(&c.mul(&s_re, &geo.length).neg());
        let ang = c.mul(&s_im, &geo.length);
        let (cos, sin) = (c.cos(&ang), c.sin(&ang));
        let w = Complex { re: c.mul(&mag, &cos), im: c.mul(&mag, &sin).neg() };
        let one = c.small(1);
        let tol = c.div(&one, &c.int(&(BigInt::from(1) << (c.bits() - 64))));
        let mut acc = Complex { re: c.small(1), im: c.small(0) };
        let mut warnings = Vec::new();
        let mut worst: Option<BigFloat> = None;
        for (j, e) in geo.eigen.iter().enumerate() {
            let z = e.z.mul(&w, &c);
            let f = Complex { re: c.sub(&one, &z.re), im: z.im.neg() };
            let fabs = c.sqrt(&f.norm_sq(&c));
            if fabs <= tol {
                return Err(Error::Pole(format!("{i} (eigenvalue {j})")));
            }
            let zabs = c.sqrt(&z.norm_sq(&c));
            if zabs >= one {
                let shown = c.fmt_digits(&zabs, 12);
                warnings.push(format!(
                    "geodesic {i}, eigenvalue {j}: |λ e^(-sℓ)| = {shown} >= 1, outside the region of absolute convergence"
                ));
            }
            let rate = c.div(&e.log_abs, &geo.length);
            worst = Some(match worst {
                Some(w) if cmp_float(&w, &rate) != Ordering::Less => w,
                _ => rate,
            });
            acc = acc.mul(&f, &c);
        }
        Ok((geo, acc, warnings, worst))
    });
    let mut rows = parsed.into_iter().collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        cmp_float(&a.0.length, &b.0.length)
            .then_with(|| {
                a.0.eigen
                    .iter()
                    .zip(&b.0.eigen)
                    .map(|(x, y)| cmp_eigen(x, y))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
            .then(a.0.index.cmp(&b.0.index))
    });
    let mut prod = Complex { re: ctx.small(1), im: ctx.small(0) };
    let mut warnings = Vec::new();
    let mut abscissa: Option<BigFloat> = None;
    for (_, f, w, rate) in rows {
        prod = prod.mul(&f, &ctx);
        warnings.extend(w);
        if let Some(r) = rate {
            abscissa = Some(match abscissa {
                Some(a) if cmp_float(&a, &r) != Ordering::Less => a,
                _ => r,
            });
        }
    }
    let value = prod.recip(&ctx);
    let abs = ctx.sqrt(&value.norm_sq(&ctx));
    Ok(ProductReport {
        format: FORMAT_TAG.into(),
        s: [s.0.trim().to_string(), s.1.trim().to_string()],
        value: [ctx.fmt(&value.re), ctx.fmt(&value.im)],
        abs: ctx.fmt(&abs),
        geodesics: data.len(),
        abscissa: abscissa.map(|a| ctx.fmt(&a)),
        warnings,
    })
}

/// ord_{s=0} R(s;ρ) from the ranks of H^0..H^3: Σ_{q=1}^{3} (−1)^q q·rk H^q,
/// or 2·rk H¹ − 4 for the trivial representation.
pub fn order_at_zero(ranks: &[usize], trivial: bool) -> Result<i64> {
    if ranks.len() != 4 {
        return Err(Error::validation(format!("expected ranks for degrees 0..3, got {} values", ranks.len())));
    }
    if trivial {
        return Ok(2 * ranks[1] as i64 - 4);
    }
    Ok((1..=3).map(|q| if q % 2 == 0 { (q * ranks[q]) as i64 } else { -((q * ranks[q]) as i64) }).sum())
}

/// |R*(0;ρ)| = R(𝓜)^{−1}·Π_q |H^q_tors|^{(−1)^q}.
pub fn leading_coefficient(torsion_orders: &[BigInt], regulator: &SqrtRational) -> Result<SqrtRational> {
    if regulator.is_zero() {
        return Err(Error::validation("regulator is zero"));
    }
    if let Some(q) = torsion_orders.iter().position(|t| t.is_zero()) {
        return Err(Error::validation(format!("torsion order in degree {q} is zero")));
    }
    let mut r = BigRational::from_integer(1.into());
    for (q, t) in torsion_orders.iter().enumerate() {
        let t = BigRational::from_integer(t.clone());
        r = if q % 2 == 0 { r * t } else { r / t };
    }
    SqrtRational::from_rational(&r).div(regulator)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaReport {
    pub format: String,
    pub order_at_zero: i64,
    pub trivial: bool,
    pub leading_abs: String,
    pub leading_exact: SqrtRational,
    pub free_ranks: Vec<usize>,
    #[serde(with = "crate::io::bigint_vec")]
    pub torsion_orders: Vec<BigInt>,
    pub regulator: SqrtRational,
}

pub fn zeta_report(report: &CohomologyReport, regulator: &SqrtRational, trivial: bool, ctx: &mut Ctx) -> Result<ZetaReport> {
    report.validate()?;
    let ranks = report.free_ranks();
    let orders = report.torsion_orders();
    let lead = leading_coefficient(&orders, regulator)?;
    Ok(ZetaReport {
        format: FORMAT_TAG.into(),
        order_at_zero: order_at_zero(&ranks, trivial)?,
        trivial,
        leading_abs: lead.to_decimal(ctx),
        leading_exact: lead,
        free_ranks: ranks,
        torsion_orders: orders,
        regulator: regulator.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(re: &str, im: &str) -> EigenvalueJson {
        EigenvalueJson::Rect { re: re.into(), im: im.into() }
    }

    #[test]
    fn empty_and_single_factor() {
        let r = truncated_product(("1", "0"), &[], 40, &Exec::sequential()).unwrap();
        assert_eq!(r.value[0], "1");
        assert!(r.abscissa.is_none());
        let mut c = Ctx::new(70).unwrap();
        let l = c.ln_int(&BigInt::from(2));
        let g = GeodesicDatum { length: c.fmt(&l), eigenvalues: vec![rect("1", "0")] };
        let r = truncated_product(("1", "0"), &[g], 50, &Exec::sequential()).unwrap();
        assert_eq!(r.value, ["2".to_string(), "0".to_string()]);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn pole_is_reported() {
        let g = GeodesicDatum { length: "1".into(), eigenvalues: vec![EigenvalueJson::Polar { log_abs: "1".into(), arg: "0".into() }] };
        let e = truncated_product(("1", "0"), &[g.clone()], 40, &Exec::sequential()).unwrap_err();
        assert!(matches!(e, Error::Pole(_)));
        let r = truncated_product(("0.5", "0"), &[g], 40, &Exec::sequential()).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.abscissa.as_deref(), Some("1"));
    }

    #[test]
    fn order_formula() {
        assert_eq!(order_at_zero(&[0, 0, 0, 0], false).unwrap(), 0);
        assert_eq!(order_at_zero(&[0, 1, 1, 1], false).unwrap(), -2);
        assert_eq!(order_at_zero(&[1, 3, 3, 1], true).unwrap(), 2);
        assert!(order_at_zero(&[0, 1], false).is_err());
    }

    #[test]
    fn leading_formula() {
        let one = SqrtRational::one();
        let t = |v: [i64; 4]| v.map(BigInt::from).to_vec();
        assert_eq!(leading_coefficient(&t([1, 1, 1, 1]), &one).unwrap(), one);
        let l = leading_coefficient(&t([1, 5, 7, 2]), &one).unwrap();
        assert_eq!(l.exact_string(), "7/10");
        let zero = SqrtRational::from_int(&BigInt::zero());
        assert!(leading_coefficient(&t([1, 1, 1, 1]), &zero).is_err());
    }
}
