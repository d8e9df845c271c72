//! k-sweeps of torsion growth with a quadratic fit against k².

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{alternating_torsion, evaluate, TwistedComplexSpec};
use crate::error::{Error, Result};
use crate::homology::{cohomology_groups, GroupRepZ};
use crate::io::FORMAT_TAG;
use crate::numeric::Ctx;
use crate::par::Exec;

/// The constant 2/π multiplying the volume in the growth law.
pub const VOLUME_CONSTANT: f64 = std::f64::consts::FRAC_2_PI;

mod f64_str {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod opt_f64_str {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| t.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub dim: usize,
    pub free_ranks: Vec<usize>,
    #[serde(with = "crate::io::bigint_vec")]
    pub torsion_orders: Vec<BigInt>,
    /// ln |H^p_tors| per degree.
    pub log_torsion: Vec<String>,
    /// Σ_p (−1)^p ln |H^p_tors|.
    pub alternating_sum: String,
    pub h0_vanishes: bool,
}

/// y ≈ a·k² + b·k + c by least squares (double precision).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    #[serde(with = "f64_str")]
    pub a: f64,
    #[serde(with = "f64_str")]
    pub b: f64,
    #[serde(with = "f64_str")]
    pub c: f64,
    /// Standard error of a; needs at least four points.
    #[serde(with = "opt_f64_str")]
    pub std_error_a: Option<f64>,
    #[serde(with = "f64_str")]
    pub residual_rms: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeTarget {
    pub known_volume: String,
    /// (2/π)·vol.
    pub target: String,
    /// Fitted a minus the target.
    #[serde(with = "f64_str")]
    pub difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub format: String,
    pub name: String,
    pub family: String,
    pub cell_euler_characteristic: i64,
    pub rows: Vec<SweepRow>,
    pub fit: Option<QuadraticFit>,
    pub target: Option<VolumeTarget>,
    pub notes: Vec<String>,
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<([f64; 3], [[f64; 3]; 3])> {
    // Gauss-Jordan on [m | r | I]
    let mut a = [[0.0; 7]; 3];
    for i in 0..3 {
        a[i][..3].copy_from_slice(&m[i]);
        a[i][3] = r[i];
        a[i][4 + i] = 1.0;
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for row in 0..3 {
            if row != col {
                let f = a[row][col];
                for j in 0..7 {
                    a[row][j] -= f * a[col][j];
                }
            }
        }
    }
    let x = [a[0][3], a[1][3], a[2][3]];
    let inv = std::array::from_fn(|i| [a[i][4], a[i][5], a[i][6]]);
    Some((x, inv))
}

/// Least-squares fit of y against (k², k, 1); `None` with fewer than three distinct k.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Option<QuadraticFit> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    let mut xtx = [[0.0; 3]; 3];
    let mut xty = [0.0; 3];
    for &(k, y) in points {
        let row = [k * k, k, 1.0];
        for i in 0..3 {
            xty[i] += row[i] * y;
            for j in 0..3 {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    let (coef, inv) = solve3(xtx, xty)?;
    let rss: f64 = points
        .iter()
        .map(|&(k, y)| {
            let e = y - (coef[0] * k * k + coef[1] * k + coef[2]);
            e * e
        })
        .sum();
    let std_error_a = (n > 3).then(|| (rss / (n - 3) as f64 * inv[0][0]).max(0.0).sqrt());
    Some(QuadraticFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        std_error_a,
        residual_rms: (rss / n as f64).sqrt(),
        points: n,
    })
}

/// k ↦ Sym^{2k} of the spec's base representation.
pub fn sym_family(spec: &TwistedComplexSpec) -> impl Fn(usize) -> Result<GroupRepZ> + Sync + '_ {
    move |k| spec.base_rep(2 * k)
}

fn at_k(k: usize, e: Error) -> Error {
    match e {
        Error::Validation(m) => Error::Validation(format!("k = {k}: {m}")),
        other => Error::Computation(format!("k = {k}: {other}")),
    }
}

fn sweep_row(spec: &TwistedComplexSpec, k: usize, rep: &GroupRepZ, digits: usize) -> Result<SweepRow> {
    let mut ctx = Ctx::new(digits)?;
    let groups = cohomology_groups(&evaluate(spec, rep)?);
    let orders: Vec<BigInt> = groups.iter().map(|g| g.torsion_order()).collect();
    let log_torsion = orders
        .iter()
        .map(|o| {
            let l = ctx.ln_int(o);
            ctx.fmt(&l)
        })
        .collect();
    let alt = ctx.ln_rational(&alternating_torsion(&groups));
    Ok(SweepRow {
        k,
        dim: rep.dim(),
        free_ranks: groups.iter().map(|g| g.free_rank).collect(),
        torsion_orders: orders,
        log_torsion,
        alternating_sum: ctx.fmt(&alt),
        h0_vanishes: groups[0].is_trivial(),
    })
}

/// Evaluate the family at every k (in parallel), tabulate ln|H^p|, and fit
/// the alternating sum against k². The fit and the volume comparison are
/// skipped when the cell Euler characteristic is nonzero.
pub fn torsion_sweep<F>(
    spec: &TwistedComplexSpec,
    family_name: &str,
    family: F,
    ks: &[usize],
    digits: usize,
    exec: &Exec,
) -> Result<SweepReport>
where
    F: Fn(usize) -> Result<GroupRepZ> + Sync,
{
    if ks.is_empty() {
        return Err(Error::validation("empty k range"));
    }
    let rows = exec.map(ks, |&k| family(k).and_then(|rep| sweep_row(spec, k, &rep, digits)).map_err(|e| at_k(k, e)));
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let chi = spec.cell_euler_characteristic();
    let mut notes = Vec::new();
    let nonvanishing: Vec<String> = rows.iter().filter(|r| !r.h0_vanishes).map(|r| r.k.to_string()).collect();
    if !nonvanishing.is_empty() {
        notes.push(format!("H^0 does not vanish for k in {{{}}}", nonvanishing.join(", ")));
    }
    let (fit, target) = if chi != 0 {
        notes.push(format!("cell Euler characteristic is {chi}; raw torsion only, no fit"));
        (None, None)
    } else {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.k as f64, r.alternating_sum.parse::<f64>().unwrap_or(f64::NAN)))
            .collect();
        let fit = fit_quadratic(&points);
        if fit.is_none() {
            notes.push("fewer than three k values; no fit".into());
        }
        let target = match (&fit, &spec.known_volume) {
            (Some(f), Some(v)) => {
                let mut ctx = Ctx::new(digits)?;
                let vol = ctx.parse(v)?;
                let pi = ctx.pi();
                let t = ctx.div(&ctx.mul(&ctx.small(2), &vol), &pi);
                let target = ctx.fmt(&t);
                let difference = f.a - ctx.to_f64(&t);
                Some(VolumeTarget { known_volume: v.clone(), target, difference })
            }
            _ => None,
        };
        (fit, target)
    };
    Ok(SweepReport {
        format: FORMAT_TAG.into(),
        name: spec.name.clone(),
        family: family_name.into(),
        cell_euler_characteristic: chi,
        rows,
        fit,
        target,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_quadratic() {
        let pts: Vec<(f64, f64)> = (1..=8).map(|k| (k as f64, 0.5 * (k * k) as f64 - 2.0 * k as f64 + 3.0)).collect();
        let f = fit_quadratic(&pts).unwrap();
        assert!((f.a - 0.5).abs() < 1e-9 && (f.b + 2.0).abs() < 1e-9 && (f.c - 3.0).abs() < 1e-9);
        assert!(f.std_error_a.unwrap() < 1e-9);
        assert!(fit_quadratic(&pts[..2]).is_none());
        assert!(fit_quadratic(&pts[..3]).unwrap().std_error_a.is_none());
    }

    #[test]
    fn target_constant() {
        assert!((VOLUME_CONSTANT - 0.63662).abs() < 1e-5);
    }
}
