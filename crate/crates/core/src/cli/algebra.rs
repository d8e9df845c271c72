use std::path::PathBuf;

use clap::Args;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{read_value, to_value, Checked, RunConfig};
use torsionlab::error::{Error, Result};
use torsionlab::homology::{
    check_torsion_identity, coinvariants, cohomology as cohomology_report, invariants, regulator, GroupRepZ,
    IntCochainComplex, InnerProducts, VolumeData,
};
use torsionlab::io::{parse_bigint, read_json, MatrixJson, FORMAT_TAG};
use torsionlab::linalg::{determinant, smith_normal_form, AbelianGroup, IntMatrix, Matrix};
use torsionlab::ring::{
    format_matrix, mat_kron, parse_matrix, Conjugate, Integers, QuadElem, QuadraticField, QuadraticIntegers,
    Rationals, Ring, RingDescriptor,
};
use torsionlab::sympow::{realify, realify_integral, sym_pow};

#[derive(Args, Debug)]
pub struct SnfArgs {
    /// Matrix file {"rows", "cols", "entries"}.
    pub matrix: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct SnfReport {
    format: String,
    rows: usize,
    cols: usize,
    rank: usize,
    #[serde(with = "torsionlab::io::bigint_vec")]
    invariant_factors: Vec<BigInt>,
    u: MatrixJson,
    s: MatrixJson,
    v: MatrixJson,
}

fn verify_snf(a: &IntMatrix, r: &SnfReport) -> Result<()> {
    let (u, s, v) = (r.u.to_int()?, r.s.to_int()?, r.v.to_int()?);
    let fail = |m: &str| Err(Error::validation(format!("SNF report does not verify: {m}")));
    if !u.is_square() || !v.is_square() || u.rows() != a.rows() || v.rows() != a.cols() || s.rows() != a.rows() || s.cols() != a.cols() {
        return fail("shapes do not match the input");
    }
    if determinant(&u)?.abs() != BigInt::one() || determinant(&v)?.abs() != BigInt::one() {
        return fail("U or V is not unimodular");
    }
    if &(&u * a) * &v != s {
        return fail("U·A·V differs from S");
    }
    let diag: Vec<BigInt> = (0..s.rows().min(s.cols())).map(|i| s.get(i, i).clone()).take_while(|x| !x.is_zero()).collect();
    let off = (0..s.rows()).any(|i| (0..s.cols()).any(|j| i != j && !s.get(i, j).is_zero()));
    if off || diag.len() != r.rank {
        return fail("S is not diagonal of the stated rank");
    }
    if diag.iter().any(|d| !d.is_positive()) || diag.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
        return fail("diagonal is not a positive divisibility chain");
    }
    if diag != r.invariant_factors {
        return fail("invariant factors differ from the diagonal of S");
    }
    Ok(())
}

pub fn snf(args: &SnfArgs, config: &RunConfig) -> Result<Checked> {
    let a = read_json::<MatrixJson>(&args.matrix)?.to_int()?;
    if let Some(path) = &config.verify {
        let stored: SnfReport = serde_json::from_value(read_value(path)?)?;
        verify_snf(&a, &stored)?;
        return Ok(Checked::Done);
    }
    let f = smith_normal_form(&a);
    Ok(Checked::Recompute(to_value(&SnfReport {
        format: FORMAT_TAG.into(),
        rows: a.rows(),
        cols: a.cols(),
        rank: f.rank(),
        invariant_factors: f.invariant_factors.clone(),
        u: MatrixJson::from(&f.u),
        s: MatrixJson::from(&f.s),
        v: MatrixJson::from(&f.v),
    })?))
}

#[derive(Args, Debug)]
pub struct ComplexArgs {
    /// Complex file {"ranks", "differentials"}.
    pub complex: PathBuf,
}

pub fn cohomology(args: &ComplexArgs, config: &RunConfig) -> Result<Checked> {
    let c: IntCochainComplex = read_json(&args.complex)?;
    let mut ctx = config.ctx()?;
    Ok(Checked::Recompute(to_value(&cohomology_report(&c, &mut ctx))?))
}

#[derive(Args, Debug)]
pub struct RtorsionArgs {
    pub complex: PathBuf,
    /// Volume data {"grams", "lattice_basis"}; defaults to lattice bases of H^q_free.
    #[arg(long)]
    pub volume: Option<PathBuf>,
}

pub fn rtorsion(args: &RtorsionArgs, config: &RunConfig) -> Result<Checked> {
    let c: IntCochainComplex = read_json(&args.complex)?;
    let vol = match &args.volume {
        Some(p) => read_json::<VolumeData>(p)?,
        None => VolumeData::lattice(&c, &InnerProducts::standard())?,
    };
    let mut ctx = config.ctx()?;
    let report = check_torsion_identity(&c, &vol, &mut ctx)?;
    let mut v = to_value(&report)?;
    v["regulator"] = to_value(&regulator(&vol)?)?;
    Ok(Checked::Recompute(v))
}

#[derive(Args, Debug)]
pub struct CoinvArgs {
    /// Representation file {"generators", "relators", "unimodular"}.
    pub rep: PathBuf,
    /// Also count invariants of (Z/N)^m.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Serialize)]
struct CoinvReport {
    format: String,
    dim: usize,
    coinvariants: AbelianGroup,
    invariants: torsionlab::homology::Invariants,
}

pub fn coinv(args: &CoinvArgs, _config: &RunConfig) -> Result<Checked> {
    let rep: GroupRepZ = read_json(&args.rep)?;
    let modulus = args.modulus.as_deref().map(parse_bigint).transpose()?;
    Ok(Checked::Recompute(to_value(&CoinvReport {
        format: FORMAT_TAG.into(),
        dim: rep.dim(),
        coinvariants: coinvariants(&rep),
        invariants: invariants(&rep, modulus.as_ref())?,
    })?))
}

#[derive(Args, Debug)]
pub struct SympowArgs {
    /// File {"ring": {"kind": ...}, "rows": 2, "cols": 2, "entries": [...]}.
    pub matrix: PathBuf,
    /// Symmetric power degree.
    #[arg(long)]
    pub n: usize,
    /// Tensor with the conjugate of Sym^m (quadratic rings only).
    #[arg(long)]
    pub conj: Option<usize>,
    /// Return the real (or integral) matrix of the realified representation.
    #[arg(long)]
    pub realify: bool,
}

#[derive(Deserialize)]
struct RingMatrixFile {
    #[serde(default)]
    format: Option<String>,
    ring: RingDescriptor,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct SympowReport {
    format: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    conj: Option<usize>,
    realified: bool,
    ring: RingDescriptor,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

fn plain<R: Ring>(r: &R, entries: &[Vec<String>], n: usize) -> Result<Vec<Vec<String>>> {
    let g = parse_matrix(r, entries)?;
    Ok(format_matrix(r, &sym_pow(r, &g, n)?))
}

fn with_conj<R: Ring<Elem = QuadElem> + Conjugate>(r: &R, g: &Matrix<QuadElem>, n: usize, m: usize) -> Result<Matrix<QuadElem>> {
    let a = sym_pow(r, g, n)?;
    let b = sym_pow(r, g, m)?.map(|x| r.conj(x));
    Ok(mat_kron(r, &a, &b))
}

pub fn sympow(args: &SympowArgs, _config: &RunConfig) -> Result<Checked> {
    let f: RingMatrixFile = read_json(&args.matrix)?;
    if let Some(tag) = f.format.as_deref().filter(|t| *t != FORMAT_TAG) {
        return Err(Error::validation(format!("unsupported format tag {tag:?}")));
    }
    if f.rows != 2 || f.cols != 2 || f.entries.len() != 2 || f.entries.iter().any(|r| r.len() != 2) {
        return Err(Error::validation("sympow expects a 2x2 matrix"));
    }
    let quadratic = |ring: &RingDescriptor| -> Result<Option<QuadraticField>> {
        Ok(match ring {
            RingDescriptor::QuadraticField { d } => Some(QuadraticField::new(*d)?),
            RingDescriptor::GaussianRationals => Some(QuadraticField::gaussian()),
            _ => None,
        })
    };
    let needs_quadratic = args.conj.is_some() || args.realify;
    let entries = match (&f.ring, needs_quadratic) {
        (_, false) => match &f.ring {
            RingDescriptor::Integers => plain(&Integers, &f.entries, args.n)?,
            RingDescriptor::Rationals => plain(&Rationals, &f.entries, args.n)?,
            RingDescriptor::FiniteField { .. } | RingDescriptor::Zmod { .. } => {
                let gr = f.ring.galois()?.expect("finite ring");
                plain(&gr, &f.entries, args.n)?
            }
            RingDescriptor::QuadraticIntegers { d } => plain(&QuadraticIntegers::new(*d)?, &f.entries, args.n)?,
            other => plain(&quadratic(other)?.expect("quadratic field"), &f.entries, args.n)?,
        },
        (RingDescriptor::QuadraticIntegers { d }, true) => {
            let o = QuadraticIntegers::new(*d)?;
            let g = parse_matrix(&o, &f.entries)?;
            let m = with_conj(&o, &g, args.n, args.conj.unwrap_or(0))?;
            if args.realify {
                let z = realify_integral(&o, &m)?;
                format_matrix(&Integers, &z)
            } else {
                format_matrix(&o, &m)
            }
        }
        (ring, true) => {
            let k = quadratic(ring)?
                .ok_or_else(|| Error::validation("--conj and --realify need a quadratic or Gaussian ring"))?;
            let g = parse_matrix(&k, &f.entries)?;
            let m = with_conj(&k, &g, args.n, args.conj.unwrap_or(0))?;
            if args.realify {
                format_matrix(&Rationals, &realify(&k, &m))
            } else {
                format_matrix(&k, &m)
            }
        }
    };
    Ok(Checked::Recompute(to_value(&SympowReport {
        format: FORMAT_TAG.into(),
        n: args.n,
        conj: args.conj,
        realified: args.realify,
        ring: f.ring,
        rows: entries.len(),
        cols: entries.first().map_or(0, |r| r.len()),
        entries,
    })?))
}
