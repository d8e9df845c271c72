//! Local p-adic bounds for coinvariants of symmetric powers.
//!
//! Everything lives over the unramified ring 𝒪 = W(𝔽_q), q = p^f, truncated
//! to 𝒪/p^t = GR(p^t, f). Lattices and generators are handed around in
//! restriction-of-scalars form: an 𝒪-matrix of size n becomes an integer
//! matrix of size n·f over the basis 1, x, …, x^{f−1} of each coordinate.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, prime_power};
use crate::error::{Error, Result};
use crate::io::{rational_to_string, MatrixJson, FORMAT_TAG};
use crate::linalg::padic::{kernel_exponent, smith_valuations};
use crate::linalg::{lattice_basis, rational, IntMatrix, Matrix};
use crate::par::Exec;
use crate::ring::{mat_identity, mat_mul, mat_sub, GaloisRing, Ring};
use crate::sympow::sym_pow_unchecked;

pub const DEFAULT_PRECISION: u32 = 12;
pub const DEFAULT_C: u64 = 16;
const MAX_CLOSURE_ITER: usize = 64;

/// p, f and the working precision t (coefficients in ℤ/p^t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalParams {
    pub p: u64,
    pub f: u32,
    pub t: u32,
}

impl LocalParams {
    pub fn new(q: u64, t: u32) -> Result<Self> {
        let (p, f) = split_q(q)?;
        if t == 0 {
            return Err(Error::validation("precision t must be at least 1"));
        }
        Ok(LocalParams { p, f, t })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    pub fn ring(&self, precision: u32) -> Result<GaloisRing> {
        GaloisRing::unramified(&self.p_big(), self.f, precision)
    }
}

fn split_q(q: u64) -> Result<(u64, u32)> {
    let (p, f) = prime_power(&BigInt::from(q))
        .ok_or_else(|| Error::validation(format!("q = {q} is not a prime power")))?;
    Ok((p.to_u64().unwrap(), f))
}

fn vp(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

// ------------------------------------------------------------ partitions

/// Level of a weight t: ord_ϖ of the T − 1 eigenvalue on V_t, or ∞ for t = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl Level {
    pub fn label(&self) -> String {
        match self {
            Level::Finite(i) => i.to_string(),
            Level::Infinite => "inf".into(),
        }
    }
}

/// Membership rule for V_t, t ≠ 0: level 0 when 2t ≢ 0 mod q−1, otherwise
/// i with 2t = j (q−1) p^{i−1}, p ∤ j.
pub fn partition_level(q: u64, p: u64, t: i64) -> Level {
    if t == 0 {
        return Level::Infinite;
    }
    let two_t = 2 * t.unsigned_abs();
    if two_t % (q - 1) != 0 {
        return Level::Finite(0);
    }
    Level::Finite(1 + vp(two_t / (q - 1), p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPartition {
    pub q: u64,
    pub p: u64,
    pub k: u64,
    /// Level of V_t for t = −k, …, k.
    pub levels: Vec<Level>,
}

impl EigenPartition {
    pub fn level(&self, t: i64) -> Level {
        self.levels[(t + self.k as i64) as usize]
    }

    pub fn dims(&self) -> BTreeMap<Level, usize> {
        let mut out = BTreeMap::new();
        for l in &self.levels {
            *out.entry(*l).or_insert(0) += 1;
        }
        out
    }

    pub fn dim(&self, level: Level) -> usize {
        self.levels.iter().filter(|l| **l == level).count()
    }

    /// Smallest C with dim 𝒱_i ≤ C·k/(q p^{i−1}) + 1 for every finite i ≥ 1.
    pub fn c_needed(&self) -> BigRational {
        let mut c = BigRational::zero();
        if self.k == 0 {
            return c;
        }
        for (l, d) in self.dims() {
            if let Level::Finite(i) = l {
                if i >= 1 && d > 1 {
                    let scale = BigInt::from(self.q) * BigInt::from(self.p).pow(i - 1);
                    let need = BigRational::new(BigInt::from(d - 1) * scale, BigInt::from(self.k));
                    if need > c {
                        c = need;
                    }
                }
            }
        }
        c
    }

    pub fn report(&self) -> PartitionReport {
        PartitionReport {
            format: FORMAT_TAG,
            q: self.q,
            k: self.k,
            dims: self.dims().into_iter().map(|(l, d)| (l.label(), d)).collect(),
            c_needed: rational_to_string(&self.c_needed()),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PartitionReport {
    pub format: &'static str,
    pub q: u64,
    pub k: u64,
    pub dims: BTreeMap<String, usize>,
    pub c_needed: String,
}

pub fn eigen_partition(q: u64, k: u64) -> Result<EigenPartition> {
    let (p, _) = split_q(q)?;
    let k_i = k as i64;
    let levels = (-k_i..=k_i).map(|t| partition_level(q, p, t)).collect();
    Ok(EigenPartition { q, p, k, levels })
}

// ------------------------------------------------------- admissible roots

fn from_digits(n: u64, base: u64, len: usize) -> Vec<BigInt> {
    let mut n = n;
    (0..len)
        .map(|_| {
            let d = n % base;
            n /= base;
            BigInt::from(d)
        })
        .collect()
}

fn residue_is_primitive(gr1: &GaloisRing, a: &[BigInt], q: u64) -> bool {
    let a = a.to_vec();
    if gr1.is_zero(&a) {
        return false;
    }
    factorize(&BigInt::from(q - 1))
        .into_iter()
        .all(|(l, _)| gr1.pow(&a, (q - 1) / l.to_u64().unwrap()) != gr1.one())
}

/// An element a ∈ 𝒪 with coefficients below p² whose residue generates 𝔽_q^×
/// and with a^{q−1} ∉ 1 + p²𝒪. For p = 2, f ≥ 2 also (a^{q−1} − 1)/2 ≢ 1 mod 2,
/// without which the 2-adic levels shift.
pub fn admissible_root(params: &LocalParams) -> Result<Vec<BigInt>> {
    let q = params.q();
    let p = params.p;
    let f = params.f as usize;
    let gr1 = params.ring(1)?;
    let gr2 = params.ring(2)?;
    let count = (p * p).checked_pow(f as u32).ok_or_else(|| Error::validation("q too large"))?;
    for n in 0..count {
        let a = from_digits(n, p * p, f);
        if !residue_is_primitive(&gr1, &gr1.residue(&a), q) {
            continue;
        }
        let a2 = gr2.pow(&a.iter().map(|c| c.mod_floor(gr2.characteristic())).collect(), q - 1);
        let diff = gr2.sub(&a2, &gr2.one());
        if gr2.valuation(&diff) != 1 {
            continue;
        }
        if p == 2 && f >= 2 {
            let u: Vec<BigInt> = diff.iter().map(|c| (c / 2u32).mod_floor(&BigInt::from(2))).collect();
            if u == gr1.one() {
                continue;
            }
        }
        return Ok(a);
    }
    Err(Error::computation(format!("no admissible primitive root with coefficients below p^2 for q = {q}")))
}

/// A disagreement between the partition rule and ord_ϖ(a^{2t} − 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelMismatch {
    pub t: i64,
    pub rule: u32,
    pub measured: u32,
}

/// Compare the partition rule with the valuation of a^{2t} − 1 for t = 1..k,
/// computed in GR(p^prec, f) for the admissible root a.
pub fn check_levels(q: u64, k: u64, precision: u32) -> Result<Vec<LevelMismatch>> {
    let params = LocalParams::new(q, precision)?;
    let a = admissible_root(&params)?;
    let gr = params.ring(precision)?;
    let a2 = gr.mul(&a, &a);
    let one = gr.one();
    let mut pw = gr.one();
    let mut out = Vec::new();
    for t in 1..=k as i64 {
        pw = gr.mul(&pw, &a2);
        let v = gr.valuation(&gr.sub(&pw, &one));
        if v >= precision {
            return Err(Error::computation(format!("precision {precision} exhausted at t = {t}")));
        }
        let rule = match partition_level(q, params.p, t) {
            Level::Finite(i) => i,
            Level::Infinite => unreachable!("t is nonzero"),
        };
        if rule != v {
            out.push(LevelMismatch { t, rule, measured: v });
        }
    }
    Ok(out)
}

// ---------------------------------------------------- restriction of scalars

/// Multiplication by e on GR as an f×f integer matrix (columns = images of x^j).
fn mult_matrix(gr: &GaloisRing, e: &[BigInt]) -> IntMatrix {
    let f = gr.degree();
    let mut out = IntMatrix::zeros(f, f);
    let mut basis = gr.one();
    let x = gr.generator();
    for j in 0..f {
        let img = gr.mul(&e.to_vec(), &basis);
        for (i, c) in img.into_iter().enumerate() {
            out.set(i, j, c);
        }
        basis = if f > 1 { gr.mul(&basis, &x) } else { basis };
    }
    out
}

/// An n×n matrix over GR as an nf×nf integer matrix.
pub fn restrict_scalars(gr: &GaloisRing, m: &Matrix<Vec<BigInt>>) -> IntMatrix {
    let f = gr.degree();
    let mut out = IntMatrix::zeros(m.rows() * f, m.cols() * f);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let blk = mult_matrix(gr, m.get(r, c));
            for i in 0..f {
                for j in 0..f {
                    out.set(r * f + i, c * f + j, blk.get(i, j).clone());
                }
            }
        }
    }
    out
}

fn unipotent(gr: &GaloisRing, lam: &[BigInt], upper: bool) -> Matrix<Vec<BigInt>> {
    Matrix::from_fn(2, 2, |i, j| {
        if i == j {
            gr.one()
        } else if (i == 0 && j == 1) == upper {
            lam.to_vec()
        } else {
            gr.zero()
        }
    })
}

/// Generators of SL₂(𝒪) acting on Sym^{2k}, valid modulo p^precision:
/// T = Sym^{2k} diag(a, a⁻¹), N, N̄, and for f > 1 the unipotents with
/// off-diagonal entry x^j.
pub fn standard_generators(params: &LocalParams, k: u64, precision: u32) -> Result<Vec<IntMatrix>> {
    let gr = params.ring(precision)?;
    let a = admissible_root(params)?;
    let a = a.iter().map(|c| c.mod_floor(gr.characteristic())).collect::<Vec<_>>();
    let ainv = gr.inv(&a).ok_or_else(|| Error::computation("admissible root is not a unit"))?;
    let n = 2 * k as usize;
    let diag = Matrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => a.clone(),
        (1, 1) => ainv.clone(),
        _ => gr.zero(),
    });
    let mut mats = vec![sym_pow_unchecked(&gr, &diag, n)];
    let mut lam = gr.one();
    for _ in 0..params.f {
        mats.push(sym_pow_unchecked(&gr, &unipotent(&gr, &lam, true), n));
        mats.push(sym_pow_unchecked(&gr, &unipotent(&gr, &lam, false), n));
        lam = gr.mul(&lam, &gr.generator());
    }
    Ok(mats.iter().map(|m| restrict_scalars(&gr, m)).collect())
}

/// Multiplication by x on 𝒪^n (restricted), making lattices 𝒪-modules.
fn scalar_generator(params: &LocalParams, n: usize, precision: u32) -> Result<Option<IntMatrix>> {
    if params.f == 1 {
        return Ok(None);
    }
    let gr = params.ring(precision)?;
    let x = gr.generator();
    let m = Matrix::from_fn(n, n, |i, j| if i == j { x.clone() } else { gr.zero() });
    Ok(Some(restrict_scalars(&gr, &m)))
}

// -------------------------------------------------------- quotients

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuotientReport {
    pub format: &'static str,
    pub p: u64,
    pub f: u32,
    pub t: u32,
    /// Valuations of the local Smith form of [X_1 | … | X_s], ascending.
    pub valuations: Vec<u32>,
    /// ln_q |L : L′| = Σ v / f.
    pub exponent: String,
    /// Some valuation reached t, so the true quotient may be larger.
    pub exhausted: bool,
}

impl QuotientReport {
    pub fn exponent_value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.valuations.iter().map(|&v| v as u64).sum::<u64>()), BigInt::from(self.f))
    }
}

/// L/L′ with L′ = Σ (g − 1)L, L spanned by the columns of `basis`. Every g is
/// conjugated into L-coordinates, X = B⁻¹(g − I)B, and must be p-integral.
pub fn largest_invariant_quotient(basis: &IntMatrix, gens: &[IntMatrix], params: &LocalParams) -> Result<QuotientReport> {
    let n = basis.rows();
    if !basis.is_square() {
        return Err(Error::validation("lattice basis must be square"));
    }
    if n % params.f as usize != 0 {
        return Err(Error::validation(format!("size {n} is not a multiple of f = {}", params.f)));
    }
    let p = params.p_big();
    let t = params.t;
    let modulus = num_traits::pow(p.clone(), t as usize);
    let binv = rational::inverse(&basis.to_rational())
        .map_err(|_| Error::validation("lattice basis is singular"))?;
    let b = basis.to_rational();
    let mut blocks = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        if g.rows() != n || g.cols() != n {
            return Err(Error::validation(format!("generator {i} is not {n}x{n}")));
        }
        let x = &(&binv * &g.minus_identity().to_rational()) * &b;
        let mut xi = IntMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let e = x.get(r, c);
                let inv = crate::arith::mod_inverse(e.denom(), &modulus).ok_or_else(|| {
                    Error::validation(format!("lattice is not stable under generator {i}"))
                })?;
                xi.set(r, c, (e.numer() * inv).mod_floor(&modulus));
            }
        }
        blocks.push(xi);
    }
    let valuations = if blocks.is_empty() {
        vec![t; n]
    } else {
        smith_valuations(&IntMatrix::hstack(&blocks, n)?, &p, t)
    };
    let exhausted = valuations.iter().any(|&v| v == t);
    let mut rep = QuotientReport {
        format: FORMAT_TAG,
        p: params.p,
        f: params.f,
        t,
        valuations,
        exponent: String::new(),
        exhausted,
    };
    rep.exponent = rational_to_string(&rep.exponent_value());
    Ok(rep)
}

/// Lattice input for the CLI: basis and generators as integer matrices in
/// restriction-of-scalars form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalLatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default = "one_u32")]
    pub f: u32,
    pub basis: MatrixJson,
    pub generators: Vec<MatrixJson>,
}

fn one_u32() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InvariantsReport {
    pub format: &'static str,
    pub p: u64,
    pub f: u32,
    pub t: u32,
    /// |((𝒪/p^t)^n)^Γ| = p^exponent.
    pub exponent: u64,
    pub order: String,
}

/// Order of the invariants of the generators acting on (𝒪/p^t)^n.
pub fn h1_invariant_bound(gens: &[IntMatrix], n: usize, params: &LocalParams) -> Result<InvariantsReport> {
    let p = params.p_big();
    let exponent = if gens.is_empty() {
        n as u64 * params.t as u64
    } else {
        let blocks: Vec<IntMatrix> = gens.iter().map(|g| g.minus_identity()).collect();
        kernel_exponent(&IntMatrix::vstack(&blocks, n)?, &p, params.t)
    };
    Ok(InvariantsReport {
        format: FORMAT_TAG,
        p: params.p,
        f: params.f,
        t: params.t,
        exponent,
        order: num_traits::pow(p, exponent as usize).to_string(),
    })
}

// ----------------------------------------------------------- projector

/// p_j(A) for A = diag(1, γ, …, γ^{size−1}), p_j(z) = Π_{i≠j} (z − γ^i).
pub fn endo_projector<R: Ring>(r: &R, gamma: &R::Elem, j: usize, size: usize) -> Result<Matrix<R::Elem>> {
    if j >= size {
        return Err(Error::validation(format!("index {j} out of range for size {size}")));
    }
    let powers: Vec<R::Elem> = (0..size).map(|i| r.pow(gamma, i as u64)).collect();
    let a = Matrix::from_fn(size, size, |i, k| if i == k { powers[i].clone() } else { r.zero() });
    let mut out = mat_identity(r, size);
    for (i, g) in powers.iter().enumerate() {
        if i == j {
            continue;
        }
        let shift = Matrix::from_fn(size, size, |x, y| if x == y { g.clone() } else { r.zero() });
        out = mat_mul(r, &out, &mat_sub(r, &a, &shift)?)?;
    }
    Ok(out)
}

// ------------------------------------------------------- irreducibility

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub format: &'static str,
    pub q: u64,
    pub d: usize,
    /// Super- and subdiagonals of ρ(N) − I and ρ(N̄) − I are entrywise nonzero.
    pub structural: bool,
    /// Invariant-subspace search under SL₂(𝔽_q), run for q ≤ 4, d ≤ 3.
    pub exhaustive: Option<bool>,
}

pub fn sym_pow_structural(q: u64, d: usize) -> Result<bool> {
    let params = LocalParams::new(q, 1)?;
    let gr = params.ring(1)?;
    let n = sym_pow_unchecked(&gr, &unipotent(&gr, &gr.one(), true), d);
    let nb = sym_pow_unchecked(&gr, &unipotent(&gr, &gr.one(), false), d);
    Ok((1..=d).all(|i| !gr.is_zero(n.get(i - 1, i)) && !gr.is_zero(nb.get(i, i - 1))))
}

/// Echelon rows over a field, reduced in insertion order.
struct Span<'a> {
    r: &'a GaloisRing,
    rows: Vec<(usize, Vec<Vec<BigInt>>)>,
}

impl<'a> Span<'a> {
    fn reduce(&self, v: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if !self.r.is_zero(&v[*piv]) {
                let c = v[*piv].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = self.r.sub(x, &self.r.mul(&c, y));
                }
            }
        }
        v
    }

    fn insert(&mut self, v: &[Vec<BigInt>]) -> bool {
        let w = self.reduce(v);
        let Some(piv) = w.iter().position(|x| !self.r.is_zero(x)) else {
            return false;
        };
        let inv = self.r.inv(&w[piv]).expect("field");
        let w: Vec<Vec<BigInt>> = w.iter().map(|x| self.r.mul(x, &inv)).collect();
        self.rows.push((piv, w));
        true
    }
}

fn apply(r: &GaloisRing, m: &Matrix<Vec<BigInt>>, v: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(m.get(i, j), &v[j]))))
        .collect()
}

/// Irreducibility of Sym^d over 𝔽_q under SL₂(𝔽_q), by checking that every
/// nonzero vector generates the whole space. Feasible for small q^{d+1}.
pub fn sym_pow_exhaustive(q: u64, d: usize) -> Result<bool> {
    let params = LocalParams::new(q, 1)?;
    let gr = params.ring(1)?;
    let mut gens = Vec::new();
    let mut lam = gr.one();
    for _ in 0..params.f {
        gens.push(sym_pow_unchecked(&gr, &unipotent(&gr, &lam, true), d));
        gens.push(sym_pow_unchecked(&gr, &unipotent(&gr, &lam, false), d));
        lam = gr.mul(&lam, &gr.generator());
    }
    let elems = gr.elements();
    let dim = d + 1;
    let total = (elems.len() as u64).checked_pow(dim as u32).filter(|&n| n <= 1 << 20).ok_or_else(|| {
        Error::validation(format!("exhaustive search over F_{q}^{dim} is too large"))
    })?;
    for idx in 1..total {
        let mut m = idx;
        let v: Vec<Vec<BigInt>> = (0..dim)
            .map(|_| {
                let e = elems[(m % elems.len() as u64) as usize].clone();
                m /= elems.len() as u64;
                e
            })
            .collect();
        let mut span = Span { r: &gr, rows: Vec::new() };
        span.insert(&v);
        let mut queue = vec![v];
        while let Some(w) = queue.pop() {
            for g in &gens {
                let gw = apply(&gr, g, &w);
                if span.insert(&gw) {
                    queue.push(gw);
                }
            }
        }
        if span.rows.len() < dim {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn sym_pow_irreducible_fq(q: u64, d: usize) -> Result<IrreducibilityReport> {
    let structural = sym_pow_structural(q, d)?;
    let exhaustive = if q <= 4 && d <= 3 { Some(sym_pow_exhaustive(q, d)?) } else { None };
    Ok(IrreducibilityReport { format: FORMAT_TAG, q, d, structural, exhaustive })
}

// ------------------------------------------------------------ experiment

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub q: u64,
    pub k: u64,
    pub samples: usize,
    pub seed: u64,
    pub t: u32,
    pub c: u64,
    /// Elementary divisors of the random starting lattice are p^e, 0 ≤ e ≤ max_exp.
    pub max_exp: u32,
}

impl ExperimentConfig {
    pub fn new(q: u64, k: u64, samples: usize, seed: u64) -> Self {
        ExperimentConfig { q, k, samples, seed, t: DEFAULT_PRECISION, c: DEFAULT_C, max_exp: 2 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundReport {
    pub format: String,
    pub q: u64,
    pub k: u64,
    pub t: u32,
    pub samples: usize,
    pub seed: u64,
    pub c: u64,
    /// ln_q |L : L′| per sample.
    pub values: Vec<String>,
    pub exhausted: Vec<bool>,
    pub max: String,
    /// C·(k/q + 1).
    pub bound: String,
    pub within_bound: bool,
    /// max value / (k/q + 1).
    pub fitted_c: String,
    /// ln_q |L : L′| for the standard lattice 𝒪^{2k+1}.
    pub standard: String,
}

fn random_unitriangular(rng: &mut ChaCha8Rng, n: usize, lower: bool) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, j| {
        if i == j {
            BigInt::one()
        } else if (i > j) == lower {
            BigInt::from(rng.gen_range(-2i64..=2))
        } else {
            BigInt::zero()
        }
    })
}

/// Smallest lattice containing the columns of `start` and p^e·ℤ^n, stable
/// under `gens`.
fn close_lattice(start: &IntMatrix, gens: &[IntMatrix], p: &BigInt, e: u32) -> Result<IntMatrix> {
    let n = start.rows();
    let floor = IntMatrix::identity(n).scale(&num_traits::pow(p.clone(), e as usize));
    let mut m = lattice_basis(&IntMatrix::hstack(&[start.clone(), floor.clone()], n)?);
    for _ in 0..MAX_CLOSURE_ITER {
        let mut blocks = vec![m.clone(), floor.clone()];
        blocks.extend(gens.iter().map(|g| g * &m));
        let next = lattice_basis(&IntMatrix::hstack(&blocks, n)?);
        if next == m {
            return Ok(m);
        }
        m = next;
    }
    Err(Error::NoStableLattice(format!("closure did not stabilise in {MAX_CLOSURE_ITER} steps")))
}

/// A random G-stable lattice: U·diag(p^{e_i})·ℤ^n closed under the group
/// (and under 𝒪 when f > 1).
pub fn random_stable_lattice(
    params: &LocalParams,
    k: u64,
    gens: &[IntMatrix],
    max_exp: u32,
    rng: &mut ChaCha8Rng,
) -> Result<IntMatrix> {
    let n = (2 * k as usize + 1) * params.f as usize;
    let p = params.p_big();
    let l = random_unitriangular(rng, n, true);
    let u = random_unitriangular(rng, n, false);
    let d = IntMatrix::from_fn(n, n, |i, j| {
        if i == j {
            num_traits::pow(p.clone(), rng.gen_range(0..=max_exp) as usize)
        } else {
            BigInt::zero()
        }
    });
    let start = &(&l * &u) * &d;
    let mut all = gens.to_vec();
    if let Some(x) = scalar_generator(params, 2 * k as usize + 1, params.t)? {
        all.push(x);
    }
    close_lattice(&start, &all, &p, max_exp)
}

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn bound_experiment(cfg: &ExperimentConfig, exec: &Exec) -> Result<BoundReport> {
    if cfg.samples == 0 {
        return Err(Error::validation("samples must be at least 1"));
    }
    if cfg.k == 0 {
        return Err(Error::validation("k must be at least 1"));
    }
    let base = LocalParams::new(cfg.q, cfg.t)?;
    let n = (2 * cfg.k as usize + 1) * base.f as usize;
    // conjugating by B costs up to v_p(det B) ≤ n·max_exp digits
    let precision = cfg.t + n as u32 * cfg.max_exp + 1;
    let work = LocalParams { t: precision, ..base.clone() };
    let gens = standard_generators(&work, cfg.k, precision)?;
    let standard = largest_invariant_quotient(&IntMatrix::identity(n), &gens, &base)?;
    let results = exec.map_range(cfg.samples, |i| -> Result<QuotientReport> {
        let mut rng = sample_rng(cfg.seed, i);
        let lattice = random_stable_lattice(&work, cfg.k, &gens, cfg.max_exp, &mut rng)?;
        largest_invariant_quotient(&lattice, &gens, &base)
    });
    let results: Vec<QuotientReport> = results.into_iter().collect::<Result<_>>()?;
    let values: Vec<BigRational> = results.iter().map(|r| r.exponent_value()).collect();
    let max = values.iter().max().cloned().unwrap_or_else(BigRational::zero);
    let scale = BigRational::new(BigInt::from(cfg.k), BigInt::from(cfg.q)) + BigRational::one();
    let bound = &scale * BigRational::from_integer(BigInt::from(cfg.c));
    Ok(BoundReport {
        format: FORMAT_TAG.into(),
        q: cfg.q,
        k: cfg.k,
        t: cfg.t,
        samples: cfg.samples,
        seed: cfg.seed,
        c: cfg.c,
        values: values.iter().map(rational_to_string).collect(),
        exhausted: results.iter().map(|r| r.exhausted).collect(),
        max: rational_to_string(&max),
        within_bound: max <= bound,
        bound: rational_to_string(&bound),
        fitted_c: rational_to_string(&(&max / &scale)),
        standard: standard.exponent,
    })
}
