//! Cochain complexes of free ℤ-modules: cohomology, combinatorial Laplacians,
//! Reidemeister torsion computed two independent ways, regulators,
//! coinvariants and invariants of integral representations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{MatrixJson, FORMAT_TAG};
use crate::linalg::rational::{self as rat, det_prime_unchecked, is_positive_definite};
use crate::linalg::{
    determinant, invariant_factors, kernel_basis, rational_lattice_basis, smith, AbelianGroup,
    IntMatrix, RationalMatrix,
};
use crate::numeric::{Ctx, SqrtRational};
use crate::words::{default_names, IntEvaluator, Word};

/// `0 → C^0 → C^1 → … → C^n → 0` with `d_q: C^q → C^{q+1}` an `r_{q+1} × r_q` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCochainComplex {
    ranks: Vec<usize>,
    differentials: Vec<IntMatrix>,
}

impl IntCochainComplex {
    /// Validates shapes and `d_{q+1} d_q = 0`.
    pub fn new(ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::validation("a complex needs at least one degree"));
        }
        if differentials.len() + 1 != ranks.len() {
            return Err(Error::validation(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                differentials.len()
            )));
        }
        for (q, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[q + 1] || d.cols() != ranks[q] {
                return Err(Error::validation(format!(
                    "d_{q} is {}x{} but must be {}x{}",
                    d.rows(),
                    d.cols(),
                    ranks[q + 1],
                    ranks[q]
                )));
            }
        }
        for q in 0..differentials.len().saturating_sub(1) {
            let dd = &differentials[q + 1] * &differentials[q];
            if !dd.is_zero_matrix() {
                return Err(Error::validation(format!("d_{} * d_{q} is not zero", q + 1)));
            }
        }
        Ok(IntCochainComplex { ranks, differentials })
    }

    /// Two-term complex `0 → ℤ^m → ℤ^n → 0`.
    pub fn two_term(d: IntMatrix) -> Self {
        IntCochainComplex { ranks: vec![d.cols(), d.rows()], differentials: vec![d] }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    /// Top degree n.
    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `d_q` for any integer q; zero maps outside the complex.
    pub fn d(&self, q: isize) -> IntMatrix {
        if q >= 0 && (q as usize) < self.differentials.len() {
            self.differentials[q as usize].clone()
        } else {
            let rows = self.rank_at(q + 1);
            let cols = self.rank_at(q);
            IntMatrix::zeros(rows, cols)
        }
    }

    fn rank_at(&self, q: isize) -> usize {
        if q >= 0 && (q as usize) < self.ranks.len() {
            self.ranks[q as usize]
        } else {
            0
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Tensor with ℤ^m where every differential becomes `d ⊗ I_m`.
    pub fn tensor_identity(&self, m: usize) -> Self {
        IntCochainComplex {
            ranks: self.ranks.iter().map(|r| r * m).collect(),
            differentials: self.differentials.iter().map(|d| d.kron(&IntMatrix::identity(m))).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    ranks: Vec<usize>,
    differentials: Vec<MatrixJson>,
}

impl Serialize for IntCochainComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexFile {
            format: Some(FORMAT_TAG.into()),
            ranks: self.ranks.clone(),
            differentials: self.differentials.iter().map(MatrixJson::from).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntCochainComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = ComplexFile::deserialize(d)?;
        check_format(f.format.as_deref()).map_err(serde::de::Error::custom)?;
        let diffs = f
            .differentials
            .iter()
            .map(|m| m.to_int())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        IntCochainComplex::new(f.ranks, diffs).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_format(tag: Option<&str>) -> Result<()> {
    match tag {
        None => Ok(()),
        Some(t) if t == FORMAT_TAG => Ok(()),
        Some(t) => Err(Error::validation(format!(
            "unsupported format tag {t:?}, expected {FORMAT_TAG:?}"
        ))),
    }
}

// ------------------------------------------------------------ cohomology

/// `H^q` for every degree as an abstract group.
pub fn cohomology_groups(c: &IntCochainComplex) -> Vec<AbelianGroup> {
    let n = c.ranks.len();
    let factors: Vec<Vec<BigInt>> = c.differentials.iter().map(invariant_factors).collect();
    (0..n)
        .map(|q| {
            let rank_out = if q < factors.len() { factors[q].len() } else { 0 };
            let (rank_in, tors) = if q > 0 {
                let f = &factors[q - 1];
                (f.len(), f.iter().filter(|x| !x.is_one()).cloned().collect())
            } else {
                (0, Vec::new())
            };
            AbelianGroup { free_rank: c.ranks[q] - rank_out - rank_in, torsion_factors: tors }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCohomology {
    pub degree: usize,
    pub free_rank: usize,
    #[serde(with = "crate::io::bigint_vec")]
    pub torsion_factors: Vec<BigInt>,
    #[serde(with = "crate::io::bigint_str")]
    pub torsion_order: BigInt,
    /// ln |H^q_tors| as a decimal string.
    pub log_torsion: String,
}

impl DegreeCohomology {
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup { free_rank: self.free_rank, torsion_factors: self.torsion_factors.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub format: String,
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyReport {
    pub fn from_groups(groups: &[AbelianGroup], ctx: &mut Ctx) -> Self {
        let degrees = groups
            .iter()
            .enumerate()
            .map(|(q, g)| {
                let order = g.torsion_order();
                let l = ctx.ln_int(&order);
                DegreeCohomology {
                    degree: q,
                    free_rank: g.free_rank,
                    torsion_factors: g.torsion_factors.clone(),
                    torsion_order: order,
                    log_torsion: ctx.fmt(&l),
                }
            })
            .collect();
        CohomologyReport { format: FORMAT_TAG.into(), degrees }
    }

    pub fn free_ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.free_rank).collect()
    }

    pub fn torsion_orders(&self) -> Vec<BigInt> {
        self.degrees.iter().map(|d| d.torsion_order.clone()).collect()
    }

    /// Internal consistency: orders are the products of the factors and the
    /// factors form a divisibility chain of integers > 1.
    pub fn validate(&self) -> Result<()> {
        for d in &self.degrees {
            if d.torsion_factors.iter().any(|f| f <= &BigInt::one()) {
                return Err(Error::validation(format!("degree {}: invariant factors must exceed 1", d.degree)));
            }
            if d.torsion_factors.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
                return Err(Error::validation(format!("degree {}: factors do not form a divisibility chain", d.degree)));
            }
            if d.torsion_factors.iter().product::<BigInt>() != d.torsion_order {
                return Err(Error::validation(format!("degree {}: torsion order is not the product of the factors", d.degree)));
            }
        }
        Ok(())
    }
}

pub fn cohomology(c: &IntCochainComplex, ctx: &mut Ctx) -> CohomologyReport {
    CohomologyReport::from_groups(&cohomology_groups(c), ctx)
}

// ------------------------------------------------------------- Laplacians

/// Per-degree inner products on the cochain spaces; `None` means the standard one.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InnerProducts(pub Option<Vec<RationalMatrix>>);

impl InnerProducts {
    pub fn standard() -> Self {
        InnerProducts(None)
    }

    pub fn at(&self, c: &IntCochainComplex, q: isize) -> RationalMatrix {
        let r = c.rank_at(q);
        match &self.0 {
            Some(ps) if q >= 0 && (q as usize) < ps.len() => ps[q as usize].clone(),
            _ => RationalMatrix::identity(r),
        }
    }

    pub fn validate(&self, c: &IntCochainComplex) -> Result<()> {
        if let Some(ps) = &self.0 {
            if ps.len() != c.ranks.len() {
                return Err(Error::validation(format!(
                    "{} inner products given for {} degrees",
                    ps.len(),
                    c.ranks.len()
                )));
            }
            for (q, p) in ps.iter().enumerate() {
                if p.rows() != c.ranks[q] || !p.is_square() {
                    return Err(Error::validation(format!("inner product {q} has the wrong size")));
                }
                if !is_positive_definite(p) {
                    return Err(Error::validation(format!("inner product {q} is not positive definite")));
                }
            }
        }
        Ok(())
    }

    fn det_at(&self, q: usize) -> Result<BigRational> {
        match &self.0 {
            Some(ps) => rat::determinant(&ps[q]),
            None => Ok(BigRational::one()),
        }
    }
}

/// Adjoint of `d_q` with respect to the inner products: `P_q^{-1} d_q^T P_{q+1}`.
fn adjoint(c: &IntCochainComplex, ip: &InnerProducts, q: isize) -> Result<RationalMatrix> {
    let d = c.d(q).to_rational();
    let pq = ip.at(c, q);
    let pq1 = ip.at(c, q + 1);
    let dt = &d.transpose() * &pq1;
    if pq.rows() == 0 {
        return Ok(dt);
    }
    Ok(&rat::inverse(&pq)? * &dt)
}

/// `Δ_q = d_q^† d_q + d_{q−1} d_{q−1}^†`.
pub fn combinatorial_laplacian(
    c: &IntCochainComplex,
    q: usize,
    ip: &InnerProducts,
) -> Result<RationalMatrix> {
    if q >= c.ranks.len() {
        return Err(Error::validation(format!(
            "degree {q} is outside the complex (degrees 0..={})",
            c.length()
        )));
    }
    ip.validate(c)?;
    let qi = q as isize;
    let up = &adjoint(c, ip, qi)? * &c.d(qi).to_rational();
    let down = &c.d(qi - 1).to_rational() * &adjoint(c, ip, qi - 1)?;
    Ok(&up + &down)
}

/// Columns: a basis of the harmonic space `ker Δ_q`.
pub fn harmonic_basis(c: &IntCochainComplex, q: usize, ip: &InnerProducts) -> Result<RationalMatrix> {
    Ok(rat::nullspace(&combinatorial_laplacian(c, q, ip)?))
}

/// Orthogonal projection onto the harmonic space in degree q.
fn harmonic_projector(c: &IntCochainComplex, q: usize, ip: &InnerProducts) -> Result<RationalMatrix> {
    let h = harmonic_basis(c, q, ip)?;
    let p = ip.at(c, q as isize);
    if h.cols() == 0 {
        return Ok(RationalMatrix::zeros(p.rows(), p.rows()));
    }
    let ht_p = &h.transpose() * &p;
    let g = &ht_p * &h;
    Ok(&(&h * &rat::inverse(&g)?) * &ht_p)
}

/// Columns: a ℤ-basis of `H^q_free`, realized as harmonic projections of integral cocycles.
pub fn free_lattice_basis(c: &IntCochainComplex, q: usize, ip: &InnerProducts) -> Result<RationalMatrix> {
    let z = kernel_basis(&c.d(q as isize));
    let proj = &harmonic_projector(c, q, ip)? * &z.to_rational();
    let basis = rational_lattice_basis(&proj);
    Ok(basis)
}

/// Gram matrix `Λ_q` of a ℤ-basis of `H^q_free` in the harmonic inner product.
pub fn lattice_gram(c: &IntCochainComplex, q: usize, ip: &InnerProducts) -> Result<RationalMatrix> {
    let b = free_lattice_basis(c, q, ip)?;
    let p = ip.at(c, q as isize);
    Ok(&(&b.transpose() * &p) * &b)
}

// ---------------------------------------------------------- volume data

/// Gram matrices of chosen bases of `H^q(C ⊗ ℝ)` in the harmonic inner product.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeData {
    pub grams: Vec<RationalMatrix>,
    /// The chosen bases generate `H^q_free` as lattices.
    pub lattice_basis: bool,
    pub inner: InnerProducts,
}

impl VolumeData {
    pub fn new(grams: Vec<RationalMatrix>, lattice_basis: bool) -> Self {
        VolumeData { grams, lattice_basis, inner: InnerProducts::standard() }
    }

    pub fn with_inner(mut self, inner: InnerProducts) -> Self {
        self.inner = inner;
        self
    }

    /// Lattice bases of `H^q_free` for every degree.
    pub fn lattice(c: &IntCochainComplex, inner: &InnerProducts) -> Result<Self> {
        let grams = (0..c.ranks.len())
            .map(|q| lattice_gram(c, q, inner))
            .collect::<Result<Vec<_>>>()?;
        Ok(VolumeData { grams, lattice_basis: true, inner: inner.clone() })
    }

    /// Orthonormal harmonic bases (every Gram the identity).
    pub fn orthonormal(c: &IntCochainComplex) -> Self {
        let grams = cohomology_groups(c).iter().map(|g| RationalMatrix::identity(g.free_rank)).collect();
        VolumeData::new(grams, false)
    }

    fn gram_det(&self, q: usize) -> Result<BigRational> {
        match self.grams.get(q) {
            Some(g) => rat::determinant(g),
            None => Ok(BigRational::one()),
        }
    }

    pub fn validate(&self, c: &IntCochainComplex) -> Result<()> {
        self.inner.validate(c)?;
        if self.grams.len() != c.ranks.len() {
            return Err(Error::validation(format!(
                "{} Gram matrices given for {} degrees",
                self.grams.len(),
                c.ranks.len()
            )));
        }
        let groups = cohomology_groups(c);
        for (q, (g, h)) in self.grams.iter().zip(&groups).enumerate() {
            if !g.is_square() || g.rows() != h.free_rank {
                return Err(Error::validation(format!(
                    "Gram matrix {q} is {}x{} but rk H^{q} = {}",
                    g.rows(),
                    g.cols(),
                    h.free_rank
                )));
            }
            if !is_positive_definite(g) {
                return Err(Error::validation(format!("Gram matrix {q} is singular or not positive definite")));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct VolumeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    grams: Vec<MatrixJson>,
    lattice_basis: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inner_products: Option<Vec<MatrixJson>>,
}

impl Serialize for VolumeData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VolumeFile {
            format: Some(FORMAT_TAG.into()),
            grams: self.grams.iter().map(MatrixJson::from).collect(),
            lattice_basis: self.lattice_basis,
            inner_products: self.inner.0.as_ref().map(|v| v.iter().map(MatrixJson::from).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VolumeData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = VolumeFile::deserialize(d)?;
        let conv = |ms: &[MatrixJson]| ms.iter().map(|m| m.to_rational()).collect::<Result<Vec<_>>>();
        check_format(f.format.as_deref()).map_err(serde::de::Error::custom)?;
        let grams = conv(&f.grams).map_err(serde::de::Error::custom)?;
        let inner = match &f.inner_products {
            Some(v) => Some(conv(v).map_err(serde::de::Error::custom)?),
            None => None,
        };
        Ok(VolumeData { grams, lattice_basis: f.lattice_basis, inner: InnerProducts(inner) })
    }
}

// --------------------------------------------------------------- torsion

fn pow_signed(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

fn sign(j: usize) -> i64 {
    if j % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Reidemeister torsion from combinatorial Laplacians:
/// `τ² = Π_q (det P_q)^{(−1)^q} · Π_j (det G_j)^{(−1)^{j+1}} · Π_j (det′Δ_j)^{(−1)^{j+1} j}`.
pub fn rt_laplacian(c: &IntCochainComplex, vol: &VolumeData) -> Result<SqrtRational> {
    vol.validate(c)?;
    let mut sq = BigRational::one();
    for q in 0..c.ranks.len() {
        let dp = vol.inner.det_at(q)?;
        sq *= pow_signed(&dp, sign(q));
        let dg = vol.gram_det(q)?;
        if dg.is_zero() {
            return Err(Error::validation(format!("Gram matrix {q} is singular")));
        }
        sq *= pow_signed(&dg, -sign(q));
        if q > 0 {
            let lap = combinatorial_laplacian(c, q, &vol.inner)?;
            let dpr = det_prime_unchecked(&lap)?;
            sq *= pow_signed(&dpr, -sign(q) * q as i64);
        }
    }
    SqrtRational::sqrt_of(sq)
}

/// `R(μ_j) = √(det Λ_j / det G_j)`, the covolume of `H^j_free` in the volume form of μ_j.
pub fn lattice_covolume(c: &IntCochainComplex, vol: &VolumeData, q: usize) -> Result<SqrtRational> {
    let lam = rat::determinant(&lattice_gram(c, q, &vol.inner)?)?;
    let g = vol.gram_det(q)?;
    if vol.lattice_basis {
        if lam != g {
            return Err(Error::validation(format!(
                "degree {q}: Gram determinant {g} differs from the lattice covolume {lam}, so the basis does not generate H^{q}_free"
            )));
        }
        return Ok(SqrtRational::one());
    }
    SqrtRational::sqrt_of(lam / g)
}

/// Torsion from cohomology: `τ = Π_j R(μ_j)^{(−1)^j} · Π_j |H^j_tors|^{(−1)^{j+1}}`.
pub fn rt_arithmetic(c: &IntCochainComplex, vol: &VolumeData) -> Result<SqrtRational> {
    vol.validate(c)?;
    let groups = cohomology_groups(c);
    let mut acc = SqrtRational::one();
    for (j, g) in groups.iter().enumerate() {
        let r = lattice_covolume(c, vol, j)?;
        acc = acc.mul(&r.powi(sign(j))?);
        let t = SqrtRational::from_int(&g.torsion_order());
        acc = acc.mul(&t.powi(-sign(j))?);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionIdentityReport {
    pub format: String,
    pub lhs: SqrtRational,
    pub rhs: SqrtRational,
    pub lhs_decimal: String,
    pub rhs_decimal: String,
    pub equal: bool,
}

/// Both torsion computations side by side; equality is exact.
pub fn check_torsion_identity(
    c: &IntCochainComplex,
    vol: &VolumeData,
    ctx: &mut Ctx,
) -> Result<TorsionIdentityReport> {
    let lhs = rt_laplacian(c, vol)?;
    let rhs = rt_arithmetic(c, vol)?;
    Ok(TorsionIdentityReport {
        format: FORMAT_TAG.into(),
        lhs_decimal: lhs.to_decimal(ctx),
        rhs_decimal: rhs.to_decimal(ctx),
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

/// `R(𝓜) = Π_p R_p^{(−1)^p}` with `R_p = √det G_p`.
pub fn regulator(vol: &VolumeData) -> Result<SqrtRational> {
    let mut acc = SqrtRational::one();
    for (p, g) in vol.grams.iter().enumerate() {
        if !is_positive_definite(g) {
            return Err(Error::validation(format!("Gram matrix {p} is singular or not positive definite")));
        }
        let rp = SqrtRational::sqrt_of(rat::determinant(g)?)?;
        acc = acc.mul(&rp.powi(sign(p))?);
    }
    Ok(acc)
}

// ------------------------------------------------------ representations

/// Integral representation of a finitely presented group on ℤ^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRepZ {
    generators: Vec<IntMatrix>,
    relators: Vec<Word>,
    unimodular: bool,
}

impl GroupRepZ {
    pub fn new(generators: Vec<IntMatrix>, relators: Vec<Word>, unimodular: bool) -> Result<Self> {
        let m = generators.first().map_or(0, |g| g.rows());
        for (i, g) in generators.iter().enumerate() {
            if !g.is_square() || g.rows() != m {
                return Err(Error::validation(format!(
                    "generator {i} is {}x{}, expected {m}x{m}",
                    g.rows(),
                    g.cols()
                )));
            }
            if unimodular && determinant(g)?.abs() != BigInt::one() {
                return Err(Error::validation(format!("generator {i} does not have determinant ±1")));
            }
        }
        let rep = GroupRepZ { generators, relators, unimodular };
        rep.check_relators()?;
        Ok(rep)
    }

    pub fn from_generators(generators: Vec<IntMatrix>) -> Result<Self> {
        GroupRepZ::new(generators, Vec::new(), false)
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map_or(0, |g| g.rows())
    }

    pub fn check_relators(&self) -> Result<()> {
        let mut ev = IntEvaluator::new(&self.generators);
        let names = default_names(self.generators.len());
        for r in &self.relators {
            let v = ev.eval(r)?;
            if v != IntMatrix::identity(self.dim()) {
                return Err(Error::validation(format!(
                    "relator {} does not evaluate to the identity",
                    r.format(&names)
                )));
            }
        }
        Ok(())
    }

    /// Generators as `g − I`.
    pub fn augmentation_blocks(&self) -> Vec<IntMatrix> {
        self.generators.iter().map(|g| g.minus_identity()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct RepFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    generators: Vec<MatrixJson>,
    #[serde(default)]
    relators: Vec<String>,
    #[serde(default)]
    unimodular: bool,
}

impl Serialize for GroupRepZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let names = default_names(self.generators.len());
        RepFile {
            format: Some(FORMAT_TAG.into()),
            generators: self.generators.iter().map(MatrixJson::from).collect(),
            relators: self.relators.iter().map(|w| w.format(&names)).collect(),
            unimodular: self.unimodular,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupRepZ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = RepFile::deserialize(d)?;
        let e = serde::de::Error::custom;
        check_format(f.format.as_deref()).map_err(e)?;
        let gens = f.generators.iter().map(|m| m.to_int()).collect::<Result<Vec<_>>>().map_err(e)?;
        let names = default_names(gens.len());
        let rels = f
            .relators
            .iter()
            .map(|w| Word::parse(w, &names))
            .collect::<Result<Vec<_>>>()
            .map_err(e)?;
        GroupRepZ::new(gens, rels, f.unimodular).map_err(e)
    }
}

/// `M_Γ = M / Σ_i (g_i − 1) M`.
pub fn coinvariants(rep: &GroupRepZ) -> AbelianGroup {
    let m = rep.dim();
    if rep.generators.is_empty() {
        return AbelianGroup { free_rank: m, torsion_factors: Vec::new() };
    }
    let stacked = IntMatrix::hstack(&rep.augmentation_blocks(), m).expect("equal sizes");
    smith::cokernel_invariants(&stacked, m).expect("row count matches")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Invariants {
    /// rank of `M^Γ` for M = ℤ^m
    Integral { free_rank: usize },
    /// order of `(M/N M)^Γ`
    Modular {
        #[serde(with = "crate::io::bigint_str")]
        modulus: BigInt,
        #[serde(with = "crate::io::bigint_str")]
        order: BigInt,
    },
}

/// Γ-invariants of ℤ^m, or of (ℤ/N)^m when a modulus is given.
pub fn invariants(rep: &GroupRepZ, modulus: Option<&BigInt>) -> Result<Invariants> {
    let m = rep.dim();
    let stacked = if rep.generators.is_empty() {
        IntMatrix::zeros(0, m)
    } else {
        IntMatrix::vstack(&rep.augmentation_blocks(), m)?
    };
    let factors = invariant_factors(&stacked);
    match modulus {
        None => Ok(Invariants::Integral { free_rank: m - factors.len() }),
        Some(n) => {
            if n < &BigInt::from(2) {
                return Err(Error::validation(format!("modulus must be at least 2, got {n}")));
            }
            // ker of A on (ℤ/N)^m has order Π_j gcd(s_j, N), s_j = 0 past the rank
            let mut order = BigInt::one();
            for j in 0..m {
                order *= match factors.get(j) {
                    Some(s) => s.gcd(n),
                    None => n.clone(),
                };
            }
            Ok(Invariants::Modular { modulus: n.clone(), order })
        }
    }
}
