//! Twisted cochain complexes of manifolds from `.tcx` specifications.
//!
//! A spec carries a presentation of Γ, cell counts and coboundary matrices
//! whose entries live in ℤ[Γ]. Evaluating at an integral representation
//! ρ: Γ → GL(M) replaces each entry Σ n_w·w by the block Σ n_w·ρ(w) and yields
//! an [`IntCochainComplex`].

mod sweep;

pub use sweep::{
    fit_quadratic, sym_family, torsion_sweep, QuadraticFit, SweepReport, SweepRow, VolumeTarget,
    VOLUME_CONSTANT,
};

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{
    check_format, coinvariants, cohomology_groups, GroupRepZ, IntCochainComplex,
};
use crate::io::{rational_to_string, FORMAT_TAG};
use crate::linalg::{determinant, rational, AbelianGroup, IntMatrix, Matrix};
use crate::numeric::Ctx;
use crate::ring::{format_quad, parse_quad, QuadElem, QuadraticIntegers};
use crate::sympow::{rho_mn_integral, saturate_stable_lattice, sym_pow_int, SaturationOptions};
use crate::words::{IntEvaluator, Word};

/// Σ n_w·w with distinct words and nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElem(pub Vec<(BigInt, Word)>);

impl GroupRingElem {
    pub fn from_terms(terms: impl IntoIterator<Item = (BigInt, Word)>) -> Self {
        let mut out: Vec<(BigInt, Word)> = Vec::new();
        for (c, w) in terms {
            match out.iter_mut().find(|(_, v)| *v == w) {
                Some((d, _)) => *d += c,
                None => out.push((c, w)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        GroupRingElem(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Matrix over ℤ[Γ], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<GroupRingElem>,
}

impl GroupRingMatrix {
    pub fn get(&self, i: usize, j: usize) -> &GroupRingElem {
        &self.entries[i * self.cols + j]
    }
}

/// SL₂ matrices per generator over ℤ (d = 0) or an imaginary quadratic ring.
#[derive(Clone, PartialEq, Eq)]
pub struct BaseRepresentation {
    pub field: i64,
    pub matrices: Vec<Matrix<QuadElem>>,
}

impl std::fmt::Debug for BaseRepresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ms: Vec<Vec<String>> = self.matrices.iter().map(|m| m.entries().iter().map(format_quad).collect()).collect();
        f.debug_struct("BaseRepresentation").field("field", &self.field).field("matrices", &ms).finish()
    }
}

impl BaseRepresentation {
    /// Integral matrices of Sym^n of every generator; realified over (1, ω)
    /// when the base ring is quadratic.
    pub fn sym_generators(&self, n: usize) -> Result<Vec<IntMatrix>> {
        if self.field == 0 {
            self.matrices
                .iter()
                .map(|m| {
                    let z = m.map(|x| x.u.to_integer());
                    sym_pow_int(&z, n)
                })
                .collect()
        } else {
            let o = QuadraticIntegers::new(self.field)?;
            self.matrices.iter().map(|m| rho_mn_integral(&o, m, n, 0)).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplexSpec {
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub cells: Vec<usize>,
    pub boundaries: Vec<GroupRingMatrix>,
    /// Decimal string, positive.
    pub known_volume: Option<String>,
    pub oriented: bool,
    pub closed: bool,
    pub base_representation: Option<BaseRepresentation>,
}

// ---------------------------------------------------------------- file format

#[derive(Deserialize)]
#[serde(untagged)]
enum IntText {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumText {
    Num(serde_json::Number),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    coeff: IntText,
    word: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseFile {
    #[serde(default)]
    field: i64,
    matrices: Vec<Vec<Vec<String>>>,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(default)]
    format: Option<String>,
    name: String,
    dimension: usize,
    generators: Vec<String>,
    #[serde(default)]
    relators: Vec<String>,
    cells: Vec<usize>,
    boundaries: Vec<Vec<Vec<Vec<TermFile>>>>,
    #[serde(default)]
    known_volume: Option<NumText>,
    #[serde(default = "yes")]
    oriented: bool,
    #[serde(default = "yes")]
    closed: bool,
    #[serde(default)]
    base_representation: Option<BaseFile>,
}

fn located(at: &str, e: Error) -> Error {
    match e {
        Error::Validation(m) => Error::Validation(format!("{at}: {m}")),
        other => other,
    }
}

fn parse_names(gens: &[String]) -> Result<()> {
    for (i, g) in gens.iter().enumerate() {
        let bad = g.is_empty()
            || g == "1"
            || g == "e"
            || g.contains(|c: char| c.is_whitespace() || c == '^');
        if bad {
            return Err(Error::validation(format!("generators[{i}]: invalid generator name {g:?}")));
        }
        if gens[..i].contains(g) {
            return Err(Error::validation(format!("generators[{i}]: duplicate generator name {g:?}")));
        }
    }
    Ok(())
}

fn parse_matrix_entries(q: usize, rows: &[Vec<Vec<TermFile>>], names: &[String]) -> Result<Vec<GroupRingElem>> {
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let mut terms = Vec::new();
            for (t, term) in entry.iter().enumerate() {
                let at = format!("boundaries[{q}][{i}][{j}] term {t}");
                let c = match &term.coeff {
                    IntText::Int(v) => BigInt::from(*v),
                    IntText::Text(s) => crate::io::parse_bigint(s).map_err(|e| located(&at, e))?,
                };
                let w = Word::parse(&term.word, names).map_err(|e| located(&at, e))?;
                terms.push((c, w));
            }
            out.push(GroupRingElem::from_terms(terms));
        }
    }
    Ok(out)
}

impl TwistedComplexSpec {
    /// Parse and validate `.tcx` text.
    pub fn parse(text: &str) -> Result<Self> {
        let f: SpecFile = serde_json::from_str(text)
            .map_err(|e| Error::validation(format!("syntax error at line {} column {}: {e}", e.line(), e.column())))?;
        check_format(f.format.as_deref())?;
        parse_names(&f.generators)?;
        if f.cells.len() != f.dimension + 1 {
            return Err(Error::validation(format!(
                "cells: dimension {} needs {} counts, got {}",
                f.dimension,
                f.dimension + 1,
                f.cells.len()
            )));
        }
        if f.boundaries.len() != f.dimension {
            return Err(Error::validation(format!(
                "boundaries: dimension {} needs {} matrices, got {}",
                f.dimension,
                f.dimension,
                f.boundaries.len()
            )));
        }
        let relators = f
            .relators
            .iter()
            .enumerate()
            .map(|(i, r)| Word::parse(r, &f.generators).map_err(|e| located(&format!("relators[{i}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        let mut boundaries = Vec::new();
        for (q, rows) in f.boundaries.iter().enumerate() {
            let (r, c) = (f.cells[q + 1], f.cells[q]);
            if rows.len() != r {
                return Err(Error::validation(format!(
                    "boundaries[{q}]: expected {r} rows (cells in degree {}), got {}",
                    q + 1,
                    rows.len()
                )));
            }
            if let Some(i) = rows.iter().position(|row| row.len() != c) {
                return Err(Error::validation(format!(
                    "boundaries[{q}][{i}]: expected {c} entries (cells in degree {q}), got {}",
                    rows[i].len()
                )));
            }
            let entries = parse_matrix_entries(q, rows, &f.generators)?;
            boundaries.push(GroupRingMatrix { rows: r, cols: c, entries });
        }
        let known_volume = match f.known_volume {
            None => None,
            Some(v) => {
                let s = match v {
                    NumText::Num(n) => n.to_string(),
                    NumText::Text(s) => s.trim().to_string(),
                };
                let x: f64 = s
                    .parse()
                    .map_err(|_| Error::validation(format!("known_volume: not a decimal number: {s:?}")))?;
                if !(x > 0.0 && x.is_finite()) {
                    return Err(Error::validation(format!("known_volume must be positive, got {s}")));
                }
                Some(s)
            }
        };
        let base_representation = match f.base_representation {
            None => None,
            Some(b) => Some(parse_base(b, f.generators.len())?),
        };
        let spec = TwistedComplexSpec {
            name: f.name,
            dimension: f.dimension,
            generators: f.generators,
            relators,
            cells: f.cells,
            boundaries,
            known_volume,
            oriented: f.oriented,
            closed: f.closed,
            base_representation,
        };
        spec.probe()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        TwistedComplexSpec::parse(&text).map_err(|e| located(&path.display().to_string(), e))
    }

    /// Σ(−1)^q cells_q.
    pub fn cell_euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(q, &c)| if q % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.format(&self.generators)
    }

    /// Representations checked at parse time: the trivial one on ℤ, up to
    /// three sign characters that kill the relators, and the base
    /// representation when present.
    pub fn probe_representations(&self) -> Result<Vec<(String, GroupRepZ)>> {
        let n = self.generators.len();
        let mut out = Vec::new();
        let sign = |pattern: &[bool]| -> Result<GroupRepZ> {
            let gens = pattern.iter().map(|&neg| IntMatrix::from_i64_rows(&[&[if neg { -1 } else { 1 }]])).collect();
            GroupRepZ::new(gens, Vec::new(), true)
        };
        out.push(("trivial".to_string(), sign(&vec![false; n])?));
        let mut rng = ChaCha8Rng::seed_from_u64(0x7463_7800);
        let mut seen = vec![vec![false; n]];
        for _ in 0..32 {
            if out.len() >= 4 || n == 0 {
                break;
            }
            let pattern: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            if seen.contains(&pattern) {
                continue;
            }
            seen.push(pattern.clone());
            let kills = self.relators.iter().all(|r| {
                r.0.iter().filter(|(g, e)| pattern[*g] && e % 2 != 0).count() % 2 == 0
            });
            if kills {
                let label = format!(
                    "sign character ({})",
                    pattern.iter().map(|&b| if b { "-1" } else { "1" }).collect::<Vec<_>>().join(", ")
                );
                out.push((label, sign(&pattern)?));
            }
        }
        if self.base_representation.is_some() {
            out.push(("base representation".to_string(), self.base_rep(1)?));
        }
        Ok(out)
    }

    fn probe(&self) -> Result<()> {
        for (label, rep) in self.probe_representations()? {
            evaluate(self, &rep).map_err(|e| located(&format!("under the {label}"), e))?;
        }
        Ok(())
    }

    /// Sym^n of the base representation as an integral representation.
    pub fn base_rep(&self, n: usize) -> Result<GroupRepZ> {
        let b = self
            .base_representation
            .as_ref()
            .ok_or_else(|| Error::validation(format!("spec {:?} has no base_representation", self.name)))?;
        let gens = b.sym_generators(n)?;
        self.check_killed(&gens)?;
        GroupRepZ::new(gens, self.relators.clone(), true)
    }

    pub fn check_killed(&self, gens: &[IntMatrix]) -> Result<()> {
        if gens.len() != self.generators.len() {
            return Err(Error::validation(format!(
                "representation has {} generators, spec {:?} has {}",
                gens.len(),
                self.name,
                self.generators.len()
            )));
        }
        let dim = gens.first().map_or(0, |g| g.rows());
        let mut ev = IntEvaluator::new(gens);
        for r in &self.relators {
            if ev.eval(r)? != IntMatrix::identity(dim) {
                return Err(Error::validation(format!(
                    "relator {} is not killed by the representation",
                    self.format_word(r)
                )));
            }
        }
        Ok(())
    }
}

fn parse_base(b: BaseFile, n: usize) -> Result<BaseRepresentation> {
    if b.matrices.len() != n {
        return Err(Error::validation(format!(
            "base_representation: {} matrices for {n} generators",
            b.matrices.len()
        )));
    }
    let o = if b.field == 0 { None } else { Some(QuadraticIntegers::new(b.field)?) };
    let mut matrices = Vec::new();
    for (i, m) in b.matrices.iter().enumerate() {
        let at = format!("base_representation.matrices[{i}]");
        if m.len() != 2 || m.iter().any(|r| r.len() != 2) {
            return Err(Error::validation(format!("{at}: expected a 2x2 matrix")));
        }
        let mut data = Vec::new();
        for s in m.iter().flatten() {
            let x = parse_quad(s).map_err(|e| located(&at, e))?;
            let ok = match &o {
                None => x.is_rational() && x.u.is_integer(),
                Some(o) => o.coords(&x).is_some(),
            };
            if !ok {
                return Err(Error::validation(format!("{at}: entry {s:?} is not integral")));
            }
            data.push(x);
        }
        matrices.push(Matrix::from_vec(2, 2, data)?);
    }
    Ok(BaseRepresentation { field: b.field, matrices })
}

// ----------------------------------------------------------------- evaluation

/// Σ n_w ρ(w) blockwise; ρ must kill the relators and the result must satisfy d∘d = 0.
pub fn evaluate(spec: &TwistedComplexSpec, rep: &GroupRepZ) -> Result<IntCochainComplex> {
    spec.check_killed(rep.generators())?;
    let m = rep.dim();
    let mut ev = IntEvaluator::new(rep.generators());
    let mut cache: HashMap<Word, IntMatrix> = HashMap::new();
    let mut diffs = Vec::with_capacity(spec.boundaries.len());
    for b in &spec.boundaries {
        let mut d = IntMatrix::zeros(b.rows * m, b.cols * m);
        for i in 0..b.rows {
            for j in 0..b.cols {
                for (c, w) in &b.get(i, j).0 {
                    if !cache.contains_key(w) {
                        let v = ev.eval(w)?;
                        cache.insert(w.clone(), v);
                    }
                    let v = &cache[w];
                    for r in 0..m {
                        for s in 0..m {
                            *d.get_mut(i * m + r, j * m + s) += c * v.get(r, s);
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    let ranks = spec.cells.iter().map(|c| c * m).collect();
    IntCochainComplex::new(ranks, diffs)
}

/// Σ(−1)^q rank C^q = dim V · Σ(−1)^q cells_q, and the cell sum vanishes for
/// closed odd-dimensional specs.
pub fn euler_check(spec: &TwistedComplexSpec, complex: &IntCochainComplex) -> bool {
    let m = if spec.cells.iter().any(|&c| c > 0) {
        let (q, c) = spec.cells.iter().enumerate().find(|(_, &c)| c > 0).unwrap();
        (complex.ranks().get(q).copied().unwrap_or(0) / c) as i64
    } else {
        0
    };
    let chi = spec.cell_euler_characteristic();
    let ranks_ok = complex.euler_characteristic() == m * chi;
    let cells_ok = !(spec.closed && spec.dimension % 2 == 1) || chi == 0;
    ranks_ok && cells_ok
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopDegreeReport {
    pub format: String,
    pub degree: usize,
    pub top: AbelianGroup,
    pub coinvariants: AbelianGroup,
    pub agree: bool,
}

/// Top cohomology against M_Γ.
pub fn h3_cross_check(spec: &TwistedComplexSpec, rep: &GroupRepZ) -> Result<TopDegreeReport> {
    if !spec.closed || !spec.oriented {
        return Err(Error::validation(format!(
            "spec {:?} must be closed and oriented for the top-degree comparison",
            spec.name
        )));
    }
    let c = evaluate(spec, rep)?;
    let top = cohomology_groups(&c).pop().expect("at least one degree");
    let co = coinvariants(rep);
    Ok(TopDegreeReport {
        format: FORMAT_TAG.into(),
        degree: spec.dimension,
        agree: top == co,
        top,
        coinvariants: co,
    })
}

/// Π_p |H^p_tors|^{(−1)^p}.
pub fn alternating_torsion(groups: &[AbelianGroup]) -> BigRational {
    let mut r = BigRational::one();
    for (p, g) in groups.iter().enumerate() {
        let o = BigRational::from_integer(g.torsion_order());
        r = if p % 2 == 0 { r * o } else { r / o };
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub format: String,
    #[serde(with = "crate::io::bigint_str")]
    pub index: BigInt,
    pub groups: Vec<AbelianGroup>,
    pub sub_groups: Vec<AbelianGroup>,
    /// Π_p |H^p|^{(−1)^p} for M and M′, exact.
    pub product: String,
    pub sub_product: String,
    pub alternating_sum: String,
    pub sub_alternating_sum: String,
    pub rationally_acyclic: bool,
    pub equal: bool,
}

/// Integral matrices of ρ restricted to the sublattice spanned by the columns of `basis`.
pub fn restrict_to_sublattice(rep: &GroupRepZ, basis: &IntMatrix) -> Result<GroupRepZ> {
    let n = rep.dim();
    if basis.rows() != n || basis.cols() != n {
        return Err(Error::validation(format!("sublattice basis must be {n}x{n}")));
    }
    let s = basis.to_rational();
    let inv = rational::inverse(&s).map_err(|_| Error::validation("sublattice basis is singular"))?;
    let gens = rep
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            (&(&inv * &g.to_rational()) * &s)
                .to_integer()
                .ok_or_else(|| Error::validation(format!("sublattice is not stable under generator {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    GroupRepZ::new(gens, rep.relators().to_vec(), rep.is_unimodular())
}

/// A finite-index stable sublattice: the closure under ρ of N·ℤ^n and one
/// random vector with entries in [0, N). Columns are a basis.
pub fn random_stable_sublattice(rep: &GroupRepZ, modulus: u64, seed: u64) -> Result<IntMatrix> {
    let n = rep.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..modulus.max(1) as i64)).collect();
    let start = IntMatrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            if i == j { BigInt::from(modulus) } else { BigInt::zero() }
        } else {
            BigInt::from(v[i])
        }
    });
    let gens: Vec<_> = rep.generators().iter().map(|g| g.to_rational()).collect();
    let m = saturate_stable_lattice(&gens, &start.to_rational(), &SaturationOptions::default())?;
    m.to_integer().ok_or_else(|| Error::computation("closure of an integral lattice is not integral"))
}

/// Alternating sums of ln|H^p| for M = ℤ^n and for M′ = basis·ℤ^n.
pub fn lattice_independence_check(
    spec: &TwistedComplexSpec,
    rep: &GroupRepZ,
    basis: &IntMatrix,
    ctx: &mut Ctx,
) -> Result<LatticeReport> {
    let sub = restrict_to_sublattice(rep, basis)?;
    let index = determinant(basis)?.abs();
    let groups = cohomology_groups(&evaluate(spec, rep)?);
    let sub_groups = cohomology_groups(&evaluate(spec, &sub)?);
    let a = alternating_torsion(&groups);
    let b = alternating_torsion(&sub_groups);
    let la = ctx.ln_rational(&a);
    let lb = ctx.ln_rational(&b);
    Ok(LatticeReport {
        format: FORMAT_TAG.into(),
        index,
        rationally_acyclic: groups.iter().all(|g| g.free_rank == 0),
        equal: a == b,
        product: rational_to_string(&a),
        sub_product: rational_to_string(&b),
        alternating_sum: ctx.fmt(&la),
        sub_alternating_sum: ctx.fmt(&lb),
        groups,
        sub_groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;

    const CIRCLE: &str = r#"{"format":"tl-1","name":"circle","dimension":1,"generators":["t"],
        "cells":[1,1],"boundaries":[[[[{"coeff":1,"word":"t"},{"coeff":-1,"word":"1"}]]]]}"#;

    fn rep1(v: i64) -> GroupRepZ {
        GroupRepZ::new(vec![IntMatrix::from_i64_rows(&[&[v]])], Vec::new(), true).unwrap()
    }

    #[test]
    fn circle_examples() {
        let s = TwistedComplexSpec::parse(CIRCLE).unwrap();
        assert_eq!(s.name, "circle");
        let c = evaluate(&s, &rep1(-1)).unwrap();
        assert_eq!(c.differentials()[0], IntMatrix::from_i64_rows(&[&[-2]]));
        let h = cohomology_groups(&c);
        assert!(h[0].is_trivial());
        assert_eq!(h[1].torsion_factors, vec![BigInt::from(2)]);
        let h = cohomology_groups(&evaluate(&s, &rep1(1)).unwrap());
        assert_eq!((h[0].free_rank, h[1].free_rank), (1, 1));
        let a = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let rep = GroupRepZ::new(vec![a.clone()], Vec::new(), true).unwrap();
        let c = evaluate(&s, &rep).unwrap();
        assert_eq!(c.differentials()[0], a.minus_identity());
        assert_eq!(determinant(&a.minus_identity()).unwrap().abs(), BigInt::one());
        assert!(cohomology_groups(&c).iter().all(|g| g.is_trivial()));
        assert!(euler_check(&s, &c));
        let top = h3_cross_check(&s, &rep1(-1)).unwrap();
        assert!(top.agree);
        assert_eq!(top.coinvariants.torsion_factors, vec![BigInt::from(2)]);
    }

    #[test]
    fn parse_errors_are_located() {
        let bad_cells = CIRCLE.replace("[1,1]", "[1,2]");
        let e = TwistedComplexSpec::parse(&bad_cells).unwrap_err().to_string();
        assert!(e.contains("boundaries[0]"), "{e}");
        let bad_word = CIRCLE.replace("\"word\":\"t\"", "\"word\":\"u\"");
        let e = TwistedComplexSpec::parse(&bad_word).unwrap_err().to_string();
        assert!(e.contains("boundaries[0][0][0] term 0"), "{e}");
        let e = TwistedComplexSpec::parse("{\"name\": }").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
        let wrong_tag = CIRCLE.replace("tl-1", "tl-9");
        assert!(TwistedComplexSpec::parse(&wrong_tag).is_err());
    }

    #[test]
    fn relators_and_dd_are_enforced() {
        // ⟨x, y | x y x⁻¹ y⁻¹⟩ with a base representation that does not commute
        let text = r#"{"name":"bad","dimension":1,"generators":["x","y"],"relators":["x y x^-1 y^-1"],
            "cells":[1,2],"boundaries":[[[[{"coeff":1,"word":"x"},{"coeff":-1,"word":"1"}]],
                                         [[{"coeff":1,"word":"y"},{"coeff":-1,"word":"1"}]]]],
            "base_representation":{"matrices":[[["1","1"],["0","1"]],[["1","0"],["1","1"]]]}}"#;
        let e = TwistedComplexSpec::parse(text).unwrap_err().to_string();
        assert!(e.contains("relator x y x^-1 y^-1"), "{e}");
        // a 2-complex whose composite is x − 1 ≠ 0 under the sign character x ↦ −1
        let text = r#"{"name":"dd","dimension":2,"generators":["x"],"cells":[1,1,1],"closed":false,
            "boundaries":[[[[{"coeff":1,"word":"x"},{"coeff":-1,"word":"1"}]]],[[[{"coeff":1,"word":"1"}]]]]}"#;
        let e = TwistedComplexSpec::parse(text).unwrap_err().to_string();
        assert!(e.contains("sign character"), "{e}");
    }

    #[test]
    fn sublattice_invariance_on_circle() {
        let s = TwistedComplexSpec::parse(CIRCLE).unwrap();
        let mut ctx = Ctx::new(40).unwrap();
        let two = IntMatrix::from_i64_rows(&[&[2]]);
        let r = lattice_independence_check(&s, &rep1(-1), &two, &mut ctx).unwrap();
        assert!(r.equal && r.rationally_acyclic);
        assert_eq!(r.product, "1/2");
        let a = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 1]]);
        let rep = GroupRepZ::new(vec![a], Vec::new(), true).unwrap();
        let bad = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert!(lattice_independence_check(&s, &rep, &bad, &mut ctx).is_err());
    }
}
