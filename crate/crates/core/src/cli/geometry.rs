use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};

use super::{read_value, to_value, Checked, RunConfig};
use torsionlab::error::{Error, Result};
use torsionlab::homology::{cohomology, CohomologyReport, GroupRepZ};
use torsionlab::io::{read_json, FORMAT_TAG};
use torsionlab::manifold::{
    euler_check, evaluate, h3_cross_check, lattice_independence_check, random_stable_sublattice, sym_family,
    torsion_sweep, TopDegreeReport, TwistedComplexSpec,
};
use torsionlab::numeric::parse_sqrt_rational;
use torsionlab::ruelle::{order_at_zero, truncated_product, zeta_report, GeodesicFile};

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct RepChoice {
    /// Integral representation file {"generators", "relators"}.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    /// Sym^N of the spec's base representation.
    #[arg(long)]
    pub sym: Option<usize>,
}

impl RepChoice {
    fn load(&self, spec: &TwistedComplexSpec) -> Result<(String, GroupRepZ)> {
        match (&self.rep, self.sym) {
            (Some(p), _) => {
                let rep: GroupRepZ = read_json(p)?;
                spec.check_killed(rep.generators())?;
                Ok((p.display().to_string(), rep))
            }
            (None, Some(n)) => Ok((format!("Sym^{n}"), spec.base_rep(n)?)),
            (None, None) => Err(Error::validation("pass --rep or --sym")),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum ManifoldCommand {
    /// Parse a .tcx file and run the Euler and top-degree checks on the probe representations.
    Check { spec: PathBuf },
    /// Cohomology of the twisted complex for one representation.
    Cohomology {
        spec: PathBuf,
        #[command(flatten)]
        rep: RepChoice,
    },
    /// Torsion growth over Sym^{2k} of the base representation.
    Sweep {
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
    },
    /// Compare torsion for Z^n and a random stable sublattice.
    Lattice {
        spec: PathBuf,
        #[command(flatten)]
        rep: RepChoice,
        /// Index of the sublattice divides a power of this.
        #[arg(long, default_value_t = 3)]
        modulus: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct Probe {
    representation: String,
    euler_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    top_degree: Option<TopDegreeReport>,
}

#[derive(Serialize)]
struct CheckReport {
    format: &'static str,
    name: String,
    dimension: usize,
    generators: Vec<String>,
    relators: Vec<String>,
    cells: Vec<usize>,
    cell_euler_characteristic: i64,
    probes: Vec<Probe>,
    consistent: bool,
}

#[derive(Serialize)]
struct SpecCohomology {
    format: &'static str,
    name: String,
    representation: String,
    dim: usize,
    cohomology: CohomologyReport,
}

fn load_spec(path: &Path) -> Result<TwistedComplexSpec> {
    TwistedComplexSpec::from_file(path)
}

pub fn manifold(cmd: &ManifoldCommand, config: &RunConfig) -> Result<Checked> {
    let v = match cmd {
        ManifoldCommand::Check { spec } => {
            let s = load_spec(spec)?;
            let mut probes = Vec::new();
            for (name, rep) in s.probe_representations()? {
                let c = evaluate(&s, &rep)?;
                let top = if s.closed && s.oriented { Some(h3_cross_check(&s, &rep)?) } else { None };
                probes.push(Probe { representation: name, euler_consistent: euler_check(&s, &c), top_degree: top });
            }
            let consistent =
                probes.iter().all(|p| p.euler_consistent && p.top_degree.as_ref().is_none_or(|t| t.agree));
            to_value(&CheckReport {
                format: FORMAT_TAG,
                name: s.name.clone(),
                dimension: s.dimension,
                generators: s.generators.clone(),
                relators: s.relators.iter().map(|w| s.format_word(w)).collect(),
                cells: s.cells.clone(),
                cell_euler_characteristic: s.cell_euler_characteristic(),
                probes,
                consistent,
            })?
        }
        ManifoldCommand::Cohomology { spec, rep } => {
            let s = load_spec(spec)?;
            let (name, r) = rep.load(&s)?;
            let mut ctx = config.ctx()?;
            to_value(&SpecCohomology {
                format: FORMAT_TAG,
                name: s.name.clone(),
                representation: name,
                dim: r.dim(),
                cohomology: cohomology(&evaluate(&s, &r)?, &mut ctx),
            })?
        }
        ManifoldCommand::Sweep { spec, kmin, kmax } => {
            if kmin > kmax || *kmin == 0 {
                return Err(Error::validation(format!("need 1 <= kmin <= kmax, got {kmin}..{kmax}")));
            }
            let s = load_spec(spec)?;
            let ks: Vec<usize> = (*kmin..=*kmax).collect();
            to_value(&torsion_sweep(&s, "Sym^{2k}", sym_family(&s), &ks, config.precision, &config.exec())?)?
        }
        ManifoldCommand::Lattice { spec, rep, modulus, seed } => {
            let s = load_spec(spec)?;
            let (_, r) = rep.load(&s)?;
            let basis = random_stable_sublattice(&r, *modulus, *seed)?;
            let mut ctx = config.ctx()?;
            to_value(&lattice_independence_check(&s, &r, &basis, &mut ctx)?)?
        }
    };
    Ok(Checked::Recompute(v))
}

#[derive(Subcommand, Debug)]
pub enum RuelleCommand {
    /// Truncated Euler product over the supplied closed geodesics.
    Eval {
        /// Geodesic file {"geodesics": [{"length", "eigenvalues"}]}.
        geodesics: PathBuf,
        /// Complex argument as "re,im" (or just "re").
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Order of vanishing at s = 0 from cohomology ranks.
    Order {
        /// A list of ranks, {"ranks": [...]}, or a cohomology report.
        ranks: PathBuf,
        #[arg(long)]
        trivial: bool,
    },
    /// Leading coefficient at s = 0 from a cohomology report and a regulator.
    Leading {
        report: PathBuf,
        /// Rational number or sqrt(rational).
        #[arg(long, default_value = "1")]
        regulator: String,
        #[arg(long)]
        trivial: bool,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RanksInput {
    List(Vec<usize>),
    Object { ranks: Vec<usize> },
    Report(CohomologyReport),
    Wrapped { cohomology: CohomologyReport },
}

#[derive(Serialize)]
struct OrderReport {
    format: &'static str,
    ranks: Vec<usize>,
    trivial: bool,
    order_at_zero: i64,
}

fn split_complex(s: &str) -> (&str, &str) {
    match s.split_once(',') {
        Some((re, im)) => (re.trim(), im.trim()),
        None => (s.trim(), "0"),
    }
}

pub fn ruelle(cmd: &RuelleCommand, config: &RunConfig) -> Result<Checked> {
    let v = match cmd {
        RuelleCommand::Eval { geodesics, s } => {
            let file: GeodesicFile = read_json(geodesics)?;
            if let Some(tag) = file.format.as_deref().filter(|x| *x != FORMAT_TAG) {
                return Err(Error::validation(format!("unsupported format tag {tag:?}")));
            }
            to_value(&truncated_product(split_complex(s), &file.geodesics, config.precision, &config.exec())?)?
        }
        RuelleCommand::Order { ranks, trivial } => {
            let input: RanksInput = serde_json::from_value(read_value(ranks)?)
                .map_err(|e| Error::validation(format!("{}: not a rank list or cohomology report ({e})", ranks.display())))?;
            let ranks = match input {
                RanksInput::List(r) | RanksInput::Object { ranks: r } => r,
                RanksInput::Report(rep) | RanksInput::Wrapped { cohomology: rep } => {
                    rep.validate()?;
                    rep.free_ranks()
                }
            };
            to_value(&OrderReport {
                format: FORMAT_TAG,
                order_at_zero: order_at_zero(&ranks, *trivial)?,
                ranks,
                trivial: *trivial,
            })?
        }
        RuelleCommand::Leading { report, regulator, trivial } => {
            let rep = match serde_json::from_value(read_value(report)?)? {
                RanksInput::Report(r) | RanksInput::Wrapped { cohomology: r } => r,
                _ => return Err(Error::validation(format!("{}: expected a cohomology report", report.display()))),
            };
            let reg = parse_sqrt_rational(regulator)?;
            let mut ctx = config.ctx()?;
            to_value(&zeta_report(&rep, &reg, *trivial, &mut ctx)?)?
        }
    };
    Ok(Checked::Recompute(v))
}
