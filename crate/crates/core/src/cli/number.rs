use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde::Serialize;

use super::{to_value, Checked, RunConfig};
use torsionlab::error::{Error, Result};
use torsionlab::io::{read_json, FORMAT_TAG};
use torsionlab::linalg::IntMatrix;
use torsionlab::local::{
    bound_experiment, eigen_partition, largest_invariant_quotient, sym_pow_irreducible_fq, ExperimentConfig,
    LocalLatticeFile, LocalParams,
};
use torsionlab::quaternion::{QuatOrder, QuaternionAlgebra};

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    /// Base field Q(sqrt d); 0 for Q.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
}

#[derive(Subcommand, Debug)]
pub enum QuatCommand {
    /// Ramified places of (a, b / F).
    Classify(AlgebraArgs),
    /// Norm-one elements of an order with bounded coordinates.
    Units {
        #[arg(long)]
        height: u64,
        /// Use the Hurwitz order instead of Z<1, i, j, k> in Hamilton's quaternions.
        #[arg(long, conflicts_with_all = ["d", "a", "b"])]
        hurwitz: bool,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Serialize)]
struct UnitsReport {
    format: &'static str,
    order: String,
    height: u64,
    count: usize,
    units: Vec<Vec<String>>,
}

pub fn quat(cmd: &QuatCommand, config: &RunConfig) -> Result<Checked> {
    match cmd {
        QuatCommand::Classify(x) => {
            let alg = QuaternionAlgebra::parse(x.d, &x.a, &x.b)?;
            Ok(Checked::Recompute(to_value(&alg.classify()?)?))
        }
        QuatCommand::Units { height, hurwitz, d, a, b } => {
            let (order, name) = if *hurwitz {
                (QuatOrder::hurwitz(), "hurwitz".to_string())
            } else {
                let alg = QuaternionAlgebra::parse(*d, a, b)?;
                (QuatOrder::standard(alg)?, format!("standard({a}, {b}; d = {d})"))
            };
            let found = order.norm_one_search(*height, &config.exec());
            let alg = order.algebra();
            let mut units: Vec<Vec<String>> = found.iter().map(|x| alg.format_element(x)).collect();
            units.sort();
            Ok(Checked::Recompute(to_value(&UnitsReport {
                format: FORMAT_TAG,
                order: name,
                height: *height,
                count: units.len(),
                units,
            })?))
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum LocalCommand {
    /// Dimensions of the eigenvalue partition of Sym^k over the residue field F_q.
    Vpart {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u64,
    },
    /// Largest quotient with trivial action for a stable lattice over W(F_q).
    Quotient {
        /// Lattice file {"f", "basis", "generators"}.
        lattice: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u32,
    },
    /// Random stable lattices of Sym^k and the exponent bound.
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        c: Option<u64>,
    },
    /// Irreducibility of Sym^d over F_q.
    Irred {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
    },
}

pub fn local(cmd: &LocalCommand, config: &RunConfig) -> Result<Checked> {
    let v = match cmd {
        LocalCommand::Vpart { q, k } => to_value(&eigen_partition(*q, *k)?.report())?,
        LocalCommand::Quotient { lattice, p, t } => {
            let file: LocalLatticeFile = read_json(lattice)?;
            if let Some(tag) = file.format.as_deref().filter(|x| *x != FORMAT_TAG) {
                return Err(Error::validation(format!("unsupported format tag {tag:?}")));
            }
            let q = p
                .checked_pow(file.f)
                .ok_or_else(|| Error::validation(format!("{p}^{} does not fit in 64 bits", file.f)))?;
            let params = LocalParams::new(q, *t)?;
            let basis = file.basis.to_int()?;
            let gens: Vec<IntMatrix> = file.generators.iter().map(|g| g.to_int()).collect::<Result<_>>()?;
            to_value(&largest_invariant_quotient(&basis, &gens, &params)?)?
        }
        LocalCommand::Bound { q, k, samples, seed, t, c } => {
            let mut cfg = ExperimentConfig::new(*q, *k, *samples, *seed);
            if let Some(t) = t {
                cfg.t = *t;
            }
            if let Some(c) = c {
                cfg.c = *c;
            }
            to_value(&bound_experiment(&cfg, &config.exec())?)?
        }
        LocalCommand::Irred { q, d } => to_value(&sym_pow_irreducible_fq(*q, *d)?)?,
    };
    Ok(Checked::Recompute(v))
}
