//! Command-line front end: argument parsing, dispatch, report output and
//! `--verify` round trips.

mod algebra;
mod geometry;
mod number;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use torsionlab::error::{Error, Result};
use torsionlab::io::FORMAT_TAG;
use torsionlab::numeric::{Ctx, DEFAULT_DIGITS, PRECISION_ENV};
use torsionlab::par::Exec;

#[derive(Parser, Debug)]
#[command(name = "torsionlab", version, about = "Exact torsion in twisted cohomology and related invariants")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Significant decimal digits for real-valued output (at least 32).
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = DEFAULT_DIGITS)]
    pub precision: usize,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Recompute the report and compare it with this file instead of printing.
    #[arg(long, global = true)]
    pub verify: Option<PathBuf>,
}

impl RunConfig {
    pub fn ctx(&self) -> Result<Ctx> {
        Ctx::new(self.precision)
    }

    pub fn exec(&self) -> Exec {
        Exec::with_threads(self.threads)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smith normal form of an integer matrix.
    Snf(algebra::SnfArgs),
    /// Cohomology groups of an integral cochain complex.
    Cohomology(algebra::ComplexArgs),
    /// Reidemeister torsion computed from Laplacians and from torsion orders.
    Rtorsion(algebra::RtorsionArgs),
    /// Coinvariants and invariants of an integral representation.
    Coinv(algebra::CoinvArgs),
    /// Symmetric powers of a 2x2 matrix over a ring.
    Sympow(algebra::SympowArgs),
    /// Quaternion algebras: ramification and unit searches.
    #[command(subcommand)]
    Quat(number::QuatCommand),
    /// Local bounds for coinvariants of symmetric powers.
    #[command(subcommand)]
    Local(number::LocalCommand),
    /// Twisted complexes of manifolds from .tcx specifications.
    #[command(subcommand)]
    Manifold(geometry::ManifoldCommand),
    /// Ruelle zeta: truncated products and the data at s = 0.
    #[command(subcommand)]
    Ruelle(geometry::RuelleCommand),
}

/// How a subcommand's report is re-checked under `--verify`.
pub enum Checked {
    /// Compare the stored report with a fresh computation.
    Recompute(Value),
    /// The subcommand verified the stored report itself.
    Done,
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

pub fn read_value(path: &Path) -> Result<Value> {
    torsionlab::io::read_json(path)
}

fn first_difference(a: &Value, b: &Value, path: &str) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for k in x.keys().chain(y.keys()) {
                let p = format!("{path}.{k}");
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => {
                        if let Some(d) = first_difference(u, v, &p) {
                            return Some(d);
                        }
                    }
                    _ => return Some(format!("{p} is present on one side only")),
                }
            }
            None
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Some(format!("{path} has length {} vs {}", x.len(), y.len()));
            }
            x.iter().zip(y).enumerate().find_map(|(i, (u, v))| first_difference(u, v, &format!("{path}[{i}]")))
        }
        _ if a == b => None,
        _ => Some(format!("{path}: stored {b} but recomputed {a}")),
    }
}

fn emit(config: &RunConfig, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match &config.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    let config = &cli.config;
    config.ctx()?;
    let report = match &cli.command {
        Command::Snf(a) => algebra::snf(a, config)?,
        Command::Cohomology(a) => algebra::cohomology(a, config)?,
        Command::Rtorsion(a) => algebra::rtorsion(a, config)?,
        Command::Coinv(a) => algebra::coinv(a, config)?,
        Command::Sympow(a) => algebra::sympow(a, config)?,
        Command::Quat(c) => number::quat(c, config)?,
        Command::Local(c) => number::local(c, config)?,
        Command::Manifold(c) => geometry::manifold(c, config)?,
        Command::Ruelle(c) => geometry::ruelle(c, config)?,
    };
    match (&config.verify, report) {
        (None, Checked::Recompute(v)) => emit(config, &v),
        (None, Checked::Done) => Err(Error::validation("this subcommand only runs with --verify")),
        (Some(path), Checked::Recompute(v)) => {
            let stored = read_value(path)?;
            if let Some(d) = first_difference(&v, &stored, "$") {
                return Err(Error::validation(format!("{} does not verify: {d}", path.display())));
            }
            emit(config, &serde_json::json!({"format": FORMAT_TAG, "verified": true}))
        }
        (Some(_), Checked::Done) => emit(config, &serde_json::json!({"format": FORMAT_TAG, "verified": true})),
    }
}
