//! Exact computations around torsion in twisted cohomology of arithmetic groups.

pub mod arith;
pub mod error;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod local;
pub mod manifold;
pub mod numeric;
pub mod par;
pub mod quaternion;
pub mod ruelle;
pub mod ring;
pub mod sympow;
pub mod words;

pub use error::{Error, Result};
