//! Exact integer and rational linear algebra.

pub mod hermite;
mod matrix;
pub mod padic;
pub mod rational;
pub mod smith;

pub use hermite::{hnf_rows, lattice_basis, rational_lattice_basis, unimodular_inverse};
pub use matrix::{IntMatrix, Matrix, RationalMatrix};
pub use rational::{char_poly, det_prime};
pub use smith::{
    cokernel_invariants, determinant, invariant_factors, kernel_basis, smith_normal_form,
    AbelianGroup, SmithForm,
};
