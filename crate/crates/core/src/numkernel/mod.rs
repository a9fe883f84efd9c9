//! Modular integers and a small dense complex linear-algebra kernel.
//!
//! Everything here is sized for single-qudit and two-qudit work (matrices of
//! dimension at most 81), so storage is dense and row-major.

mod eig;
mod matrix;
mod modint;

pub use eig::{hermitian_eig, HermitianEigen};
pub use matrix::{
    equal_up_to_global_phase, inner, norm, ComplexMatrix, HermitianOperator, C64,
    DEFAULT_TOL,
};
pub use modint::{mod_inv, ModInt};
