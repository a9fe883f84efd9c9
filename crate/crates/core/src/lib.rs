//! Qudit generalizations of the qubit π/8 gate.
//!
//! For prime dimension `p` this crate builds the diagonal gates of the third
//! level of the Clifford hierarchy, classifies the group they generate, and
//! measures how far the gates (and their associated states) sit outside the
//! Clifford polytope and the stabilizer polytope.
//!
//! Module map:
//! - [`numkernel`]: modular integers, dense complex matrices, Hermitian eigensolver.
//! - [`weylheis`]: displacement operators, Clifford unitaries, stabilizer states.
//! - [`hierarchy`]: exact exponent form of the diagonal gates and their group structure.
//! - [`geometry`]: facets, negativity, Choi states, gate injection and noise dilution.
//! - [`hull`]: LP membership in vertex-described polytopes and robustness thresholds.

pub mod error;
pub mod geometry;
pub mod hierarchy;
pub mod hull;
pub mod numkernel;
pub mod weylheis;

pub use error::{Error, Result};
