//! Vertex-described polytopes, LP membership, noise thresholds and the
//! bound tables derived from them.

mod config;
mod optimize;
mod polytope;
pub mod simplex;
mod threshold;

pub use config::{bounds_table, recorded, BoundsRow, Cell, DistillConfig, Provenance, ThresholdEntry, DEFAULT_CONFIG};
pub use optimize::{optimize_equatorial, EquatorialOptimum};
pub use polytope::{
    devectorize, lp_membership, lp_membership_with, vectorize, LPOutcome, PolytopeKind, PolytopeSpec, LP_TOL,
};
pub use threshold::{
    bisect, depolarize, dilution, dilution_inv, phase_damped_state, threshold_depol_gate, threshold_depol_state,
    threshold_depol_state_lp, threshold_pd_gate, threshold_pd_gate_lp, Budget, ThresholdMethod, ThresholdResult,
};
