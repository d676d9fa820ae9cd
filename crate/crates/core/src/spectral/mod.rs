//! Numeric lab: exp-poly signals, the smooth cutoff, witness and patch
//! trajectories per mode, SVD rank checks and spatial synthesis.
//!
//! Everything is generic over [`Real`](crate::scalar::Real); the crate root
//! exports `f64` aliases.

// negated comparisons below are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cutoff;
pub mod field;
pub mod rank;
pub mod signal;
pub mod trajectory;

pub use cutoff::{cutoff_theta, CutoffFunction};
pub use field::{synthesize_spatial_field, GrowthBound, SpatialField};
pub use rank::{numeric_rank, sample_rank, sample_rank_mode, sample_rank_with, SVD_RANK_TOLERANCE};
pub use signal::{embed_operator, CPoly, ExpPolySignal, ExpTerm};
pub use trajectory::{
    build_nonautonomy_witness, build_patching_trajectory, ExactIdentity, KernelSignal, ModeTrajectory,
    PatchDiagnostics, PatchSignal, Provenance, TrajectorySignal,
};
