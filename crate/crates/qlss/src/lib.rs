//! Classical simulator for kernel-reflection quantum linear system solvers.
//!
//! The crate works at the level of singular-value transformations on dense
//! complex matrices: every success probability and post-selected state is
//! computed exactly (or sampled from the exact distribution), and every oracle
//! call is recorded in a [`QueryLedger`].

pub mod algorithms;
pub mod bounds;
pub mod circuits;
pub mod error;
pub mod filter;
pub mod instance;
pub mod ledger;
pub mod linalg;
pub mod montecarlo;
pub mod quadrature;
pub mod svt;
pub mod systems;
pub mod tolerances;

pub use error::{QlssError, Result};
pub use filter::{DegreeRule, FilterKind, FilterSpec};
pub use instance::{hard_instance_family, random_instance, HardCase, InstanceSpec, LinearSystemInstance};
pub use ledger::QueryLedger;
pub use linalg::{CMat, CVec, Svd, C64};
pub use svt::{BlockKind, BranchOutcome, Mode, SvtOperator};
pub use tolerances::{Tolerances, TOL};

/// Double-precision filter specification.
pub type FilterSpecF64 = FilterSpec<f64>;
/// Single-precision filter specification.
pub type FilterSpecF32 = FilterSpec<f32>;
