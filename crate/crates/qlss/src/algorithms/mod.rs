//! Solvers and norm estimators built on the singular-value filters.

pub mod ensemble;
pub mod known_norm;
pub mod near_optimal;
pub mod optimal;
pub mod random_t;
pub mod refine;
pub mod search;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ledger::QueryLedger;
use crate::linalg::CVec;

pub use known_norm::{solve_given_norm, solve_given_norm_with};
pub use near_optimal::{full_qlss_fpaa, full_qlss_random_t, Algo3Config, FpaaConfig};
pub use optimal::{full_qlss_optimal, Hats, OptimalParams};
pub use random_t::{sample_norm_candidate, TauDistribution};
pub use refine::{refine_norm_amplitude_estimation, AeNoise};
pub use search::{adiabatic_norm_search, binary_norm_search, exhaustive_norm_search, SearchConfig};

/// Default cap on restarts and repetition loops.
pub const DEFAULT_CAP: u64 = 1_000_000;

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Result of a solver run.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub succeeded: bool,
    /// Normalized output state, `None` on failure.
    pub output_state: Option<CVec>,
    pub t_used: f64,
    /// Trace distance between the output and |x⟩ (1 on failure).
    pub trace_distance_to_x: f64,
    /// |⟨x|x̃⟩| (0 on failure).
    pub overlap_with_x: f64,
    pub queries: QueryLedger,
    /// Exact success probability of the final heralded step, when known.
    pub success_probability: Option<f64>,
    /// Number of restarts taken before the returned outcome.
    pub restarts: u64,
    pub notes: Vec<String>,
}

impl SolveOutcome {
    pub(crate) fn from_state(state: Option<CVec>, x: &CVec, t: f64, queries: QueryLedger) -> Self {
        let overlap = state.as_ref().map(|s| x.dotc(s).norm() / x.norm()).unwrap_or(0.0).min(1.0);
        Self {
            succeeded: state.is_some(),
            trace_distance_to_x: if state.is_some() { (1.0 - overlap * overlap).max(0.0).sqrt() } else { 1.0 },
            output_state: state,
            t_used: t,
            overlap_with_x: overlap,
            queries,
            success_probability: None,
            restarts: 0,
            notes: vec![],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    Exhaustive,
    Binary,
    Adiabatic,
    AeRefine,
    RandomT,
}

impl NormMethod {
    pub fn name(self) -> &'static str {
        match self {
            NormMethod::Exhaustive => "exhaustive",
            NormMethod::Binary => "binary",
            NormMethod::Adiabatic => "adiabatic",
            NormMethod::AeRefine => "ae-refine",
            NormMethod::RandomT => "random-t",
        }
    }
}

/// Estimate of ‖x‖ together with how it was obtained.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormEstimate {
    pub t: f64,
    pub method: NormMethod,
    /// Multiplicative ratio the method targets.
    pub beta_target: f64,
    /// Probability with which the method guarantees `beta_target`.
    pub confidence: f64,
    /// False when the method fell back to a guess that did not pass its test.
    pub passed: bool,
    pub queries: QueryLedger,
    pub notes: Vec<String>,
}

impl NormEstimate {
    /// Whether t ∈ [‖x‖/β, β‖x‖].
    pub fn within(&self, norm: f64, beta: f64) -> bool {
        self.t >= norm / beta * (1.0 - 1e-12) && self.t <= norm * beta * (1.0 + 1e-12)
    }
}
