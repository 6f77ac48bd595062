use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Singular values below `zero_rel * max` are exact zeros.
    pub zero_rel: f64,
    /// Allowed deviation of ‖b‖ from 1.
    pub unit_norm: f64,
    /// Slack on the singular-value window [1/κ, 1].
    pub spectrum: f64,
    /// Least-squares residual allowed for b in the column space.
    pub residual: f64,
    /// Slack on the gap check before applying a filter.
    pub gap: f64,
    /// Slack on ‖A‖ ≤ 1 when dilating.
    pub operator_norm: f64,
}

pub const TOL: Tolerances = Tolerances {
    zero_rel: 1e-12,
    unit_norm: 1e-12,
    spectrum: 1e-10,
    residual: 1e-8,
    gap: 1e-10,
    operator_norm: 1e-12,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOL
    }
}
