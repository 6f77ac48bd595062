//! Seeded Monte Carlo estimation of expected query counts.
//!
//! Trial i uses seed `splitmix64(base ^ i·0x9E3779B97F4A7C15)`, so results do not
//! depend on how trials are scheduled across threads.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ledger::QueryLedger;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `i` under base seed `base`.
pub fn trial_seed(base: u64, i: u64) -> u64 {
    splitmix64(base ^ i.wrapping_mul(GOLDEN))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub trials: u64,
    /// Trials that returned an error.
    pub failures: u64,
    /// Mean of the U_A-family count over successful trials.
    pub mean: f64,
    pub std: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Summed ledger over successful trials.
    pub total: QueryLedger,
    /// U_A-family count → number of trials.
    pub histogram: BTreeMap<u64, u64>,
    /// Error codes → number of trials.
    pub errors: BTreeMap<String, u64>,
}

impl McReport {
    /// Whether the mean lies below `bound` with `z` standard errors of slack.
    pub fn below(&self, bound: f64, z: f64) -> bool {
        self.mean - z * self.std / (self.trials.saturating_sub(self.failures).max(1) as f64).sqrt() <= bound
    }
}

/// Runs `trials` independent trials in parallel and aggregates their ledgers.
/// `z` sets the confidence interval half-width in standard errors.
pub fn expected_query_monte_carlo<F>(trials: u64, seed: u64, z: f64, f: F) -> McReport
where
    F: Fn(u64) -> Result<QueryLedger> + Sync,
{
    assert!(trials >= 1, "need at least one trial");
    let results: Vec<Result<QueryLedger>> = (0..trials).into_par_iter().map(|i| f(trial_seed(seed, i))).collect();
    let mut total = QueryLedger::zero();
    let mut histogram = BTreeMap::new();
    let mut errors = BTreeMap::new();
    let mut values = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(l) => {
                total += l;
                *histogram.entry(l.combined_a()).or_insert(0) += 1;
                values.push(l.combined_a() as f64);
            }
            Err(e) => *errors.entry(e.code().to_string()).or_insert(0) += 1,
        }
    }
    let n = values.len() as f64;
    let mean = if n > 0.0 { values.iter().sum::<f64>() / n } else { f64::NAN };
    let var = if n > 1.0 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    let std = var.sqrt();
    let half = z * std / n.max(1.0).sqrt();
    McReport {
        trials,
        failures: trials - values.len() as u64,
        mean,
        std,
        ci_low: mean - half,
        ci_high: mean + half,
        total,
        histogram,
        errors,
    }
}
