//! Constant-factor norm searches over a log-spaced candidate set.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::known_norm::{known_norm_branch, projection_success_on_en};
use crate::algorithms::{rng_from, NormEstimate, NormMethod};
use crate::bounds::{binary_repetitions, binary_rounds, exhaustive_repetitions};
use crate::error::{QlssError, Result};
use crate::filter::DegreeRule;
use crate::instance::LinearSystemInstance;
use crate::ledger::QueryLedger;
use crate::svt::{op_cost, BlockKind};
use crate::systems::homotopy_instance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchConfig {
    pub exhaustive_eta: f64,
    /// Empirical success rate a candidate must exceed.
    pub exhaustive_threshold: f64,
    pub binary_eta: f64,
    /// Scale of the median-amplification repetitions in the adiabatic search.
    pub amplification: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { exhaustive_eta: 0.025, exhaustive_threshold: 0.725, binary_eta: 0.125f64.sqrt(), amplification: 1.0 }
    }
}

/// {0, ln 2, …, ⌈log₂ κ⌉ ln 2}, with the last entry capped at ln κ.
pub fn log_candidates(kappa: f64) -> Vec<f64> {
    let top = kappa.log2().ceil().max(0.0) as usize;
    let mut out: Vec<f64> = (0..=top).map(|j| (j as f64 * std::f64::consts::LN_2).min(kappa.ln())).collect();
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

struct ExhaustiveResult {
    passed: Option<f64>,
    best: f64,
    queries: QueryLedger,
}

/// Runs k trials per candidate from precomputed success probabilities.
fn exhaustive_trials<R: Rng + ?Sized>(
    ts: &[(f64, f64, QueryLedger)],
    threshold: f64,
    rng: &mut R,
) -> ExhaustiveResult {
    let k = exhaustive_repetitions(ts.len());
    let mut passed = None;
    let mut best = (f64::NEG_INFINITY, ts[0].0);
    let mut queries = QueryLedger::zero();
    for &(t, p, q) in ts {
        let hits = (0..k).filter(|_| rng.random::<f64>() < p).count();
        let rate = hits as f64 / k as f64;
        queries += q * k;
        if rate > threshold && passed.is_none() {
            passed = Some(t);
        }
        if rate > best.0 {
            best = (rate, t);
        }
    }
    ExhaustiveResult { passed, best: best.1, queries }
}

fn candidate_table(inst: &LinearSystemInstance, ts: &[f64], eta: f64) -> Result<Vec<(f64, f64, QueryLedger)>> {
    ts.iter()
        .map(|&t| {
            let br = known_norm_branch(inst, eta, t, DegreeRule::Loose)?;
            Ok((t, br.p_succ, br.queries))
        })
        .collect()
}

/// Exhaustive search over the log-spaced candidates.
pub fn exhaustive_norm_search(inst: &LinearSystemInstance, kappa: f64, seed: u64) -> Result<NormEstimate> {
    exhaustive_norm_search_with(inst, kappa, &SearchConfig::default(), &mut rng_from(seed))
}

pub fn exhaustive_norm_search_with<R: Rng + ?Sized>(
    inst: &LinearSystemInstance,
    kappa: f64,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<NormEstimate> {
    let inst = with_bound(inst, kappa)?;
    let ts: Vec<f64> = log_candidates(kappa).into_iter().map(f64::exp).collect();
    let table = candidate_table(&inst, &ts, cfg.exhaustive_eta)?;
    let res = exhaustive_trials(&table, cfg.exhaustive_threshold, rng);
    match res.passed {
        Some(t) => Ok(NormEstimate {
            t,
            method: NormMethod::Exhaustive,
            beta_target: 2.0,
            confidence: 0.95,
            passed: true,
            queries: res.queries,
            notes: vec![],
        }),
        None => Err(QlssError::SearchFailed(format!(
            "no candidate exceeded rate {} (best t = {})",
            cfg.exhaustive_threshold, res.best
        ))),
    }
}

fn with_bound(inst: &LinearSystemInstance, kappa: f64) -> Result<LinearSystemInstance> {
    if kappa == inst.kappa() {
        Ok(inst.clone())
    } else {
        inst.with_kappa(kappa)
    }
}

/// Noisy binary search on the kernel-projection success frequency.
pub fn binary_norm_search(inst: &LinearSystemInstance, kappa: f64, seed: u64) -> Result<NormEstimate> {
    binary_norm_search_with(inst, kappa, &SearchConfig::default(), &mut rng_from(seed))
}

pub fn binary_norm_search_with<R: Rng + ?Sized>(
    inst: &LinearSystemInstance,
    kappa: f64,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<NormEstimate> {
    let inst = with_bound(inst, kappa)?;
    let all = log_candidates(kappa);
    let rounds = binary_rounds(all.len());
    let k = binary_repetitions(all.len());
    let mut active = all.clone();
    let mut queries = QueryLedger::zero();
    for _ in 0..rounds {
        let mid = (active.len() - 1) / 2;
        let tau = active[mid];
        let (q, spec) = projection_success_on_en(&inst, cfg.binary_eta, tau.exp(), DegreeRule::Loose)?;
        let hits = (0..k).filter(|_| rng.random::<f64>() < q).count();
        queries += op_cost(&spec, BlockKind::Gt) * k;
        if hits as f64 / k as f64 > 0.5 {
            // t above ‖x‖: larger candidates are worse
            active.truncate(mid + 1);
        } else {
            active.drain(..mid);
        }
    }
    let tau = active.iter().sum::<f64>() / active.len() as f64;
    Ok(NormEstimate {
        t: tau.exp(),
        method: NormMethod::Binary,
        beta_target: 2.0,
        confidence: 0.95,
        passed: active.len() <= 2,
        queries,
        notes: vec![format!("{} active candidates at exit", active.len())],
    })
}

/// Repetitions of step j, an odd count growing with J − j.
pub fn adiabatic_repetitions(amplification: f64, levels: u32, j: u32) -> u64 {
    2 * (amplification * (1 + levels - j) as f64).ceil().max(1.0) as u64 - 1
}

/// Norm search along the homotopy family, doubling the condition bound per step.
pub fn adiabatic_norm_search(inst: &LinearSystemInstance, kappa: f64, seed: u64) -> Result<NormEstimate> {
    adiabatic_norm_search_with(inst, kappa, &SearchConfig::default(), &mut rng_from(seed))
}

pub fn adiabatic_norm_search_with<R: Rng + ?Sized>(
    inst: &LinearSystemInstance,
    kappa: f64,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<NormEstimate> {
    let levels = kappa.log2().ceil().max(0.0) as u32;
    let k2 = 2f64.powi(levels as i32);
    let inst = with_bound(inst, k2)?;
    let mut notes = vec![];
    if k2 != kappa {
        notes.push(format!("kappa rounded up to {k2}"));
    }
    let mut t = 1.0f64;
    let mut queries = QueryLedger::zero();
    let mut all_passed = true;
    for j in 1..=levels {
        let hi = 2f64.powi(j as i32);
        let sys = homotopy_instance(&inst, 1.0 / hi)?;
        let mut ts: Vec<f64> = [0.5f64, 1.0, 2.0, 4.0].iter().map(|f| (f * t).clamp(1.0, hi)).collect();
        ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        let table = candidate_table(&sys, &ts, cfg.exhaustive_eta)?;
        let reps = adiabatic_repetitions(cfg.amplification, levels, j);
        let mut picks: Vec<f64> = (0..reps)
            .map(|_| {
                let r = exhaustive_trials(&table, cfg.exhaustive_threshold, rng);
                queries += r.queries;
                all_passed &= r.passed.is_some();
                r.passed.unwrap_or(r.best)
            })
            .collect();
        picks.sort_by(f64::total_cmp);
        t = picks[picks.len() / 2];
    }
    Ok(NormEstimate {
        t,
        method: NormMethod::Adiabatic,
        beta_target: 2.0,
        confidence: 0.9,
        passed: all_passed,
        queries,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_sets() {
        assert_eq!(log_candidates(2.0).len(), 2);
        assert_eq!(log_candidates(64.0).len(), 7);
        let c = log_candidates(3.0);
        assert!((c[2] - 3f64.ln()).abs() < 1e-15);
        assert_eq!(log_candidates(1.0), vec![0.0]);
    }

    #[test]
    fn repetition_counts() {
        assert_eq!(adiabatic_repetitions(1.0, 4, 4), 1);
        assert_eq!(adiabatic_repetitions(1.0, 4, 1), 7);
        assert_eq!(adiabatic_repetitions(1.0, 4, 1) % 2, 1);
    }
}
