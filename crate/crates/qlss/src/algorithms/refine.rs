//! Refining a 2-approximation of ‖x‖ to relative precision ε.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::known_norm::projection_success_on_en;
use crate::algorithms::{rng_from, NormEstimate, NormMethod};
use crate::error::{QlssError, Result};
use crate::filter::DegreeRule;
use crate::instance::LinearSystemInstance;
use crate::svt::{op_cost, BlockKind};

/// Model of the amplitude-estimation output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AeNoise {
    /// Returns the success probability itself.
    Exact,
    /// Uniform error within ±ε/100 w.p. 0.95, otherwise exactly ±ε/100.
    Ideal,
    /// Samples the outcome of phase estimation with the given number of rounds.
    PhaseDistribution { rounds: u64 },
}

/// Rounds of amplitude estimation used by the ledger for additive precision ν.
pub fn ae_rounds(nu: f64) -> u64 {
    (std::f64::consts::PI / nu).ceil() as u64
}

/// t√(1 − q)/√q.
pub fn norm_from_success(t: f64, q: f64) -> f64 {
    t * (1.0 - q).sqrt() / q.sqrt()
}

fn fejer(m: f64, d: f64) -> f64 {
    let s = (std::f64::consts::PI * d).sin();
    if s.abs() < 1e-15 {
        1.0
    } else {
        ((m * std::f64::consts::PI * d).sin() / (m * s)).powi(2)
    }
}

/// Draws an estimate of q from the phase-estimation outcome distribution with m rounds.
pub fn sample_phase_estimate<R: Rng + ?Sized>(q: f64, m: u64, rng: &mut R) -> f64 {
    let theta = q.clamp(0.0, 1.0).sqrt().asin() / std::f64::consts::PI;
    let mf = m as f64;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for y in 0..m {
        let phi = y as f64 / mf;
        acc += 0.5 * (fejer(mf, phi - theta) + fejer(mf, phi + theta));
        if acc >= u {
            return (std::f64::consts::PI * phi).sin().powi(2);
        }
    }
    (std::f64::consts::PI * (m - 1) as f64 / mf).sin().powi(2)
}

fn noisy_estimate<R: Rng + ?Sized>(q: f64, eps: f64, noise: AeNoise, rng: &mut R) -> f64 {
    let nu = eps / 100.0;
    match noise {
        AeNoise::Exact => q,
        AeNoise::Ideal => {
            if rng.random::<f64>() < 0.95 {
                q + nu * (2.0 * rng.random::<f64>() - 1.0)
            } else if rng.random::<bool>() {
                q + nu
            } else {
                q - nu
            }
        }
        AeNoise::PhaseDistribution { rounds } => sample_phase_estimate(q, rounds, rng),
    }
}

/// Improves a 2-approximation `t_in` to a (1+ε)-approximation.
pub fn refine_norm_amplitude_estimation(
    inst: &LinearSystemInstance,
    t_in: f64,
    eps: f64,
    noise: AeNoise,
    seed: u64,
) -> Result<NormEstimate> {
    refine_with(inst, t_in, eps, noise, &mut rng_from(seed))
}

pub fn refine_with<R: Rng + ?Sized>(
    inst: &LinearSystemInstance,
    t_in: f64,
    eps: f64,
    noise: AeNoise,
    rng: &mut R,
) -> Result<NormEstimate> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(QlssError::InvalidParams(format!("eps = {eps} must lie in (0,1)")));
    }
    let nx = inst.x_norm();
    let slack = 1e-9;
    if t_in < nx / 2.0 * (1.0 - slack) || t_in > 2.0 * nx * (1.0 + slack) {
        return Err(QlssError::BadInput(format!("t_in = {t_in} is not a 2-approximation of the norm")));
    }
    let mut notes = vec![];
    let t = t_in.clamp(1.0, inst.kappa());
    if t != t_in {
        notes.push(format!("t_in clamped to {t}"));
    }
    let eta = (eps / 100.0).sqrt();
    let (q, spec) = projection_success_on_en(inst, eta, t, DegreeRule::Exact)?;
    let q_est = noisy_estimate(q, eps, noise, rng).clamp(1e-15, 1.0 - 1e-15);
    let rounds = match noise {
        AeNoise::PhaseDistribution { rounds } => rounds,
        _ => ae_rounds(eps / 100.0),
    };
    Ok(NormEstimate {
        t: norm_from_success(t, q_est),
        method: NormMethod::AeRefine,
        beta_target: 1.0 + eps,
        confidence: 0.95,
        passed: true,
        queries: op_cost(&spec, BlockKind::Gt) * (2 * rounds + 1),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_curve_inverts() {
        let (x, t) = (3.0, 4.5);
        let q = t * t / (t * t + x * x);
        assert!((norm_from_success(t, q) - x).abs() < 1e-14);
    }

    #[test]
    fn phase_distribution_concentrates() {
        let mut rng = rng_from(3);
        let q = 0.37;
        let est: Vec<f64> = (0..200).map(|_| sample_phase_estimate(q, 512, &mut rng)).collect();
        let close = est.iter().filter(|e| (*e - q).abs() < 0.01).count();
        assert!(close > 150);
    }
}
