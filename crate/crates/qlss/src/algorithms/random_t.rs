//! Norm estimation by drawing t at random and keeping it when the solver succeeds.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::known_norm::{known_norm_branch, KnownNormBranch};
use crate::algorithms::rng_from;
use crate::error::{QlssError, Result};
use crate::filter::DegreeRule;
use crate::instance::LinearSystemInstance;
use crate::ledger::QueryLedger;
use crate::linalg::CVec;
use crate::quadrature::composite;

/// τ uniform on [ln L − 1/2, ln R + 1/2], clamped to [ln L, ln R].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauDistribution {
    pub ln_l: f64,
    pub ln_r: f64,
}

impl TauDistribution {
    pub fn new(l: f64, r: f64) -> Result<Self> {
        if !(l > 0.0 && r >= l && r.is_finite()) {
            return Err(QlssError::InvalidParams(format!("bracket [{l}, {r}] invalid")));
        }
        Ok(Self { ln_l: l.ln(), ln_r: r.ln() })
    }

    pub fn width(&self) -> f64 {
        self.ln_r - self.ln_l
    }

    /// Probability mass at each endpoint.
    pub fn endpoint_mass(&self) -> f64 {
        0.5 / (self.width() + 1.0)
    }

    /// Density on the open interval.
    pub fn density(&self) -> f64 {
        1.0 / (self.width() + 1.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let tau = self.ln_l - 0.5 + u * (self.width() + 1.0);
        tau.clamp(self.ln_l, self.ln_r)
    }

    /// Quadrature nodes (τ, weight) whose weights sum to 1.
    pub fn quadrature(&self, panels: usize, order: usize) -> Vec<(f64, f64)> {
        let mut nodes = vec![(self.ln_l, self.endpoint_mass()), (self.ln_r, self.endpoint_mass())];
        let d = self.density();
        nodes.extend(composite(self.ln_l, self.ln_r, panels, order).into_iter().map(|(x, w)| (x, w * d)));
        nodes
    }

    /// Midpoint grid with spacing at most 2^{-d}, plus the endpoint masses.
    pub fn grid(&self, d: u32) -> Vec<(f64, f64)> {
        let mut nodes = vec![(self.ln_l, self.endpoint_mass()), (self.ln_r, self.endpoint_mass())];
        let w = self.width();
        if w > 0.0 {
            let cells = (w * 2f64.powi(d as i32)).ceil().max(1.0) as usize;
            let h = w / cells as f64;
            nodes.extend((0..cells).map(|j| (self.ln_l + (j as f64 + 0.5) * h, h * self.density())));
        }
        nodes
    }
}

/// One draw of the random-t estimator.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub t: f64,
    /// Output state when the run succeeded.
    pub state: Option<CVec>,
    pub p_succ: f64,
    pub queries: QueryLedger,
}

/// Draws τ, runs the known-norm solver at t = e^τ and samples its outcome.
pub fn sample_norm_candidate(
    inst: &LinearSystemInstance,
    bracket: (f64, f64),
    eta: f64,
    seed: u64,
) -> Result<Candidate> {
    sample_norm_candidate_with(inst, bracket, eta, DegreeRule::Exact, &mut rng_from(seed))
}

pub fn sample_norm_candidate_with<R: Rng + ?Sized>(
    inst: &LinearSystemInstance,
    bracket: (f64, f64),
    eta: f64,
    rule: DegreeRule,
    rng: &mut R,
) -> Result<Candidate> {
    let dist = TauDistribution::new(bracket.0, bracket.1)?;
    let t = dist.sample(rng).exp().clamp(bracket.0, bracket.1);
    let br = known_norm_branch(inst, eta, t, rule)?;
    let ok = rng.random::<f64>() < br.p_succ;
    Ok(Candidate { t, state: if ok { br.state } else { None }, p_succ: br.p_succ, queries: br.queries })
}

/// Panels used when integrating over τ.
pub fn default_panels(dist: &TauDistribution) -> usize {
    (4.0 * dist.width()).ceil().max(4.0) as usize
}

/// Exact branches at the quadrature nodes of the τ distribution.
pub fn branches(
    inst: &LinearSystemInstance,
    bracket: (f64, f64),
    eta: f64,
    rule: DegreeRule,
) -> Result<Vec<(f64, KnownNormBranch)>> {
    let dist = TauDistribution::new(bracket.0, bracket.1)?;
    dist.quadrature(default_panels(&dist), 8)
        .into_iter()
        .map(|(tau, w)| Ok((w, known_norm_branch(inst, eta, tau.exp().clamp(bracket.0, bracket.1), rule)?)))
        .collect()
}

/// Overall success probability of one draw.
pub fn success_probability(inst: &LinearSystemInstance, bracket: (f64, f64), eta: f64) -> Result<f64> {
    Ok(branches(inst, bracket, eta, DegreeRule::Exact)?.iter().map(|(w, b)| w * b.p_succ).sum())
}

/// Conditional probability that the accepted t lies outside [‖x‖/β, β‖x‖].
pub fn deviation_probability(inst: &LinearSystemInstance, bracket: (f64, f64), eta: f64, beta: f64) -> Result<f64> {
    let dist = TauDistribution::new(bracket.0, bracket.1)?;
    let total = success_probability(inst, bracket, eta)?;
    let lo = (inst.x_norm() / beta).ln();
    let hi = (inst.x_norm() * beta).ln();
    let p = |tau: f64| known_norm_branch(inst, eta, tau.exp().clamp(bracket.0, bracket.1), DegreeRule::Exact).map(|b| b.p_succ);
    let mut bad = 0.0;
    for tau in [dist.ln_l, dist.ln_r] {
        if tau < lo || tau > hi {
            bad += dist.endpoint_mass() * p(tau)?;
        }
    }
    let pieces = [(dist.ln_l, lo.min(dist.ln_r)), (hi.max(dist.ln_l), dist.ln_r)];
    for (a, b) in pieces {
        for (tau, w) in composite(a, b, 8, 8) {
            bad += w * dist.density() * p(tau)?;
        }
    }
    Ok(bad / total)
}
