//! Linear-in-κ solver: norm estimates along the homotopy family, then projection.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::known_norm::SolutionProjector;
use crate::algorithms::random_t::sample_norm_candidate_with;
use crate::algorithms::{rng_from, SolveOutcome, DEFAULT_CAP};
use crate::bounds::eta_kp;
use crate::error::{domain, QlssError, Result};
use crate::filter::DegreeRule;
use crate::instance::LinearSystemInstance;
use crate::ledger::QueryLedger;
use crate::linalg::CVec;
use crate::systems::homotopy_instance;

/// Free parameters of the solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Hats {
    pub beta: f64,
    pub chi: f64,
    pub c: f64,
    pub r: f64,
    pub q: f64,
    pub delta: f64,
}

impl Default for Hats {
    fn default() -> Self {
        Self { beta: 15.4, chi: 0.0398, c: 20.0, r: 3.37, q: 5.41, delta: 0.00424 }
    }
}

/// Parameters of step j of the norm sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepParams {
    pub j: u32,
    pub sigma: f64,
    pub beta: f64,
    pub chi: f64,
    pub eta: f64,
    pub m: f64,
    /// ⌈m⌉, the repetition cap.
    pub cap: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalParams {
    pub hats: Hats,
    pub kappa: f64,
    pub eps: f64,
    pub j: u32,
    /// Steps 1..=J.
    pub steps: Vec<StepParams>,
    pub p_bar: f64,
    pub mu: f64,
    pub eta_kp: f64,
}

impl OptimalParams {
    pub fn new(hats: &Hats, kappa: f64, eps: f64) -> Result<Self> {
        let Hats { beta, chi, c, r, q, delta } = *hats;
        if !(kappa >= 1.0) {
            return Err(domain(format!("kappa = {kappa} must be at least 1")));
        }
        if !(c > 1.0 && r > 1.0 && q > 1.0 && beta >= 1.0 && chi > 0.0 && delta > 0.0 && delta < 1.0) {
            return Err(QlssError::InvalidParams(format!("hats out of range: {hats:?}")));
        }
        let jj = ((kappa.ln() / c.ln()).ceil().max(1.0)) as u32;
        let jf = jj as f64;
        let steps = (1..=jj)
            .map(|j| {
                let d = jf - j as f64;
                let chi_j = chi * q.powf(-d);
                let eta = chi_j / (1.0 + chi_j);
                let m = (d + 1.0) * (1.0 / delta + 1.0).ln() * (1.0 + eta).powi(2) * ((c * beta * beta * r.powf(2.0 * d)).ln() + 1.0)
                    / (1.0 - eta).powi(2);
                StepParams {
                    j,
                    sigma: c.powf(d) / kappa,
                    beta: beta * r.powf(d - 1.0),
                    chi: chi_j,
                    eta,
                    m,
                    cap: m.ceil() as u64,
                }
            })
            .collect();
        let b2 = beta * beta;
        let p_bar = 4.0 / (b2 * (1.0 - r.powi(-2)))
            + 16.0 * chi / (q * b2 * (1.0 - 1.0 / (r * r * q)))
            + 16.0 * chi * chi / (q * q * b2 * (1.0 - 1.0 / (r * r * q * q)))
            + 2.0 * chi * chi * (std::f64::consts::E * c * c * r.powi(4)).ln() / (q * q - 1.0);
        let inner = (1.0 - delta - p_bar) * (1.0 - 2.0 * chi * chi * (1.5 + ((c * b2 + 1.0) / 2.0).ln()));
        let mu = (1.0 - inner).sqrt();
        if !(inner > 0.0 && mu < 1.0) {
            return Err(domain(format!("hats give mu = {mu}, outside (0,1)")));
        }
        Ok(Self { hats: *hats, kappa, eps, j: jj, steps, p_bar, mu, eta_kp: eta_kp(eps, mu) })
    }

    /// β_{j}, with β_0 = 1.
    pub fn beta(&self, j: u32) -> f64 {
        if j == 0 {
            1.0
        } else {
            self.steps[j as usize - 1].beta
        }
    }

    /// [L_j, R_j] given the previous estimate.
    pub fn bracket(&self, j: u32, t_prev: f64) -> (f64, f64) {
        let b = self.beta(j - 1);
        let s = &self.steps[j as usize - 1];
        let l = (t_prev / b).max(1.0);
        let r = (1.0 / s.sigma).min(self.hats.c * t_prev * b);
        if r < l {
            let p = t_prev.min(1.0 / s.sigma).max(1.0);
            (p, p)
        } else {
            (l, r)
        }
    }
}

/// Everything the solver needs that does not depend on the random draws.
pub struct OptimalPlan {
    pub params: OptimalParams,
    systems: Vec<LinearSystemInstance>,
    projector: SolutionProjector,
    x: CVec,
    pub cap: u64,
}

impl OptimalPlan {
    pub fn new(inst: &LinearSystemInstance, params: OptimalParams) -> Result<Self> {
        let systems = params
            .steps
            .iter()
            .map(|s| if s.j == params.j { Ok(inst.clone()) } else { homotopy_instance(inst, s.sigma) })
            .collect::<Result<Vec<_>>>()?;
        let projector = SolutionProjector::new(inst, params.eta_kp)?;
        Ok(Self { params, systems, projector, x: inst.x().clone(), cap: DEFAULT_CAP })
    }

    /// One sampled run; restarts until the final projection succeeds.
    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SolveOutcome> {
        let mut queries = QueryLedger::zero();
        for restart in 0..self.cap {
            if let Some((t, state)) = self.cycle(rng, &mut queries)? {
                queries += self.projector.queries();
                if let Some(out) = self.projector.sample(&state, rng)? {
                    let mut o = SolveOutcome::from_state(Some(out), &self.x, t, queries);
                    o.restarts = restart;
                    if self.params.kappa < self.params.hats.c {
                        o.notes.push(format!("kappa below c = {}; J = {}", self.params.hats.c, self.params.j));
                    }
                    return Ok(o);
                }
            }
        }
        Err(QlssError::CapExceeded(self.cap))
    }

    fn cycle<R: Rng + ?Sized>(&self, rng: &mut R, queries: &mut QueryLedger) -> Result<Option<(f64, CVec)>> {
        let mut t = 1.0;
        let mut state = None;
        for (s, sys) in self.params.steps.iter().zip(&self.systems) {
            let bracket = self.params.bracket(s.j, t);
            let mut found = None;
            for _ in 0..s.cap {
                let c = sample_norm_candidate_with(sys, bracket, s.eta, DegreeRule::Exact, rng)?;
                *queries += c.queries;
                if let Some(st) = c.state {
                    found = Some((c.t, st));
                    break;
                }
            }
            match found {
                Some((tj, st)) => {
                    t = tj;
                    state = Some(st);
                }
                None => return Ok(None),
            }
        }
        Ok(state.map(|s| (t, s)))
    }
}

/// Runs the solver once with the given free parameters.
pub fn full_qlss_optimal(inst: &LinearSystemInstance, eps: f64, hats: &Hats, seed: u64) -> Result<SolveOutcome> {
    let params = OptimalParams::new(hats, inst.kappa(), eps)?;
    OptimalPlan::new(inst, params)?.run(&mut rng_from(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_count() {
        let p = OptimalParams::new(&Hats::default(), 400.0, 1e-3).unwrap();
        assert_eq!(p.j, 2);
        assert!((p.steps[1].sigma - 1.0 / 400.0).abs() < 1e-15);
        assert!((p.steps[0].sigma - 20.0 / 400.0).abs() < 1e-15);
        assert!((p.beta(2) - 15.4 / 3.37).abs() < 1e-12);
        assert_eq!(OptimalParams::new(&Hats::default(), 16.0, 1e-3).unwrap().j, 1);
    }
}
