//! Output ensembles of the randomized solvers, enumerated over their internal randomness.

use crate::algorithms::known_norm::{KnownNormBranch, SolutionProjector};
use crate::algorithms::near_optimal::{Algo3Config, FpaaPlan};
use crate::algorithms::optimal::OptimalParams;
use crate::algorithms::random_t::branches;
use crate::error::{QlssError, Result};
use crate::filter::DegreeRule;
use crate::instance::LinearSystemInstance;
use crate::linalg::{ensemble_density, inner, trace_distance_pure_mixed, CVec};

#[derive(Debug, Clone)]
pub struct EnsembleReport {
    /// ½‖|x⟩⟨x| − ρ‖₁ for the conditional output ensemble.
    pub trace_distance: f64,
    /// ⟨x|ρ|x⟩.
    pub fidelity: f64,
    /// Success probability of one search draw.
    pub search_success: f64,
    /// Probability that the projection succeeds on an accepted search output.
    pub refine_success: f64,
    pub members: Vec<(f64, CVec)>,
}

fn finish<'a>(
    inst: &LinearSystemInstance,
    proj: &SolutionProjector,
    weighted: impl Iterator<Item = (f64, &'a KnownNormBranch)>,
) -> Result<EnsembleReport> {
    let x = inst.x_state();
    let mut members = vec![];
    let (mut search, mut refined) = (0.0, 0.0);
    for (w, b) in weighted {
        let Some(s) = &b.state else { continue };
        let ws = w * b.p_succ;
        search += ws;
        let (r, out) = proj.exact(s)?;
        if let Some(o) = out {
            refined += ws * r;
            members.push((ws * r, o));
        }
    }
    if refined <= 0.0 {
        return Err(QlssError::InvalidParams("ensemble has zero success probability".into()));
    }
    for m in members.iter_mut() {
        m.0 /= refined;
    }
    let rho = ensemble_density(&members);
    let fidelity = members.iter().map(|(w, s)| w * inner(&x, s).norm_sqr()).sum();
    Ok(EnsembleReport {
        trace_distance: trace_distance_pure_mixed(&x, &rho),
        fidelity,
        search_success: search,
        refine_success: refined / search,
        members,
    })
}

/// Ensemble of the random-t solver with projection.
pub fn random_t_ensemble(inst: &LinearSystemInstance, cfg: &Algo3Config) -> Result<EnsembleReport> {
    let proj = SolutionProjector::new(inst, cfg.eta_kp)?;
    let br = branches(inst, cfg.bracket, cfg.eta, DegreeRule::Exact)?;
    finish(inst, &proj, br.iter().map(|(w, b)| (*w, b)))
}

/// Ensemble of the linear-in-κ solver; enumeration covers a single step (J = 1).
pub fn optimal_ensemble(inst: &LinearSystemInstance, params: &OptimalParams) -> Result<EnsembleReport> {
    if params.j != 1 {
        return Err(QlssError::InvalidParams(format!("enumeration needs J = 1, got J = {}", params.j)));
    }
    let step = &params.steps[0];
    let proj = SolutionProjector::new(inst, params.eta_kp)?;
    let br = branches(inst, params.bracket(1, 1.0), step.eta, DegreeRule::Exact)?;
    finish(inst, &proj, br.iter().map(|(w, b)| (*w, b)))
}

/// Ensemble of the amplified solver on its τ grid.
pub fn fpaa_ensemble(inst: &LinearSystemInstance, plan: &FpaaPlan) -> Result<EnsembleReport> {
    finish(inst, plan.projector(), plan.nodes())
}
