//! Solver for a given norm estimate t: reflect e_n about ker(G_t), then drop e_n.

use rand::Rng;

use crate::algorithms::{rng_from, SolveOutcome};
use crate::error::{QlssError, Result};
use crate::filter::{DegreeRule, FilterKind, FilterSpec};
use crate::instance::LinearSystemInstance;
use crate::ledger::QueryLedger;
use crate::linalg::{basis, normalized, CVec};
use crate::svt::{apply_kernel_op_with, op_cost, BlockKind, Mode, SvtOperator};
use crate::systems::{augment, build_g, build_g_t};

/// Exact branch data of one run with fixed t.
#[derive(Debug, Clone)]
pub struct KnownNormBranch {
    pub t: f64,
    pub theta: f64,
    /// Probability that reflection and the e_n projection both succeed.
    pub p_succ: f64,
    /// Conditional output on the first n coordinates.
    pub state: Option<CVec>,
    pub spec: FilterSpec,
    pub queries: QueryLedger,
}

/// Exact success probability and conditional state for estimate `t`.
pub fn known_norm_branch(inst: &LinearSystemInstance, eta: f64, t: f64, rule: DegreeRule) -> Result<KnownNormBranch> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(QlssError::InvalidParams(format!("eta = {eta} must lie in (0,1]")));
    }
    let aug = augment(inst, t)?;
    let spec = FilterSpec::with_rule(1.0 / inst.kappa(), eta, FilterKind::Reflection, rule)?;
    let op = SvtOperator::new(&build_g_t(&aug));
    let en = basis(aug.a_t.ncols(), aug.extra_col());
    let (y, _, _) = op.transform(&spec, &en)?;
    let n = inst.cols();
    let kept = y.rows(0, n).into_owned();
    let p_succ = kept.norm_squared();
    let state = (p_succ > 0.0).then(|| normalized(&kept));
    Ok(KnownNormBranch { t, theta: aug.theta_t, p_succ, state, spec, queries: op_cost(&spec, BlockKind::Gt) })
}

/// Runs the solver once with estimate `t`.
pub fn solve_given_norm(inst: &LinearSystemInstance, eta: f64, t: f64, mode: Mode) -> Result<SolveOutcome> {
    match mode {
        Mode::Exact => solve_given_norm_with(inst, eta, t, DegreeRule::Exact, None::<&mut rand_chacha::ChaCha8Rng>),
        Mode::Sampled(seed) => solve_given_norm_with(inst, eta, t, DegreeRule::Exact, Some(&mut rng_from(seed))),
    }
}

/// As [`solve_given_norm`]; with `rng` the heralded outcome is drawn, without it the
/// success branch is returned along with its probability.
pub fn solve_given_norm_with<R: Rng + ?Sized>(
    inst: &LinearSystemInstance,
    eta: f64,
    t: f64,
    rule: DegreeRule,
    rng: Option<&mut R>,
) -> Result<SolveOutcome> {
    let br = known_norm_branch(inst, eta, t, rule)?;
    let ok = match rng {
        None => br.state.is_some(),
        Some(r) => r.random::<f64>() < br.p_succ,
    };
    let mut out = SolveOutcome::from_state(if ok { br.state } else { None }, inst.x(), t, br.queries);
    out.success_probability = Some(br.p_succ);
    Ok(out)
}

/// Kernel projection through G = (I − bb†)A with gap 1/κ.
#[derive(Debug, Clone)]
pub struct SolutionProjector {
    op: SvtOperator,
    spec: FilterSpec,
}

impl SolutionProjector {
    pub fn new(inst: &LinearSystemInstance, eta: f64) -> Result<Self> {
        let spec = FilterSpec::new(1.0 / inst.kappa(), eta, FilterKind::Projection)?;
        Ok(Self { op: SvtOperator::new(&build_g(inst)), spec })
    }

    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    pub fn queries(&self) -> QueryLedger {
        op_cost(&self.spec, BlockKind::G)
    }

    /// Exact success probability and conditional output.
    pub fn exact(&self, state: &CVec) -> Result<(f64, Option<CVec>)> {
        let (y, _, _) = self.op.transform(&self.spec, state)?;
        let p = y.norm_squared().min(1.0);
        Ok((p, (p > 0.0).then(|| normalized(&y))))
    }

    /// Draws the heralded outcome; returns the output on success.
    pub fn sample<R: Rng + ?Sized>(&self, state: &CVec, rng: &mut R) -> Result<Option<CVec>> {
        let out = apply_kernel_op_with(&self.op, state, &self.spec, BlockKind::G, Some(rng))?;
        Ok(out.succeeded.then_some(out.post_state))
    }
}

/// Success probability of kernel projection through G_t applied to e_n.
pub fn projection_success_on_en(inst: &LinearSystemInstance, eta: f64, t: f64, rule: DegreeRule) -> Result<(f64, FilterSpec)> {
    let aug = augment(inst, t)?;
    let spec = FilterSpec::with_rule(1.0 / inst.kappa(), eta, FilterKind::Projection, rule)?;
    let op = SvtOperator::new(&build_g_t(&aug));
    let en = basis(aug.a_t.ncols(), aug.extra_col());
    let (y, _, _) = op.transform(&spec, &en)?;
    Ok((y.norm_squared().min(1.0), spec))
}

/// sin²(2θ_t) = 4r²/(1+r²)² with r = t/‖x‖.
pub fn reflection_curve(r: f64) -> f64 {
    4.0 * r * r / (1.0 + r * r).powi(2)
}

/// cos²(θ_t) = 1/(1 + r⁻²) with r = t/‖x‖.
pub fn projection_curve(r: f64) -> f64 {
    1.0 / (1.0 + 1.0 / (r * r))
}

/// Bounds on the exact success probability for estimate t.
pub fn p_succ_bounds(theta: f64, eta: f64) -> (f64, f64) {
    let s2 = (2.0 * theta).sin().powi(2);
    let lo = s2 * ((1.0 - eta) / (1.0 + eta)).powi(2);
    let hi = s2 + 4.0 * eta * eta / (1.0 + eta).powi(2) * theta.sin().powi(2);
    (lo, hi)
}
