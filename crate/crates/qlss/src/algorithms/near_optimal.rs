//! Random-t norm search followed by kernel projection, with and without
//! fixed-point amplification of the search.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::known_norm::{known_norm_branch, KnownNormBranch, SolutionProjector};
use crate::algorithms::random_t::{sample_norm_candidate_with, TauDistribution};
use crate::algorithms::{rng_from, SolveOutcome, DEFAULT_CAP};
use crate::bounds::{eta_for_mu, eta_kp, fpaa_rounds, mu_for_eta, random_t_success_lower_discrete};
use crate::error::{domain, QlssError, Result};
use crate::filter::{chebyshev, DegreeRule};
use crate::instance::LinearSystemInstance;
use crate::ledger::QueryLedger;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Algo3Config {
    pub eta: f64,
    pub eps: f64,
    pub mu: f64,
    pub eta_kp: f64,
    pub bracket: (f64, f64),
    #[serde(default = "default_cap")]
    pub cap: u64,
}

fn default_cap() -> u64 {
    DEFAULT_CAP
}

impl Algo3Config {
    pub fn new(eta: f64, eps: f64, bracket: (f64, f64)) -> Result<Self> {
        let (l, r) = bracket;
        if !(l >= 1.0 && r >= l) {
            return Err(QlssError::InvalidParams(format!("bracket [{l}, {r}] invalid")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(QlssError::InvalidParams(format!("eps = {eps} must lie in (0,1)")));
        }
        let mu = mu_for_eta(eta, l, r);
        if !(eta > 0.0 && mu < 1.0) {
            return Err(QlssError::InvalidParams(format!("eta = {eta} gives mu = {mu}; need mu < 1")));
        }
        Ok(Self { eta, eps, mu, eta_kp: eta_kp(eps, mu), bracket, cap: DEFAULT_CAP })
    }

    /// Chooses η so that μ hits the given value.
    pub fn with_mu(mu: f64, eps: f64, bracket: (f64, f64)) -> Result<Self> {
        Self::new(eta_for_mu(mu, bracket.0, bracket.1), eps, bracket)
    }
}

/// Runs the random-t solver with projection until it succeeds.
pub fn full_qlss_random_t(inst: &LinearSystemInstance, cfg: &Algo3Config, seed: u64) -> Result<SolveOutcome> {
    let proj = SolutionProjector::new(inst, cfg.eta_kp)?;
    random_t_run(inst, cfg, &proj, &mut rng_from(seed))
}

pub fn random_t_run<R: Rng + ?Sized>(
    inst: &LinearSystemInstance,
    cfg: &Algo3Config,
    proj: &SolutionProjector,
    rng: &mut R,
) -> Result<SolveOutcome> {
    let mut queries = QueryLedger::zero();
    let mut restarts = 0;
    for _ in 0..cfg.cap {
        let c = sample_norm_candidate_with(inst, cfg.bracket, cfg.eta, DegreeRule::Exact, rng)?;
        queries += c.queries;
        let Some(ans) = c.state else { continue };
        queries += proj.queries();
        if let Some(out) = proj.sample(&ans, rng)? {
            let mut o = SolveOutcome::from_state(Some(out), inst.x(), c.t, queries);
            o.restarts = restarts;
            return Ok(o);
        }
        restarts += 1;
    }
    Err(QlssError::CapExceeded(cfg.cap))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpaaConfig {
    pub base: Algo3Config,
    /// Target failure probability of the amplified search.
    pub delta: f64,
    /// Grid spacing 2^{-d} in τ.
    pub d: u32,
}

/// Success probability after `rounds` calls of fixed-point amplification with
/// target failure δ and initial success probability λ.
pub fn fixed_point_success(lambda: f64, delta: f64, rounds: u64) -> f64 {
    let dy = delta.sqrt();
    let gamma = ((1.0 / dy).acosh() / rounds as f64).cosh();
    let z = gamma * (1.0 - lambda).max(0.0).sqrt();
    (1.0 - delta * chebyshev(rounds, z).powi(2)).clamp(0.0, 1.0)
}

/// Precomputed grid of exact branches for the amplified solver.
pub struct FpaaPlan {
    pub cfg: FpaaConfig,
    pub rounds: u64,
    /// Lower bound on the unamplified success probability.
    pub lambda_bound: f64,
    /// Exact unamplified success probability on the grid.
    pub lambda: f64,
    /// Amplified success probability.
    pub amplified: f64,
    nodes: Vec<(f64, KnownNormBranch)>,
    proj: SolutionProjector,
    per_attempt: QueryLedger,
}

impl FpaaPlan {
    pub fn new(inst: &LinearSystemInstance, cfg: &FpaaConfig) -> Result<Self> {
        if !(cfg.delta > 0.0 && cfg.delta < 1.0) || cfg.d == 0 {
            return Err(QlssError::InvalidParams("need delta in (0,1) and d >= 1".into()));
        }
        let (l, r) = cfg.base.bracket;
        let lambda_bound = random_t_success_lower_discrete(cfg.base.eta, l, r, cfg.d);
        if !(lambda_bound > 0.0) {
            return Err(domain(format!("discretized success bound {lambda_bound} is not positive")));
        }
        let rounds = fpaa_rounds(lambda_bound, cfg.delta);
        let dist = TauDistribution::new(l, r)?;
        let nodes = dist
            .grid(cfg.d)
            .into_iter()
            .map(|(tau, w)| Ok((w, known_norm_branch(inst, cfg.base.eta, tau.exp().clamp(l, r), DegreeRule::Exact)?)))
            .collect::<Result<Vec<_>>>()?;
        let lambda: f64 = nodes.iter().map(|(w, b)| w * b.p_succ).sum();
        let per_attempt = nodes[0].1.queries * rounds;
        Ok(Self {
            cfg: cfg.clone(),
            rounds,
            lambda_bound,
            lambda,
            amplified: fixed_point_success(lambda, cfg.delta, rounds),
            nodes,
            proj: SolutionProjector::new(inst, cfg.base.eta_kp)?,
            per_attempt,
        })
    }

    /// Grid nodes with their prior weights.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, &KnownNormBranch)> {
        self.nodes.iter().map(|(w, b)| (*w, b))
    }

    pub fn projector(&self) -> &SolutionProjector {
        &self.proj
    }

    /// Amplified search only: returns the accepted branch and the cost.
    pub fn search<R: Rng + ?Sized>(&self, rng: &mut R) -> (Option<&KnownNormBranch>, QueryLedger) {
        if rng.random::<f64>() >= self.amplified {
            return (None, self.per_attempt);
        }
        let u = rng.random::<f64>() * self.lambda;
        let mut acc = 0.0;
        for (w, b) in &self.nodes {
            acc += w * b.p_succ;
            if acc >= u && b.state.is_some() {
                return (Some(b), self.per_attempt);
            }
        }
        (self.nodes.iter().rev().map(|n| &n.1).find(|b| b.state.is_some()), self.per_attempt)
    }

    pub fn run<R: Rng + ?Sized>(&self, inst: &LinearSystemInstance, rng: &mut R) -> Result<SolveOutcome> {
        let mut queries = QueryLedger::zero();
        let mut restarts = 0;
        for _ in 0..self.cfg.base.cap {
            let (hit, q) = self.search(rng);
            queries += q;
            let Some(b) = hit else { continue };
            queries += self.proj.queries();
            let ans = b.state.as_ref().expect("accepted branch has a state");
            if let Some(out) = self.proj.sample(ans, rng)? {
                let mut o = SolveOutcome::from_state(Some(out), inst.x(), b.t, queries);
                o.restarts = restarts;
                return Ok(o);
            }
            restarts += 1;
        }
        Err(QlssError::CapExceeded(self.cfg.base.cap))
    }
}

/// Runs the amplified solver once.
pub fn full_qlss_fpaa(inst: &LinearSystemInstance, cfg: &FpaaConfig, seed: u64) -> Result<SolveOutcome> {
    FpaaPlan::new(inst, cfg)?.run(inst, &mut rng_from(seed))
}
