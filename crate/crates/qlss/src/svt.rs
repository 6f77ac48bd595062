use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QlssError, Result};
use crate::filter::{FilterKind, FilterSpec};
use crate::ledger::QueryLedger;
use crate::linalg::{inner, normalized, CMat, CVec, Svd};
use crate::tolerances::TOL;

/// How a heralded measurement is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Report the success branch together with its exact probability.
    Exact,
    /// Draw the measurement outcome with a seeded generator.
    Sampled(u64),
}

/// Which block-encoding a filter is applied through; fixes the oracle cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    /// (I − bb†)A, built from uncontrolled U_A and U_b.
    G,
    /// (I − b′b′†)A_t, built from controlled U_A and U_b.
    Gt,
    /// G_t for a homotopy system Ā_σ; U_A appears controlled.
    BarAt,
}

/// Right singular data of a matrix that a filter polynomial acts through.
#[derive(Debug, Clone)]
pub struct SvtOperator {
    cols: usize,
    s: Vec<f64>,
    v: CMat,
}

impl SvtOperator {
    pub fn new(b: &CMat) -> Self {
        Self::from_svd(&Svd::new(b), b.ncols())
    }

    pub fn from_svd(svd: &Svd, cols: usize) -> Self {
        let r = svd.rank();
        Self { cols, s: svd.s[..r].to_vec(), v: svd.v.columns(0, r).into_owned() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.s
    }

    pub fn min_nonzero(&self) -> Option<f64> {
        self.s.last().copied()
    }

    pub fn check_gap(&self, delta: f64) -> Result<()> {
        match self.min_nonzero() {
            Some(v) if v < delta - TOL.gap => Err(QlssError::GapViolation { value: v, delta }),
            _ => Ok(()),
        }
    }

    /// Projection of `state` onto the kernel.
    pub fn kernel_part(&self, state: &CVec) -> CVec {
        state - &self.v * (self.v.adjoint() * state)
    }

    /// Applies the filter to the singular values: returns the success branch
    /// V P(Σ) V† ψ (kernel mapped by P(0) = 1) and the failure branch
    /// V √(1 − P(Σ)²) V† ψ, both unnormalized.
    pub fn transform(&self, spec: &FilterSpec, state: &CVec) -> Result<(CVec, CVec, Vec<f64>)> {
        if state.len() != self.cols {
            return Err(QlssError::ShapeMismatch(format!(
                "state length {} but operator has {} columns",
                state.len(),
                self.cols
            )));
        }
        self.check_gap(spec.delta)?;
        let c = self.v.adjoint() * state;
        let p: Vec<f64> = self.s.iter().map(|&s| spec.eval(s.min(1.0))).collect::<Result<_>>()?;
        let kernel = state - &self.v * &c;
        let pc = CVec::from_iterator(c.len(), c.iter().zip(&p).map(|(z, &pv)| z * pv));
        let fc = CVec::from_iterator(c.len(), c.iter().zip(&p).map(|(z, &pv)| z * (1.0 - pv * pv).max(0.0).sqrt()));
        let succ = kernel + &self.v * pc;
        let fail = &self.v * fc;
        Ok((succ, fail, p))
    }
}

/// Result of one heralded kernel projection or reflection.
#[derive(Debug, Clone)]
pub struct BranchOutcome {
    pub succeeded: bool,
    pub post_state: CVec,
    pub probability: f64,
    /// δ₁ (projection) or δ₁′ (reflection).
    pub delta1: f64,
    /// δ₂ (projection) or δ₂′ (reflection).
    pub delta2: f64,
    pub queries: QueryLedger,
}

/// Oracle cost of one filter application through a block-encoding of the given kind.
pub fn op_cost(spec: &FilterSpec, kind: BlockKind) -> QueryLedger {
    op_cost_ell(spec.ell, kind)
}

pub fn op_cost_ell(ell: u64, kind: BlockKind) -> QueryLedger {
    match kind {
        BlockKind::G => QueryLedger { u_a: ell, u_a_dag: ell, u_b: 2 * ell, u_b_dag: 2 * ell, ..Default::default() },
        BlockKind::Gt | BlockKind::BarAt => QueryLedger {
            c_u_a: ell,
            c_u_a_dag: ell,
            c_u_b: 2 * ell,
            c_u_b_dag: 2 * ell,
            ..Default::default()
        },
    }
}

/// Applies the filter of `spec` to `state` through `op`.
pub fn apply_kernel_op(
    op: &SvtOperator,
    state: &CVec,
    spec: &FilterSpec,
    kind: BlockKind,
    mode: Mode,
) -> Result<BranchOutcome> {
    match mode {
        Mode::Exact => apply_kernel_op_with(op, state, spec, kind, None::<&mut rand_chacha::ChaCha8Rng>),
        Mode::Sampled(seed) => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            apply_kernel_op_with(op, state, spec, kind, Some(&mut rng))
        }
    }
}

/// As [`apply_kernel_op`], drawing the outcome from `rng` when one is given.
pub fn apply_kernel_op_with<R: Rng + ?Sized>(
    op: &SvtOperator,
    state: &CVec,
    spec: &FilterSpec,
    kind: BlockKind,
    rng: Option<&mut R>,
) -> Result<BranchOutcome> {
    let (succ, fail, p) = op.transform(spec, state)?;
    let probability = succ.norm_squared().min(1.0);
    let (delta1, delta2) = deltas(op, state, &p, spec);
    let succeeded = match rng {
        None => probability > 0.0,
        Some(r) => r.random::<f64>() < probability,
    };
    let post_state = if succeeded {
        normalized(&succ)
    } else if fail.norm() > 0.0 {
        normalized(&fail)
    } else {
        state.clone()
    };
    Ok(BranchOutcome { succeeded, post_state, probability, delta1, delta2, queries: op_cost(spec, kind) })
}

fn deltas(op: &SvtOperator, state: &CVec, p: &[f64], spec: &FilterSpec) -> (f64, f64) {
    let c = op.v.adjoint() * state;
    let nu2: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    if nu2 <= 0.0 {
        return (0.0, 0.0);
    }
    let mean: f64 = c.iter().zip(p).map(|(z, &pv)| pv * z.norm_sqr()).sum::<f64>() / nu2;
    let spread = (c.iter().zip(p).map(|(z, &pv)| (pv - mean).powi(2) * z.norm_sqr()).sum::<f64>() / nu2).sqrt();
    match spec.kind {
        FilterKind::Projection => (mean, spread),
        FilterKind::Reflection => (1.0 + mean, spread),
    }
}

/// Outcome of refining a weighted ensemble with kernel projection.
#[derive(Debug, Clone)]
pub struct RefineReport {
    pub success_probability: f64,
    pub output: Vec<(f64, CVec)>,
    pub fidelity_in: f64,
    pub fidelity_out: f64,
}

/// Applies projection to each member, reweighting by its success probability.
pub fn refine_with_kp(op: &SvtOperator, ensemble: &[(f64, CVec)], spec: &FilterSpec, target: &CVec) -> Result<RefineReport> {
    let total: f64 = ensemble.iter().map(|(w, _)| w).sum();
    let mut out = Vec::with_capacity(ensemble.len());
    let mut succ = 0.0;
    let mut f_in = 0.0;
    let mut f_out = 0.0;
    for (w, psi) in ensemble {
        let w = w / total;
        let (y, _, _) = op.transform(spec, psi)?;
        let q = y.norm_squared();
        succ += w * q;
        f_in += w * inner(target, psi).norm_sqr();
        if q > 0.0 {
            let st = normalized(&y);
            f_out += w * q * inner(target, &st).norm_sqr();
            out.push((w * q, st));
        }
    }
    if succ > 0.0 {
        f_out /= succ;
        for m in out.iter_mut() {
            m.0 /= succ;
        }
    }
    Ok(RefineReport { success_probability: succ, output: out, fidelity_in: f_in, fidelity_out: f_out })
}
