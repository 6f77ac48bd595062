use std::ops::AddAssign;

use crate::error::{domain, QlssError, Result};
use crate::instance::LinearSystemInstance;
use crate::linalg::{re, CMat, CVec, C64};

const RANGE_SLACK: f64 = 1e-12;

/// G = (I − bb†)A, whose kernel is ker(A) plus the solution direction.
pub fn build_g(inst: &LinearSystemInstance) -> CMat {
    project_out(inst.a(), inst.b())
}

fn project_out(a: &CMat, b: &CVec) -> CMat {
    let bta = b.adjoint() * a;
    a - b * bta
}

/// The system extended by one uncoupled variable with coefficient 1/t.
#[derive(Debug, Clone)]
pub struct AugmentedSystem {
    pub t: f64,
    pub a_t: CMat,
    pub b_prime: CVec,
    pub x_t: CVec,
    pub theta_t: f64,
}

impl AugmentedSystem {
    /// Index of the extra column (the "e_n" direction).
    pub fn extra_col(&self) -> usize {
        self.a_t.ncols() - 1
    }
    pub fn extra_row(&self) -> usize {
        self.a_t.nrows() - 1
    }
}

fn check_range(v: f64, lo: f64, hi: f64, what: &str) -> Result<()> {
    let tol = RANGE_SLACK * hi.abs().max(1.0);
    if !(v >= lo - tol && v <= hi + tol) {
        return Err(domain(format!("{what} = {v} outside [{lo}, {hi}]")));
    }
    Ok(())
}

pub fn augment(inst: &LinearSystemInstance, t: f64) -> Result<AugmentedSystem> {
    check_range(t, 1.0, inst.kappa(), "t")?;
    Ok(augment_unchecked(inst.a(), inst.b(), inst.x(), t))
}

pub(crate) fn augment_unchecked(a: &CMat, b: &CVec, x: &CVec, t: f64) -> AugmentedSystem {
    let (m, n) = a.shape();
    let mut a_t = CMat::zeros(m + 1, n + 1);
    a_t.view_mut((0, 0), (m, n)).copy_from(a);
    a_t[(m, n)] = re(1.0 / t);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut b_prime = CVec::zeros(m + 1);
    b_prime.rows_mut(0, m).copy_from(&(b * re(h)));
    b_prime[m] = re(h);
    let mut x_t = CVec::zeros(n + 1);
    x_t.rows_mut(0, n).copy_from(&(x * re(h)));
    x_t[n] = re(t * h);
    let theta_t = (x.norm() / t).atan();
    AugmentedSystem { t, a_t, b_prime, x_t, theta_t }
}

/// G_t = (I − b′b′†)A_t.
pub fn build_g_t(aug: &AugmentedSystem) -> CMat {
    project_out(&aug.a_t, &aug.b_prime)
}

/// f(σ) with f(σ)² + (1 − f(σ)²)/κ² = σ².
pub fn schedule_f(sigma: f64, kappa: f64) -> Result<f64> {
    if !(kappa >= 1.0) {
        return Err(domain(format!("kappa = {kappa} must be at least 1")));
    }
    check_range(sigma, 1.0 / kappa, 1.0, "sigma")?;
    if kappa == 1.0 {
        return Ok(1.0);
    }
    let k2 = kappa * kappa;
    Ok(((sigma * sigma * k2 - 1.0) / (k2 - 1.0)).max(0.0).sqrt())
}

/// Member of the homotopy family interpolating from a trivial system to A.
#[derive(Debug, Clone)]
pub struct HomotopyPoint {
    pub sigma: f64,
    pub f_value: f64,
    /// [√(1−f²)A | f I_m], or its augmentation when a norm guess was supplied.
    pub a_bar: CMat,
    /// Minimum-norm solution of the (possibly augmented) system.
    pub x_bar: CVec,
    /// ‖x̄_σ‖ of the unaugmented system.
    pub norm_x_bar: f64,
}

fn homotopy_f(inst: &LinearSystemInstance, sigma: f64) -> Result<f64> {
    let f = schedule_f(sigma, inst.kappa())?;
    // κ = 1 collapses the family onto its σ = 1/κ endpoint.
    Ok(if inst.kappa() == 1.0 { 0.0 } else { f })
}

fn homotopy_matrix(inst: &LinearSystemInstance, f: f64) -> CMat {
    let (m, n) = inst.a().shape();
    let mut a_bar = CMat::zeros(m, n + m);
    let g = (1.0 - f * f).max(0.0).sqrt();
    a_bar.view_mut((0, 0), (m, n)).copy_from(&(inst.a() * re(g)));
    for i in 0..m {
        a_bar[(i, n + i)] = re(f);
    }
    a_bar
}

fn homotopy_solution(inst: &LinearSystemInstance, f: f64) -> CVec {
    let (m, n) = inst.a().shape();
    let svd = inst.svd();
    let g = (1.0 - f * f).max(0.0).sqrt();
    let mut x = CVec::zeros(n + m);
    for (j, w) in inst.b_weights().iter().enumerate() {
        let s = svd.s[j];
        let denom = (1.0 - f * f) * s * s + f * f;
        let coef: C64 = w / denom;
        let top = svd.v.column(j) * (coef * g * s);
        let bottom = svd.u.column(j) * (coef * f);
        x.rows_mut(0, n).add_assign(&top);
        x.rows_mut(n, m).add_assign(&bottom);
    }
    x
}

/// ‖x̄_σ‖ from the singular-value weights of b.
pub fn homotopy_norm(inst: &LinearSystemInstance, sigma: f64) -> Result<f64> {
    let f = homotopy_f(inst, sigma)?;
    Ok(norm_from_weights(inst, f))
}

fn norm_from_weights(inst: &LinearSystemInstance, f: f64) -> f64 {
    let s = &inst.svd().s;
    inst.b_weights()
        .iter()
        .enumerate()
        .map(|(j, w)| w.norm_sqr() / ((1.0 - f * f) * s[j] * s[j] + f * f))
        .sum::<f64>()
        .sqrt()
}

pub fn homotopy_point(inst: &LinearSystemInstance, sigma: f64, t: Option<f64>) -> Result<HomotopyPoint> {
    let f = homotopy_f(inst, sigma)?;
    let a_bar = homotopy_matrix(inst, f);
    let x_bar = homotopy_solution(inst, f);
    let norm_x_bar = norm_from_weights(inst, f);
    match t {
        None => Ok(HomotopyPoint { sigma, f_value: f, a_bar, x_bar, norm_x_bar }),
        Some(t) => {
            check_range(t, 1.0, 1.0 / sigma, "t")?;
            let aug = augment_unchecked(&a_bar, inst.b(), &x_bar, t);
            Ok(HomotopyPoint { sigma, f_value: f, a_bar: aug.a_t, x_bar: aug.x_t, norm_x_bar })
        }
    }
}

/// Ā_σ as a linear system with condition bound 1/σ.
pub fn homotopy_instance(inst: &LinearSystemInstance, sigma: f64) -> Result<LinearSystemInstance> {
    let f = homotopy_f(inst, sigma)?;
    LinearSystemInstance::new(homotopy_matrix(inst, f), inst.b().clone(), 1.0 / sigma)
}

/// ‖x̄_σ‖ / ‖x̄_σ′‖ for σ ≤ σ′, checked against [1, σ′/σ].
pub fn homotopy_norm_ratio(inst: &LinearSystemInstance, sigma: f64, sigma_prime: f64) -> Result<f64> {
    if sigma > sigma_prime {
        return Err(domain(format!("sigma = {sigma} exceeds sigma' = {sigma_prime}")));
    }
    let ratio = homotopy_norm(inst, sigma)? / homotopy_norm(inst, sigma_prime)?;
    if ratio < 1.0 - 1e-10 || ratio > sigma_prime / sigma + 1e-10 {
        return Err(QlssError::InvalidParams(format!(
            "norm ratio {ratio} outside [1, {}]",
            sigma_prime / sigma
        )));
    }
    Ok(ratio)
}
