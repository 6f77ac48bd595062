use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{QlssError, Result};
use crate::linalg::{haar_unitary, inner, operator_norm, re, CMat, CVec, Svd, C64};
use crate::tolerances::TOL;

/// A linear system `A x = b` with `‖A‖ ≤ 1`, `‖b‖ = 1` and nonzero singular
/// values in `[1/κ, 1]`, together with its factorization and minimum-norm
/// solution.
#[derive(Debug, Clone)]
pub struct LinearSystemInstance {
    a: CMat,
    b: CVec,
    kappa: f64,
    svd: Svd,
    x: CVec,
    b_weights: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub rank: usize,
    pub min_nonzero: f64,
    pub max: f64,
    pub kappa: f64,
    pub pass: bool,
}

impl LinearSystemInstance {
    /// Validates the conventions and caches the SVD and minimum-norm solution.
    pub fn new(a: CMat, b: CVec, kappa: f64) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(QlssError::ShapeMismatch("empty matrix".into()));
        }
        if b.len() != a.nrows() {
            return Err(QlssError::ShapeMismatch(format!(
                "b has length {} but A has {} rows",
                b.len(),
                a.nrows()
            )));
        }
        if !(kappa >= 1.0) || !kappa.is_finite() {
            return Err(QlssError::InvalidParams(format!("kappa must be >= 1, got {kappa}")));
        }
        if a.iter().chain(b.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QlssError::BadInput("non-finite entry".into()));
        }
        let bn = b.norm();
        if (bn - 1.0).abs() > TOL.unit_norm {
            return Err(QlssError::BadInput(format!("‖b‖ = {bn}, expected 1")));
        }
        let svd = Svd::new(&a);
        let report = spectrum_report(&svd, kappa);
        if !report.pass {
            return Err(QlssError::InvalidParams(format!(
                "nonzero singular values [{:.6e}, {:.6e}] outside [1/κ, 1] for κ = {kappa}",
                report.min_nonzero, report.max
            )));
        }
        let x = solve_from_svd(&svd, &b)?;
        let r = svd.rank();
        let b_weights = (0..r).map(|j| inner(&svd.u.column(j).into_owned(), &b)).collect();
        Ok(Self { a, b, kappa, svd, x, b_weights })
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }
    pub fn b(&self) -> &CVec {
        &self.b
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn svd(&self) -> &Svd {
        &self.svd
    }
    /// Minimum-norm solution.
    pub fn x(&self) -> &CVec {
        &self.x
    }
    pub fn x_norm(&self) -> f64 {
        self.x.norm()
    }
    /// Unit vector along the solution.
    pub fn x_state(&self) -> CVec {
        self.x.map(|z| z / self.x.norm())
    }
    /// Coefficients of b in the nonzero left singular vectors.
    pub fn b_weights(&self) -> &[C64] {
        &self.b_weights
    }
    pub fn rows(&self) -> usize {
        self.a.nrows()
    }
    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn spectrum_check(&self) -> SpectrumReport {
        spectrum_report(&self.svd, self.kappa)
    }

    /// Same system with a different condition bound.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), kappa)
    }
}

fn spectrum_report(svd: &Svd, kappa: f64) -> SpectrumReport {
    let nz = svd.nonzero();
    let max = nz.first().copied().unwrap_or(0.0);
    let min = nz.last().copied().unwrap_or(0.0);
    let pass = !nz.is_empty() && max <= 1.0 + TOL.spectrum && min >= 1.0 / kappa - TOL.spectrum;
    SpectrumReport { rank: nz.len(), min_nonzero: min, max, kappa, pass }
}

/// Spectrum check for a bare matrix.
pub fn spectrum_check(a: &CMat, kappa: f64) -> SpectrumReport {
    spectrum_report(&Svd::new(a), kappa)
}

fn solve_from_svd(svd: &Svd, b: &CVec) -> Result<CVec> {
    let r = svd.rank();
    let n = svd.v.nrows();
    let mut x = CVec::zeros(n);
    let mut fit = CVec::zeros(b.len());
    for j in 0..r {
        let uj = svd.u.column(j).into_owned();
        let w = inner(&uj, b);
        x += svd.v.column(j) * (w / svd.s[j]);
        fit += uj * w;
    }
    let residual = (b - fit).norm();
    if residual > TOL.residual {
        return Err(QlssError::NoSolution { residual });
    }
    Ok(x)
}

/// Pseudoinverse solution of `A x = b`.
pub fn min_norm_solution(a: &CMat, b: &CVec) -> Result<CVec> {
    if b.len() != a.nrows() {
        return Err(QlssError::ShapeMismatch("b length differs from row count".into()));
    }
    solve_from_svd(&Svd::new(a), b)
}

/// Shape and conditioning of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub kappa: f64,
    #[serde(default)]
    pub norm_target: Option<f64>,
}

impl InstanceSpec {
    pub fn square(n: usize, kappa: f64, norm_target: Option<f64>) -> Self {
        Self { rows: n, cols: n, rank: n, kappa, norm_target }
    }
}

/// Random square instance with Haar singular vectors and log-uniform singular values.
pub fn random_instance(n: usize, kappa: f64, norm_target: Option<f64>, seed: u64) -> Result<LinearSystemInstance> {
    if n < 2 {
        return Err(QlssError::InvalidParams("n must be at least 2".into()));
    }
    random_instance_with(&InstanceSpec::square(n, kappa, norm_target), seed)
}

pub fn random_instance_with(spec: &InstanceSpec, seed: u64) -> Result<LinearSystemInstance> {
    let InstanceSpec { rows, cols, rank, kappa, norm_target } = *spec;
    if rank == 0 || rank > rows.min(cols) {
        return Err(QlssError::InvalidParams(format!("rank {rank} invalid for {rows}x{cols}")));
    }
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(QlssError::InvalidParams(format!("kappa must be >= 1, got {kappa}")));
    }
    if let Some(t) = norm_target {
        let top = if rank == 1 { 1.0 } else { kappa };
        if !(t >= 1.0 && t <= top * (1.0 + 1e-12)) {
            return Err(QlssError::InvalidTarget { target: t, kappa });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uu = haar_unitary(rows, &mut rng);
    let vv = haar_unitary(cols, &mut rng);
    let ln_k = kappa.ln();
    let mut s: Vec<f64> = (0..rank)
        .map(|j| {
            if j == 0 {
                1.0
            } else if j == rank - 1 {
                1.0 / kappa
            } else {
                (-ln_k * rng.random::<f64>()).exp()
            }
        })
        .collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let ur = uu.columns(0, rank).into_owned();
    let vr = vv.columns(0, rank).into_owned();
    let sig = CMat::from_diagonal(&CVec::from_iterator(rank, s.iter().map(|&v| re(v))));
    let a = &ur * sig * vr.adjoint();

    let p = weight_profile(&s, norm_target, &mut rng);
    let w = CVec::from_iterator(
        rank,
        p.iter().map(|&pj| {
            let phi = rng.random::<f64>() * std::f64::consts::TAU;
            C64::from_polar(pj.sqrt(), phi)
        }),
    );
    let b = &ur * w;
    let b = b.map(|z| z / b.norm());
    LinearSystemInstance::new(a, b, kappa)
}

/// Probabilities |w_j|² placed on the singular directions so that
/// Σ p_j / s_j² equals the squared norm target.
fn weight_profile<R: Rng>(s: &[f64], target: Option<f64>, rng: &mut R) -> Vec<f64> {
    let r = s.len();
    let mut p: Vec<f64> = (0..r).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    let Some(t) = target else { return p };
    let g: Vec<f64> = s.iter().map(|v| 1.0 / (v * v)).collect();
    let t2 = t * t;
    let g0: f64 = p.iter().zip(&g).map(|(a, b)| a * b).sum();
    let (idx, lam) = if g0 > t2 {
        (0, (g0 - t2) / (g0 - g[0]))
    } else if g0 < t2 {
        (r - 1, (t2 - g0) / (g[r - 1] - g0))
    } else {
        (0, 0.0)
    };
    let lam = if lam.is_finite() { lam.clamp(0.0, 1.0) } else { 0.0 };
    p.iter_mut().for_each(|v| *v *= 1.0 - lam);
    p[idx] += lam;
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HardCase {
    /// (N′+M)/2 entries of y are zero.
    I,
    /// (N′+M)/2 entries of y are one.
    Ii,
}

/// Member of the norm-estimation hard family together with its hidden data.
#[derive(Debug, Clone)]
pub struct HardInstance {
    pub instance: LinearSystemInstance,
    pub m: usize,
    pub y: Vec<u8>,
    pub case: HardCase,
}

/// Smallest admissible majority margin M for the hard family.
pub fn hard_instance_margin(n: usize, kappa: f64, eps: f64) -> Result<usize> {
    let half = n / 2;
    let lower = (4.0 * n as f64 * eps / kappa).max(1.0);
    let mut m = lower.ceil() as usize;
    if (m + half) % 2 == 1 {
        m += 1;
    }
    if m > half {
        return Err(QlssError::InvalidParams(format!(
            "margin M = {m} exceeds N/2 = {half}; increase N or kappa"
        )));
    }
    Ok(m)
}

/// Instance whose solution norm encodes a promise-majority bit.
pub fn hard_instance_family(n: usize, kappa: f64, eps: f64, case: HardCase, seed: u64) -> Result<HardInstance> {
    if n < 2 || !n.is_power_of_two() {
        return Err(QlssError::InvalidParams(format!("N = {n} must be a power of two")));
    }
    if !(kappa >= 3.0) {
        return Err(QlssError::InvalidParams(format!("kappa = {kappa} must be at least 3")));
    }
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(QlssError::InvalidParams(format!("eps = {eps} must lie in (0, 1/4]")));
    }
    let half = n / 2;
    let m = hard_instance_margin(n, kappa, eps)?;
    let majority = (half + m) / 2;
    let (major, minor) = match case {
        HardCase::I => (0u8, 1u8),
        HardCase::Ii => (1u8, 0u8),
    };
    let mut y: Vec<u8> = (0..half).map(|i| if i < majority { major } else { minor }).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    y.shuffle(&mut rng);

    let ones = CVec::from_element(half, re(1.0 / (half as f64).sqrt()));
    let id = CMat::identity(half, half);
    let c = &id - &ones * ones.adjoint() * re(1.0 - 1.0 / kappa);
    let d = CMat::from_diagonal(&CVec::from_iterator(half, y.iter().map(|&v| re(if v == 0 { 1.0 } else { -1.0 }))));
    let mut a = CMat::zeros(n, n);
    a.view_mut((0, 0), (half, half)).copy_from(&((&c + &id) * re(0.5)));
    a.view_mut((0, half), (half, half)).copy_from(&((&c - &id) * &d * re(0.5)));
    a.view_mut((half, 0), (half, half)).copy_from(&(&d * (&c - &id) * re(0.5)));
    a.view_mut((half, half), (half, half)).copy_from(&(&d * (&c + &id) * &d * re(0.5)));

    let ratio = eps * n as f64 / m as f64;
    let scale = 1.0 / (1.0 + ratio * ratio).sqrt();
    let mut b = CVec::zeros(n);
    b.rows_mut(0, half).copy_from(&(&ones * re(scale)));
    b.rows_mut(half, half).copy_from(&(&ones * re(scale * ratio)));
    let instance = LinearSystemInstance::new(a, b, kappa)?;
    Ok(HardInstance { instance, m, y, case })
}

/// Norm-squared ratio lower bound between the two hard cases.
pub fn hard_instance_ratio_bound(eps: f64) -> f64 {
    let c = 128.0 / 55.0 * eps;
    (1.0 + c) / (1.0 - c)
}

/// Checks that `A` has operator norm at most one.
pub fn check_operator_norm(a: &CMat) -> Result<f64> {
    let n = operator_norm(a);
    if n > 1.0 + TOL.operator_norm {
        return Err(QlssError::NormTooLarge(n));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis;

    #[test]
    fn identity_solution() {
        let a = CMat::identity(4, 4);
        let x = min_norm_solution(&a, &basis(4, 0)).unwrap();
        assert!((x - basis(4, 0)).norm() < 1e-14);
    }

    #[test]
    fn inconsistent_system_rejected() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = re(1.0);
        let err = min_norm_solution(&a, &basis(2, 1)).unwrap_err();
        assert!(matches!(err, QlssError::NoSolution { .. }));
    }

    #[test]
    fn target_out_of_range() {
        let err = random_instance(4, 5.0, Some(6.0), 0).unwrap_err();
        assert!(matches!(err, QlssError::InvalidTarget { .. }));
    }

    #[test]
    fn margin_values() {
        assert_eq!(hard_instance_margin(8, 3.0, 0.25).unwrap(), 4);
        assert_eq!(hard_instance_margin(16, 3.0, 0.25).unwrap(), 6);
        assert_eq!(hard_instance_margin(4, 3.0, 0.25).unwrap(), 2);
        assert!(hard_instance_margin(8, 3.0, 0.5).is_err());
    }
}
