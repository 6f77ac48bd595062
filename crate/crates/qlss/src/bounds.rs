//! Closed-form query-count expressions.

use serde::{Deserialize, Serialize};

use crate::algorithms::optimal::{Hats, OptimalParams};
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub tag: String,
    pub params: Vec<(String, f64)>,
    pub value: f64,
    pub terms: Vec<(String, f64)>,
}

impl BoundReport {
    fn new(tag: &str, params: &[(&str, f64)], terms: Vec<(&str, f64)>) -> Self {
        let value = terms.iter().map(|t| t.1).sum();
        Self {
            tag: tag.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            terms: terms.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn per_kappa(&self) -> f64 {
        let k = self.params.iter().find(|p| p.0 == "kappa").map(|p| p.1).unwrap_or(1.0);
        self.value / k
    }
}

/// ⌈(κ/2) ln(2/η)⌉.
pub fn half_degree_bound(kappa: f64, eta: f64) -> u64 {
    ((kappa / 2.0) * (2.0 / eta).ln()).ceil().max(1.0) as u64
}

/// S = 3 + 2 ln((R² + L²)/(2L²)).
pub fn spread_factor(l: f64, r: f64) -> f64 {
    3.0 + 2.0 * ((r * r + l * l) / (2.0 * l * l)).ln()
}

/// μ = η/(1−η) · √S.
pub fn mu_for_eta(eta: f64, l: f64, r: f64) -> f64 {
    eta / (1.0 - eta) * spread_factor(l, r).sqrt()
}

/// η with η/(1−η) · √S = μ.
pub fn eta_for_mu(mu: f64, l: f64, r: f64) -> f64 {
    let a = mu / spread_factor(l, r).sqrt();
    a / (1.0 + a)
}

/// η_KP = (ε/μ) √(1−μ²)/√(1−ε²).
pub fn eta_kp(eps: f64, mu: f64) -> f64 {
    (eps / mu) * (1.0 - mu * mu).sqrt() / (1.0 - eps * eps).sqrt()
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("eps = {eps} must lie in (0,1)")));
    }
    Ok(())
}

fn check_practical(kappa: f64) -> Result<()> {
    if !(3.0..=1e6).contains(&kappa) {
        return Err(domain(format!("kappa = {kappa} outside [3, 1e6]")));
    }
    Ok(())
}

fn check_bracket(l: f64, r: f64) -> Result<()> {
    if !(l >= 1.0 && r >= l) {
        return Err(domain(format!("bracket [{l}, {r}] invalid")));
    }
    Ok(())
}

/// Per-run cost 2⌈(κ/2) ln(2/η)⌉ of the known-norm solver.
pub fn known_norm(kappa: f64, eta: f64) -> Result<BoundReport> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(domain(format!("eta = {eta} must lie in (0,1]")));
    }
    let ell = half_degree_bound(kappa, eta) as f64;
    Ok(BoundReport::new("known_norm", &[("kappa", kappa), ("eta", eta)], vec![("2*ell", 2.0 * ell)]))
}

/// Expected cost when ‖x‖ is known to within a factor β.
pub fn corollary_beta(kappa: f64, eps: f64, beta: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    if beta < 1.0 {
        return Err(domain("beta must be at least 1"));
    }
    let b2 = beta * beta + 1.0;
    let eta = eps / (2.0 * b2.sqrt());
    let ratio = ((1.0 + eta) / (1.0 - eta)).powi(2);
    let ell = ((kappa / 2.0) * (4.0 * b2.sqrt() / eps).ln()).ceil();
    Ok(BoundReport::new(
        "known_norm_beta",
        &[("kappa", kappa), ("eps", eps), ("beta", beta)],
        vec![("repetitions*ell", b2 * b2 / (beta * beta) * ratio * ell)],
    ))
}

/// Lower bound on the success probability of one random-t draw.
pub fn random_t_success_lower(eta: f64, l: f64, r: f64) -> f64 {
    (1.0 - eta).powi(2) / ((1.0 + eta).powi(2) * ((r / l).ln() + 1.0))
}

/// Same bound for the 2^{-d} discretized grid.
pub fn random_t_success_lower_discrete(eta: f64, l: f64, r: f64, d: u32) -> f64 {
    let lr = (r / l).ln();
    random_t_success_lower(eta, l, r) * (1.0 - lr * lr * 2f64.powi(-(d as i32) - 1))
}

/// Bound on Pr[t ∉ [‖x‖/β, β‖x‖]] after success.
pub fn random_t_deviation(eta: f64, l: f64, r: f64, beta: f64) -> f64 {
    let q = ((1.0 + eta) / (1.0 - eta)).powi(2);
    q * 4.0 / (beta * beta + 1.0) + 2.0 * eta * eta * (2.0 * (r / l).ln() + 1.0 - 4.0 * beta.ln()) / (1.0 - eta).powi(2)
}

/// Lower bound on ⟨x|ρ|x⟩ for the random-t output ensemble.
pub fn random_t_fidelity(eta: f64, l: f64, r: f64) -> f64 {
    1.0 - 2.0 * eta * eta / (1.0 - eta).powi(2) * (1.5 + ((r * r + l * l) / (2.0 * l * l)).ln())
}

/// Expected cost of the random-t solver with a final projection.
pub fn random_t_theorem(kappa: f64, eta: f64, eps: f64, l: f64, r: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    check_bracket(l, r)?;
    let mu = mu_for_eta(eta, l, r);
    if !(mu < 1.0) {
        return Err(domain(format!("mu = {mu} must be below 1")));
    }
    let ekp = eta_kp(eps, mu);
    let search = 2.0 * (1.0 + eta).powi(2) * ((r / l).ln() + 1.0) / (1.0 - eta).powi(2) * half_degree_bound(kappa, eta) as f64;
    let refine = 2.0 * half_degree_bound(kappa, ekp) as f64 / (1.0 - mu * mu);
    Ok(BoundReport::new(
        "random_t",
        &[("kappa", kappa), ("eta", eta), ("eps", eps), ("L", l), ("R", r), ("mu", mu), ("eta_kp", ekp)],
        vec![("norm_search", search), ("projection", refine)],
    ))
}

pub fn random_t_practical(kappa: f64, eps: f64) -> Result<BoundReport> {
    check_practical(kappa)?;
    check_eps(eps)?;
    let lk = kappa.ln();
    let le = ((1.0 - eps * eps).sqrt() / eps).ln();
    Ok(BoundReport::new(
        "random_t_practical",
        &[("kappa", kappa), ("eps", eps)],
        vec![
            ("5.97 k ln k", 5.97 * lk * kappa),
            ("5.27 k", 5.27 * kappa),
            ("1.07 k ln(1/eps)", 1.07 * kappa * le),
            ("2.89 ln k", 2.89 * lk),
            ("5.02", 5.02),
        ],
    ))
}

/// Number of amplified calls: smallest odd integer at least λ^{-1/2} ln(2/√δ).
pub fn fpaa_rounds(lambda: f64, delta: f64) -> u64 {
    let x = lambda.powf(-0.5) * (2.0 / delta.sqrt()).ln();
    let k = ((x - 1.0) / 2.0).ceil().max(0.0) as u64;
    2 * k + 1
}

fn discretization_factor(lr: f64, d: Option<u32>) -> f64 {
    match d {
        None => 1.0,
        Some(d) => 1.0 - lr * lr * 2f64.powi(-(d as i32) - 1),
    }
}

/// Per-run cost of the amplified random-t norm search.
pub fn fpaa_lemma(kappa: f64, eta: f64, l: f64, r: f64, delta: f64, d: Option<u32>) -> Result<BoundReport> {
    check_bracket(l, r)?;
    let lr = (r / l).ln();
    let disc = discretization_factor(lr, d);
    if !(disc > 0.0) {
        return Err(domain("discretized success bound is not positive; increase d"));
    }
    let lambda = random_t_success_lower(eta, l, r) * disc;
    let calls = fpaa_rounds(lambda, delta) as f64;
    Ok(BoundReport::new(
        "fpaa_lemma",
        &[("kappa", kappa), ("eta", eta), ("L", l), ("R", r), ("delta", delta)],
        vec![("calls*2*ell", calls * 2.0 * half_degree_bound(kappa, eta) as f64)],
    ))
}

/// Expected cost of the amplified solver; `d = None` takes the d → ∞ limit.
pub fn fpaa_theorem(kappa: f64, eta: f64, eps: f64, l: f64, r: f64, delta: f64, d: Option<u32>) -> Result<BoundReport> {
    check_eps(eps)?;
    let lemma = fpaa_lemma(kappa, eta, l, r, delta, d)?;
    let lr = (r / l).ln();
    let mu = mu_for_eta(eta, l, r);
    let ekp = eta_kp(eps, mu);
    let extra = match d {
        None => 0.0,
        Some(d) => lr * lr * 2f64.powi(-(d as i32) + 1),
    };
    let den = 1.0 - eta * eta / (1.0 - eta).powi(2) * (spread_factor(l, r) + extra) / discretization_factor(lr, d);
    if !(den > 0.0) {
        return Err(domain("denominator is not positive"));
    }
    Ok(BoundReport::new(
        "fpaa",
        &[("kappa", kappa), ("eta", eta), ("eps", eps), ("L", l), ("R", r), ("delta", delta), ("mu", mu), ("eta_kp", ekp)],
        vec![
            ("norm_search", lemma.value / (1.0 - delta) / den),
            ("projection", 2.0 * half_degree_bound(kappa, ekp) as f64 / den),
        ],
    ))
}

pub fn fpaa_practical(kappa: f64, eps: f64) -> Result<BoundReport> {
    check_practical(kappa)?;
    check_eps(eps)?;
    let s = (kappa.ln() + 1.0).sqrt();
    let le = ((1.0 - eps * eps).sqrt() / eps).ln();
    Ok(BoundReport::new(
        "fpaa_practical",
        &[("kappa", kappa), ("eps", eps)],
        vec![
            ("9.84 k sqrt(ln k + 1)", 9.84 * s * kappa),
            ("11.1 k", 11.1 * kappa),
            ("1.07 k ln(1/eps)", 1.07 * kappa * le),
            ("4.76 sqrt(ln k + 1)", 4.76 * s),
            ("7.83", 7.83),
        ],
    ))
}

pub fn optimal_theorem(kappa: f64, eps: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    let le = ((1.0 - eps * eps).sqrt() / eps).ln();
    Ok(BoundReport::new(
        "optimal",
        &[("kappa", kappa), ("eps", eps)],
        vec![
            ("56.0 k", 56.0 * kappa),
            ("1.05 k ln(1/eps)", 1.05 * kappa * le),
            ("2.78 ln^3 k", 2.78 * kappa.ln().powi(3)),
            ("3.17", 3.17),
        ],
    ))
}

/// The unsimplified expression behind the optimal bound.
pub fn optimal_exact(kappa: f64, eps: f64, hats: &Hats) -> Result<BoundReport> {
    check_eps(eps)?;
    let p = OptimalParams::new(hats, kappa, eps)?;
    let Hats { beta, chi, c, r, q, delta } = *hats;
    let pd = p.p_bar + delta;
    let w = 1.0 - pd + pd * (1.0 / delta + 1.0).ln();
    let x = pd * (1.0 / delta + 1.0).ln();
    let g = (1.0 + 2.0 * chi).powi(2);
    let l2 = (2.0 * (1.0 + chi) / chi).ln();
    let lc = (std::f64::consts::E * c * beta * beta).ln();
    let lr = r.ln();
    let lq = q.ln();
    let z = [
        g * l2 * lc * w,
        g * l2 * lc * x + 2.0 * g * l2 * lr * w + g * lq * lc * w,
        2.0 * g * l2 * lr * x + 2.0 * g * lq * lr * w + g * lq * lc * x,
        2.0 * g * lq * lr * x,
        2.0 * g * lc * w,
        4.0 * g * lr * w + 2.0 * g * lc * x,
        4.0 * g * lr * x,
    ];
    let ci = 1.0 / c;
    let om = 1.0 - p.mu * p.mu;
    let le = ((1.0 - eps * eps).sqrt() / eps).ln();
    let j = p.j as f64;
    let lin = z[0] / (1.0 - ci)
        + z[1] * ci / (1.0 - ci).powi(2)
        + z[2] * (ci * ci + ci) / (1.0 - ci).powi(3)
        + z[3] * (ci.powi(3) + 4.0 * ci * ci + ci) / (1.0 - ci).powi(4)
        - ((om.sqrt()) / (2.0 * p.mu)).ln();
    Ok(BoundReport::new(
        "optimal_exact",
        &[("kappa", kappa), ("eps", eps), ("mu", p.mu), ("p_bar", p.p_bar), ("J", j)],
        vec![
            ("linear", kappa * lin / om),
            ("precision", kappa * le / om),
            ("J Z4", j * z[4] / om),
            ("J^2 Z5", j * j * z[5] / (2.0 * om)),
            ("J^3 Z6", j.powi(3) * z[6] / (2.0 * om)),
            ("constant", 3.0 / om),
        ],
    ))
}

pub fn quantum_walk(kappa: f64, eps: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    Ok(BoundReport::new(
        "quantum_walk",
        &[("kappa", kappa), ("eps", eps)],
        vec![("234470 k", 234470.0 * kappa), ("4 k ln(2/eps)", 4.0 * kappa * (2.0 / eps).ln())],
    ))
}

pub fn randomization(kappa: f64, eps: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    Ok(BoundReport::new(
        "randomization",
        &[("kappa", kappa), ("eps", eps)],
        vec![
            ("162 k ln k", 162.0 * kappa * kappa.ln()),
            ("188 k", 188.0 * kappa),
            ("5.2 k ln(1/eps)", 5.2 * kappa * (1.0 / eps).ln()),
        ],
    ))
}

pub fn poissonization(kappa: f64, eps: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    Ok(BoundReport::new(
        "poissonization",
        &[("kappa", kappa), ("eps", eps)],
        vec![
            ("1671 k", 1671.0 * kappa),
            ("4.2 k", 4.2 * kappa),
            ("2.0 k ln(1/eps)", 2.0 * kappa * (1.0 / eps).ln()),
        ],
    ))
}

/// Repetitions per candidate in the exhaustive search.
pub fn exhaustive_repetitions(candidates: usize) -> u64 {
    (100.0 * (20.0 * candidates as f64).ln()).ceil() as u64
}

/// Rounds of the noisy binary search over `candidates` values.
pub fn binary_rounds(candidates: usize) -> u64 {
    if candidates <= 1 {
        return 0;
    }
    ((candidates as f64).ln() / 1.5f64.ln()).ceil() as u64
}

pub fn binary_repetitions(candidates: usize) -> u64 {
    let r = binary_rounds(candidates).max(1) as f64;
    (72.0 * (40.0 * r).ln()).ceil() as u64
}

/// 2k|T|⌈κ ln(2/η)/2⌉.
pub fn exhaustive_search(kappa: f64, eta: f64, candidates: usize) -> BoundReport {
    let k = exhaustive_repetitions(candidates) as f64;
    BoundReport::new(
        "exhaustive_search",
        &[("kappa", kappa), ("eta", eta), ("candidates", candidates as f64)],
        vec![("2k|T|ell", 2.0 * k * candidates as f64 * half_degree_bound(kappa, eta) as f64)],
    )
}

/// 2k⌈log_{3/2}|T|⌉⌈κ ln(2/η)/2⌉.
pub fn binary_search(kappa: f64, eta: f64, candidates: usize) -> BoundReport {
    let k = binary_repetitions(candidates) as f64;
    let r = binary_rounds(candidates) as f64;
    BoundReport::new(
        "binary_search",
        &[("kappa", kappa), ("eta", eta), ("candidates", candidates as f64)],
        vec![("2k*rounds*ell", 2.0 * k * r * half_degree_bound(kappa, eta) as f64)],
    )
}

/// Selector for [`bound_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    KnownNorm,
    KnownNormBeta,
    RandomT,
    RandomTPractical,
    FpaaLemma,
    Fpaa,
    FpaaPractical,
    Optimal,
    OptimalExact,
    QuantumWalk,
    Randomization,
    Poissonization,
    ExhaustiveSearch,
    BinarySearch,
}

/// Inputs shared by the bound formulas; unset values take the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    pub kappa: f64,
    pub eps: f64,
    /// Defaults to the η giving μ = `mu`.
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default = "quarter")]
    pub delta: f64,
    /// None is the d → ∞ limit.
    #[serde(default)]
    pub d: Option<u32>,
    /// Defaults to [1, κ].
    #[serde(default)]
    pub bracket: Option<(f64, f64)>,
    #[serde(default = "quarter")]
    pub mu: f64,
    #[serde(default)]
    pub hats: Hats,
}

fn one() -> f64 {
    1.0
}
fn quarter() -> f64 {
    0.25
}

impl BoundParams {
    pub fn new(kappa: f64, eps: f64) -> Self {
        Self { kappa, eps, eta: None, beta: 1.0, delta: 0.25, d: None, bracket: None, mu: 0.25, hats: Hats::default() }
    }

    fn bracket(&self) -> (f64, f64) {
        self.bracket.unwrap_or((1.0, self.kappa))
    }

    fn eta(&self) -> f64 {
        let (l, r) = self.bracket();
        self.eta.unwrap_or_else(|| eta_for_mu(self.mu, l, r))
    }
}

pub fn bound_formula(kind: BoundKind, p: &BoundParams) -> Result<BoundReport> {
    let (l, r) = p.bracket();
    let eta = p.eta();
    let k = p.kappa;
    let cands = crate::algorithms::search::log_candidates(k).len();
    match kind {
        BoundKind::KnownNorm => known_norm(k, p.eta.unwrap_or(p.eps)),
        BoundKind::KnownNormBeta => corollary_beta(k, p.eps, p.beta),
        BoundKind::RandomT => random_t_theorem(k, eta, p.eps, l, r),
        BoundKind::RandomTPractical => random_t_practical(k, p.eps),
        BoundKind::FpaaLemma => fpaa_lemma(k, eta, l, r, p.delta, p.d),
        BoundKind::Fpaa => fpaa_theorem(k, eta, p.eps, l, r, p.delta, p.d),
        BoundKind::FpaaPractical => fpaa_practical(k, p.eps),
        BoundKind::Optimal => optimal_theorem(k, p.eps),
        BoundKind::OptimalExact => optimal_exact(k, p.eps, &p.hats),
        BoundKind::QuantumWalk => quantum_walk(k, p.eps),
        BoundKind::Randomization => randomization(k, p.eps),
        BoundKind::Poissonization => poissonization(k, p.eps),
        BoundKind::ExhaustiveSearch => Ok(exhaustive_search(k, p.eta.unwrap_or(0.025), cands)),
        BoundKind::BinarySearch => Ok(binary_search(k, p.eta.unwrap_or(0.125f64.sqrt()), cands)),
    }
}

/// One row of the solver comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: String,
    pub asymptotic: String,
    pub bound: Option<f64>,
    pub per_kappa: Option<f64>,
}

/// Evaluates every row of the solver comparison at (κ, ε).
pub fn comparison_report(kappa: f64, eps: f64) -> Result<Vec<ComparisonRow>> {
    check_practical(kappa)?;
    let p = BoundParams::new(kappa, eps);
    let rows: Vec<(&str, &str, Option<BoundReport>)> = vec![
        ("quantum walk", "O(k)", Some(quantum_walk(kappa, eps)?)),
        ("randomization", "O(k log k)", Some(randomization(kappa, eps)?)),
        ("randomization + poissonization", "O(k)", Some(poissonization(kappa, eps)?)),
        ("augmented KR + exhaustive", "O(k log k loglog k)", Some(bound_formula(BoundKind::RandomT, &p)?)),
        ("augmented KR + grover", "O(k sqrt(log k) loglog k)", Some(bound_formula(BoundKind::Fpaa, &p)?)),
        ("augmented KR + binary", "O(k loglog k logloglog k)", None),
        ("augmented KR + adiabatic", "O(k)", Some(optimal_theorem(kappa, eps)?)),
    ];
    Ok(rows
        .into_iter()
        .map(|(m, a, b)| ComparisonRow {
            method: m.into(),
            asymptotic: a.into(),
            bound: b.as_ref().map(|r| r.value),
            per_kappa: b.as_ref().map(|r| r.value / kappa),
        })
        .collect())
}

/// CSV rendering of [`comparison_report`].
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut s = String::from("method,asymptotic,bound,value_per_kappa\n");
    for r in rows {
        match (r.bound, r.per_kappa) {
            (Some(b), Some(v)) => s.push_str(&format!("{},{},{:.6e},{:.0}\n", r.method, r.asymptotic, b, v)),
            _ => s.push_str(&format!("{},{},not analyzed,not analyzed\n", r.method, r.asymptotic)),
        }
    }
    s
}
