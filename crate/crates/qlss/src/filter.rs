use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    /// Keeps the kernel, suppresses singular values ≥ Δ to at most η.
    Projection,
    /// Keeps the kernel, approximately negates singular values ≥ Δ.
    Reflection,
}

/// How the half-degree ℓ is chosen for a target tail η.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeRule {
    /// Smallest ℓ whose tail 1/T_ℓ((1+Δ²)/(1−Δ²)) is at most η.
    #[default]
    Exact,
    /// ⌈ln(2/η)/(2Δ)⌉, the closed-form upper bound on the exact rule.
    Loose,
}

#[inline]
fn c<T: Float>(v: f64) -> T {
    T::from(v).expect("representable constant")
}

/// acosh(1 + y) for y ≥ 0 without cancellation near zero.
pub fn acosh1p<T: Float>(y: T) -> T {
    (y + (y * (c::<T>(2.0) + y)).sqrt()).ln_1p()
}

/// Chebyshev polynomial T_ℓ(z) by its trigonometric/hyperbolic closed form.
pub fn chebyshev<T: Float>(ell: u64, z: T) -> T {
    let l: T = c(ell as f64);
    if z.abs() <= T::one() {
        (l * z.acos()).cos()
    } else if z > T::one() {
        (l * z.acosh()).cosh()
    } else {
        let sign = if ell % 2 == 0 { T::one() } else { -T::one() };
        sign * (l * (-z).acosh()).cosh()
    }
}

/// T_ℓ(1 + y), accurate when y is tiny.
fn chebyshev_shifted<T: Float>(ell: u64, y: T) -> T {
    let l: T = c(ell as f64);
    let two: T = c(2.0);
    if y >= T::zero() {
        (l * acosh1p(y)).cosh()
    } else if y >= -two {
        // acos(1 − u) = 2 asin(√(u/2))
        let theta = two * ((-y) / two).sqrt().min(T::one()).asin();
        (l * theta).cos()
    } else {
        chebyshev(ell, T::one() + y)
    }
}

fn gap_shift<T: Float>(delta: T) -> T {
    let d2 = delta * delta;
    c::<T>(2.0) * d2 / (T::one() - d2)
}

fn check_domain<T: Float>(delta: T, eta: T) -> Result<()> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(domain(format!("gap must lie in (0,1), got {:?}", delta.to_f64())));
    }
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(domain(format!("tail must lie in (0,1], got {:?}", eta.to_f64())));
    }
    Ok(())
}

/// Half-degree ℓ for gap Δ and tail η (at least 1).
pub fn select_degree<T: Float>(delta: T, eta: T) -> Result<u64> {
    select_degree_with(delta, eta, DegreeRule::Exact)
}

pub fn select_degree_with<T: Float>(delta: T, eta: T, rule: DegreeRule) -> Result<u64> {
    check_domain(delta, eta)?;
    let raw = match rule {
        DegreeRule::Exact => eta.recip().acosh() / acosh1p(gap_shift(delta)),
        DegreeRule::Loose => (c::<T>(2.0) / eta).ln() / (c::<T>(2.0) * delta),
    };
    let ell = raw.ceil().to_f64().unwrap_or(f64::MAX);
    Ok((ell as u64).max(1))
}

/// Closed-form bound ⌈ln(2/η)/(2Δ)⌉ on the half-degree.
pub fn loose_degree(delta: f64, eta: f64) -> u64 {
    (((2.0 / eta).ln() / (2.0 * delta)).ceil() as u64).max(1)
}

/// Chebyshev filter polynomial of degree 2ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec<T = f64> {
    pub delta: T,
    pub eta: T,
    pub ell: u64,
    pub kind: FilterKind,
}

impl<T: Float> FilterSpec<T> {
    pub fn new(delta: T, eta: T, kind: FilterKind) -> Result<Self> {
        Self::with_rule(delta, eta, kind, DegreeRule::Exact)
    }

    pub fn with_rule(delta: T, eta: T, kind: FilterKind, rule: DegreeRule) -> Result<Self> {
        let ell = select_degree_with(delta, eta, rule)?;
        Ok(Self { delta, eta, ell, kind })
    }

    /// Spec with an explicit half-degree; η is set to the achieved tail.
    pub fn with_degree(delta: T, ell: u64, kind: FilterKind) -> Result<Self> {
        check_domain(delta, T::one())?;
        if ell == 0 {
            return Err(domain("half-degree must be positive"));
        }
        let mut spec = Self { delta, eta: T::one(), ell, kind };
        spec.eta = spec.tail_bound();
        Ok(spec)
    }

    /// 1/T_ℓ((1+Δ²)/(1−Δ²)), the largest |F| on [Δ, 1].
    pub fn tail_bound(&self) -> T {
        let b = acosh1p(gap_shift(self.delta));
        (c::<T>(self.ell as f64) * b).cosh().recip()
    }

    /// F_{Δ,ℓ}(x).
    pub fn projection(&self, x: T) -> Result<T> {
        let one = T::one();
        let slack: T = c(1e-12);
        if !(x.abs() <= one + slack) {
            return Err(domain(format!("filter argument {:?} outside [-1,1]", x.to_f64())));
        }
        let x = x.abs().min(one);
        let d2 = self.delta * self.delta;
        let two: T = c(2.0);
        let y = two * (d2 - x * x) / (one - d2);
        let l: T = c(self.ell as f64);
        let b = acosh1p(gap_shift(self.delta));
        if y > T::zero() {
            // cosh(ℓa)/cosh(ℓb) without overflow
            let a = acosh1p(y);
            let num = one + (-two * l * a).exp();
            let den = one + (-two * l * b).exp();
            Ok((l * (a - b)).exp() * num / den)
        } else {
            Ok(chebyshev_shifted(self.ell, y) / (l * b).cosh())
        }
    }

    /// K_{Δ,ℓ}(x) = (2F − 1 + F(Δ)) / (1 + F(Δ)).
    pub fn reflection(&self, x: T) -> Result<T> {
        let f = self.projection(x)?;
        let e = self.tail_bound();
        let one = T::one();
        Ok((c::<T>(2.0) * f - one + e) / (one + e))
    }

    /// Evaluates the polynomial selected by `kind`.
    pub fn eval(&self, x: T) -> Result<T> {
        match self.kind {
            FilterKind::Projection => self.projection(x),
            FilterKind::Reflection => self.reflection(x),
        }
    }

    pub fn degree(&self) -> u64 {
        2 * self.ell
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_small_cases() {
        assert!((chebyshev(3, 0.5f64) + 1.0).abs() < 1e-14);
        for l in 0..=20 {
            assert!((chebyshev(l, 1.0f64) - 1.0).abs() < 1e-14);
        }
        assert!((chebyshev(3, -2.0f64) - (4.0 * -8.0 + 6.0)).abs() < 1e-10);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(select_degree(0.1f64, 0.01).unwrap(), 27);
        assert_eq!(loose_degree(0.1, 0.01), 27);
        assert_eq!(select_degree(0.5f64, 1.0).unwrap(), 1);
        assert!(select_degree(1.0f64, 0.5).is_err());
        assert!(select_degree(0.5f64, 0.0).is_err());
    }

    #[test]
    fn tail_of_linear_filter() {
        let spec = FilterSpec::with_degree(0.5f64, 1, FilterKind::Projection).unwrap();
        assert!((spec.tail_bound() - 0.6).abs() < 1e-14);
    }

    #[test]
    fn single_precision_matches() {
        let s64 = FilterSpec::new(0.1f64, 0.03, FilterKind::Reflection).unwrap();
        let s32 = FilterSpec::new(0.1f32, 0.03, FilterKind::Reflection).unwrap();
        assert_eq!(s64.ell, s32.ell);
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let a = s64.eval(x).unwrap();
            let b = s32.eval(x as f32).unwrap() as f64;
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn huge_degree_is_finite() {
        let spec = FilterSpec::new(1e-6f64, 1e-10, FilterKind::Projection).unwrap();
        assert!(spec.ell > 1_000_000);
        assert!((spec.eval(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(spec.eval(0.5e-6).unwrap().is_finite());
        assert!(spec.eval(0.5).unwrap().abs() <= spec.tail_bound());
    }
}
