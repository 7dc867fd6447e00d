//! Angular quadrature on the Bloch sphere and the closed-form integral
//! identities used to reduce the entropy integrals to series.
//!
//! The azimuthal integrals are periodic and are done with the uniform
//! trapezoid rule, which converges geometrically for analytic periodic
//! integrands. Polar integrals carry the `sin θ` surface weight and go
//! through adaptive Gauss-Legendre. Neither path shares code with the
//! closed forms in [`crate::wehrl`], so the two can check each other.

mod gauss;
mod special;

pub use gauss::{adaptive as adaptive_gauss_legendre, GaussLegendre, PANEL_ORDER};
pub use special::{log_beta, log_gamma};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Default absolute tolerance of the quadrature oracles.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Panel cap for both integrators.
pub const MAX_PANELS: usize = 1 << 20;

const MIN_PERIODIC_POINTS: usize = 32;

/// Which angle an integrand is a function of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularDomain {
    /// `φ ∈ [0, 2π]`, periodic, unit weight.
    Phi,
    /// `θ ∈ [0, π]` with the `sin θ` weight applied by the integrator.
    Theta,
}

/// A scalar function of one angle together with the domain it lives on.
pub struct IntegrandHandle<F> {
    pub evaluator: F,
    pub domain: AngularDomain,
}

impl<F> IntegrandHandle<F> {
    pub fn phi(evaluator: F) -> Self {
        IntegrandHandle {
            evaluator,
            domain: AngularDomain::Phi,
        }
    }

    pub fn theta(evaluator: F) -> Self {
        IntegrandHandle {
            evaluator,
            domain: AngularDomain::Theta,
        }
    }

    pub fn integrate<T>(&self, tol: T) -> Result<T>
    where
        T: Scalar,
        F: Fn(T) -> T,
    {
        match self.domain {
            AngularDomain::Phi => integrate_phi(&self.evaluator, tol),
            AngularDomain::Theta => integrate_theta(&self.evaluator, tol),
        }
    }
}

/// `(2π/n) Σ_k f(2πk/n)`.
pub fn periodic_trapezoid<T, F>(f: F, n: usize) -> T
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let h = T::TAU() / from_usize(n);
    let mut acc = T::zero();
    for k in 0..n {
        acc = acc + f(h * from_usize(k));
    }
    acc * h
}

/// `∫_0^{2π} f(φ) dφ` by the periodic trapezoid rule, doubling the point
/// count until two successive estimates differ by less than `tol`.
pub fn integrate_phi<T, F>(f: F, tol: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let mut n = 8usize;
    let mut sum = T::zero();
    let step = T::TAU() / from_usize(n);
    for k in 0..n {
        sum = sum + f(step * from_usize(k));
    }
    let mut estimate = sum * step;
    loop {
        // New points sit at the midpoints of the current grid.
        let h = T::TAU() / from_usize(2 * n);
        let mut odd = T::zero();
        for k in 0..n {
            odd = odd + f(h * from_usize(2 * k + 1));
        }
        sum = sum + odd;
        n *= 2;
        let refined = sum * h;
        let change = (refined - estimate).abs();
        estimate = refined;
        if n >= MIN_PERIODIC_POINTS && change <= tol {
            return Ok(estimate);
        }
        if n >= MAX_PANELS {
            return Err(Error::QuadratureNonConvergence {
                estimate: to_f64(estimate),
                change: to_f64(change),
                evaluations: n,
            });
        }
    }
}

/// `∫_0^π f(θ) sin θ dθ` by adaptive Gauss-Legendre; the weight is applied here.
pub fn integrate_theta<T, F>(f: F, tol: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    adaptive_gauss_legendre(|t: T| f(t) * t.sin(), T::zero(), T::PI(), tol, MAX_PANELS)
}

/// Closed form of `∫_0^{2π} (c1 sin x + c2 cos x)^k dx`.
///
/// Zero for odd `k`; for `k = 2m` it is `2π (2m)!/(4^m (m!)^2) (c1² + c2²)^m`,
/// with the central-binomial ratio built as `Π_{j≤m} (2j-1)/(2j)`.
pub fn trig_power_integral<T: Scalar>(c1: T, c2: T, k: u32) -> T {
    if k % 2 == 1 {
        return T::zero();
    }
    let m = k / 2;
    let r2 = c1 * c1 + c2 * c2;
    let mut acc = T::TAU();
    for j in 1..=m {
        let jf: T = from_usize(j as usize);
        acc = acc * (jf + jf - T::one()) / (jf + jf) * r2;
    }
    acc
}

/// Closed form of `∫_0^π sin^{m-1} x dx = π / (2^{m-1} m B((m+1)/2, (m+1)/2))`.
pub fn sin_power_integral<T: Scalar>(m: u32) -> Result<T> {
    if m == 0 {
        return Err(Error::domain("sin_power_integral m", 0.0, "m >= 1"));
    }
    let mf: T = from_usize(m as usize);
    let a = (mf + T::one()) * lit(0.5);
    let ln_b = log_beta(a, a)?;
    let ln_pow2 = (mf - T::one()) * lit::<T>(2.0).ln();
    Ok(T::PI() / mf * (-(ln_b + ln_pow2)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn phi_integrator_basic_values() {
        assert_relative_eq!(integrate_phi(|_p: f64| 1.0, 1e-12).unwrap(), TAU, epsilon = 1e-14);
        assert!(integrate_phi(|p: f64| p.cos(), 1e-12).unwrap().abs() < 1e-14);
        // ∫ dφ/(a - cos φ) = 2π/√(a²-1)
        let got = integrate_phi(|p: f64| 1.0 / (1.1 - p.cos()), 1e-12).unwrap();
        assert_relative_eq!(got, TAU / (1.1f64 * 1.1 - 1.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn periodic_rule_converges_geometrically() {
        let exact = TAU / (1.1f64 * 1.1 - 1.0).sqrt();
        let f = |p: f64| 1.0 / (1.1 - p.cos());
        let mut prev = (periodic_trapezoid(f, 16) - exact).abs();
        for n in [32usize, 64] {
            let err = (periodic_trapezoid(f, n) - exact).abs();
            assert!(err * 10.0 <= prev, "n = {n}: {err:e} vs {prev:e}");
            prev = err;
        }
    }

    #[test]
    fn theta_integrator_applies_weight() {
        assert_relative_eq!(integrate_theta(|_t: f64| 1.0, 1e-12).unwrap(), 2.0, epsilon = 1e-13);
        assert!(integrate_theta(|t: f64| t.cos(), 1e-12).unwrap().abs() < 1e-13);
        assert_relative_eq!(
            integrate_theta(|t: f64| t.sin(), 1e-12).unwrap(),
            PI / 2.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn handle_dispatches_on_domain() {
        let phi = IntegrandHandle::phi(|_x: f64| 1.0);
        let theta = IntegrandHandle::theta(|_x: f64| 1.0);
        assert_relative_eq!(phi.integrate(1e-12).unwrap(), TAU, epsilon = 1e-13);
        assert_relative_eq!(theta.integrate(1e-12).unwrap(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn trig_power_examples() {
        assert_eq!(trig_power_integral(0.3f64, -1.2, 1), 0.0);
        assert_eq!(trig_power_integral(0.3f64, -1.2, 7), 0.0);
        assert_relative_eq!(trig_power_integral(0.3f64, -1.2, 0), TAU);
        // (sin + cos)^2 = 1 + sin 2x
        assert_relative_eq!(trig_power_integral(1.0f64, 1.0, 2), TAU, epsilon = 1e-14);
        let direct = integrate_phi(|x: f64| (x.sin() + x.cos()).powi(2), 1e-13).unwrap();
        assert_relative_eq!(direct, TAU, epsilon = 1e-12);
    }

    #[test]
    fn sin_power_examples() {
        assert_relative_eq!(sin_power_integral::<f64>(1).unwrap(), PI, max_relative = 1e-14);
        assert_relative_eq!(sin_power_integral::<f64>(2).unwrap(), 2.0, max_relative = 1e-13);
        assert_relative_eq!(sin_power_integral::<f64>(3).unwrap(), PI / 2.0, max_relative = 1e-13);
        assert!(sin_power_integral::<f64>(0).is_err());
    }
}
