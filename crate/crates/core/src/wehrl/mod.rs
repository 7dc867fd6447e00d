//! Marginal and density atomic Wehrl entropies.
//!
//! Marginal entropies integrate a one-angle marginal of `Q_a`; density
//! entropies integrate `-Q_a ln Q_a` over one angle with the other held
//! fixed. Every quantity can be evaluated by direct quadrature of its
//! defining integral. Closed forms exist for `W_θ`, `W_φ`, `Z` at the poles
//! and the equator, and `Z_φ` at `ε = 0`; the density entropies in general
//! position also have log-series expansions that converge for `max|β| < 1`.

mod density;
mod marginal;

pub use density::{
    rescaled_z_half_pi, z_phi, z_phi_equatorial_limit, z_phi_series_expanded, z_theta,
    z_theta_half_pi, z_theta_half_pi_series, z_theta_sum_identity,
};
pub use marginal::{
    rescale_w_phi, rescale_w_theta, rescaled_w_phi, w_phi, w_theta, w_theta_information_form,
    w_theta_quadrature,
};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// The lower-bound offset printed alongside the `W_φ` range.
pub const PAPER_OMEGA: f64 = 0.17;
/// The lower-bound offset printed alongside the `Z_{θ=π/2}` range.
pub const PAPER_RHO: f64 = 0.15;

/// How an entropy integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WehrlMethod {
    ClosedForm,
    Series,
    Quadrature,
}

/// Which offsets the rescaled entropies use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Constants {
    /// `ω` and `ρ` evaluated from their defining expressions; rescaled ranges are exactly `[0, ln 2]`.
    #[default]
    Exact,
    /// The rounded `0.17` and `0.15`, with the `W` map exactly as printed.
    PaperLiteral,
}

/// Truncation control for the series forms and tolerance for the quadrature route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy<T> {
    tol: T,
    max_terms: usize,
    fallback_threshold: T,
    quad_tol: T,
}

impl<T: Scalar> Default for SeriesPolicy<T> {
    fn default() -> Self {
        SeriesPolicy {
            tol: lit(1e-12),
            max_terms: 1000,
            fallback_threshold: lit(0.9),
            quad_tol: lit(crate::quadrature::DEFAULT_TOL),
        }
    }
}

impl<T: Scalar> SeriesPolicy<T> {
    pub fn new(tol: T, max_terms: usize, fallback_threshold: T, quad_tol: T) -> Result<Self> {
        if !(tol > T::zero()) || !(quad_tol > T::zero()) {
            return Err(Error::Config("series and quadrature tolerances must be positive".into()));
        }
        if max_terms < 10 {
            return Err(Error::Config(format!("max_terms must be >= 10, got {max_terms}")));
        }
        if !(fallback_threshold > T::zero() && fallback_threshold <= T::one()) {
            return Err(Error::Config(format!(
                "fallback_threshold must lie in (0, 1], got {}",
                to_f64(fallback_threshold)
            )));
        }
        Ok(SeriesPolicy {
            tol,
            max_terms,
            fallback_threshold,
            quad_tol,
        })
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn fallback_threshold(&self) -> T {
        self.fallback_threshold
    }

    pub fn quad_tol(&self) -> T {
        self.quad_tol
    }

    pub fn with_quad_tol(self, quad_tol: T) -> Result<Self> {
        Self::new(self.tol, self.max_terms, self.fallback_threshold, quad_tol)
    }
}

/// `ω = 1 - √(1 - π²/16) + ln[(1 + √(1 - π²/16))/2] ≈ 0.169665`: depth of the `W_φ` range.
pub fn omega<T: Scalar>() -> T {
    central_log_closed(xi_max::<T>())
}

/// `ρ = ½ - ½ ln 2 ≈ 0.153426`: depth of the `Z_{θ=π/2}` range, evaluated
/// as `½ f(1)` so that it cancels the equatorial entropy exactly.
pub fn rho<T: Scalar>() -> T {
    lit::<T>(0.5) * central_log_closed(T::one())
}

/// `π²/16`, the largest `ξ` a physical Bloch vector can reach.
pub(crate) fn xi_max<T: Scalar>() -> T {
    T::PI() * T::PI() / lit(16.0)
}

/// `f(x) = 1 - √(1-x) + ln[(1 + √(1-x))/2]` for `x ∈ [0, 1]`, rearranged as
/// `x/(1+s) + ln_1p(-x/(2(1+s)))` with `s = √(1-x)` so small `x` keeps its digits.
pub(crate) fn central_log_closed<T: Scalar>(x: T) -> T {
    let s = (T::one() - x).max(T::zero()).sqrt();
    let d = x / (T::one() + s);
    d + (-(d * lit(0.5))).ln_1p()
}

/// Power series of [`central_log_closed`]:
/// `Σ_{n≥0} (2n)! / (4^{n+1} ((n+1)!)²) x^{n+1}`.
///
/// Terms shrink by at least `x` per step, so the tail after the current term
/// is bounded by `next / (1 - x)`. Stops once that bound is below `abs_tol`.
pub(crate) fn central_log_series<T: Scalar>(x: T, abs_tol: T, max_terms: usize) -> Result<T> {
    if x == T::zero() {
        return Ok(T::zero());
    }
    if !(x > T::zero() && x < T::one()) {
        return Err(Error::SeriesDomain {
            max_beta: to_f64(x.abs().sqrt()),
            threshold: 1.0,
        });
    }
    let four = lit::<T>(4.0);
    let mut term = x / four;
    let mut sum = T::zero();
    for n in 0..max_terms {
        sum = sum + term;
        let nf: T = crate::scalar::from_usize(n);
        let two = lit::<T>(2.0);
        let next = term * x * (two * nf + T::one()) * (two * nf + two)
            / (four * (nf + two) * (nf + two));
        if next / (T::one() - x) <= abs_tol {
            return Ok(sum + next);
        }
        term = next;
    }
    // Estimate the count that would have been needed from the geometric bound.
    let needed = ((abs_tol * (T::one() - x) / term).ln() / x.ln())
        .to_usize()
        .map_or(usize::MAX, |k| max_terms.saturating_add(k));
    Err(Error::SeriesNonConvergence {
        needed,
        max_terms,
    })
}
