use super::{central_log_closed, central_log_series, omega, Constants, SeriesPolicy, WehrlMethod, PAPER_OMEGA};
use crate::entropy::info_entropy;
use crate::error::{Error, Result};
use crate::husimi::{q_phi, q_theta};
use crate::jcm::BlochVector;
use crate::quadrature::{integrate_phi, integrate_theta};
use crate::scalar::{domain_slack, from_usize, lit, to_f64, xlnx, Scalar};

/// Below this `|h|` the closed form for `W_θ` is replaced by its even power series.
const W_THETA_SERIES_CUTOFF: f64 = 0.05;

/// Slack on the input ranges of the rescaling maps.
const RESCALE_SLACK: f64 = 1e-9;

fn check_h<T: Scalar>(h: T) -> Result<T> {
    if !(h.abs() <= T::one() + domain_slack::<T>()) {
        return Err(Error::domain("h", to_f64(h), "[-1, 1]"));
    }
    Ok(h.max(-T::one()).min(T::one()))
}

/// `W_θ = -∫ Q_θ ln Q_θ sin θ dθ`
/// `    = ln(2√e) + [(1-h)² ln(1-h) - (1+h)² ln(1+h)] / 4h`.
///
/// Near `h = 0` the removable singularity is avoided with
/// `W_θ = ln 2 - Σ_{m≥1} h^{2m} / ((2m-1)(2m)(2m+1))`.
pub fn w_theta<T: Scalar>(h: T) -> Result<T> {
    let h = check_h(h)?;
    if h.abs() < lit(W_THETA_SERIES_CUTOFF) {
        let h2 = h * h;
        let mut pow = h2;
        let mut acc = T::LN_2();
        for m in 1..64usize {
            let k: T = from_usize(2 * m);
            let term = pow / ((k - T::one()) * k * (k + T::one()));
            acc = acc - term;
            if term <= acc * T::epsilon() {
                break;
            }
            pow = pow * h2;
        }
        return Ok(acc);
    }
    // Even in h. (1±a)² ln(1±a) = (1±a) · xlnx(1±a), zero at the poles;
    // grouped so that |h| = 1 gives exactly ½.
    let one = T::one();
    let a = h.abs();
    let up = (one + a) * xlnx(one + a);
    let down = (one - a) * xlnx(one - a);
    Ok(lit::<T>(0.5) + (T::LN_2() - (up - down) / (lit::<T>(4.0) * a)))
}

/// The same quantity written through the information entropy:
/// `H(h) + ½ + (1-h²)/(4h) · ln[(1-h)/(1+h)]`.
pub fn w_theta_information_form<T: Scalar>(h: T) -> Result<T> {
    let h = check_h(h)?;
    if h == T::zero() {
        return Ok(T::LN_2());
    }
    let one = T::one();
    let log_ratio_term = if h.abs() == one {
        T::zero()
    } else {
        (one - h * h) / (lit::<T>(4.0) * h) * ((-h).ln_1p() - h.ln_1p())
    };
    Ok(info_entropy(h)? + lit(0.5) + log_ratio_term)
}

/// `W_θ` by quadrature of its defining integral.
pub fn w_theta_quadrature<T: Scalar>(h: T, tol: T) -> Result<T> {
    let v = BlochVector::new(T::zero(), T::zero(), check_h(h)?)?;
    integrate_theta(|t| -xlnx(q_theta(&v, t)), tol)
}

/// `W_φ = -∫ Q_φ ln Q_φ dφ = ln 2π - f(ξ)`, `ξ = π²(b² + c²)/16`, with
/// `f(ξ) = 1 - √(1-ξ) + ln[(1 + √(1-ξ))/2]` or its power series.
pub fn w_phi<T: Scalar>(b: T, c: T, method: WehrlMethod, policy: &SeriesPolicy<T>) -> Result<T> {
    let transverse = b * b + c * c;
    if !(transverse <= T::one() + domain_slack::<T>()) {
        return Err(Error::domain("b^2 + c^2", to_f64(transverse), "[0, 1]"));
    }
    let transverse = transverse.min(T::one());
    let xi = T::PI() * T::PI() / lit(16.0) * transverse;
    let ln_2pi = T::TAU().ln();
    match method {
        WehrlMethod::ClosedForm => Ok(ln_2pi - central_log_closed(xi)),
        WehrlMethod::Series => {
            let sum = central_log_series(xi, policy.tol() * ln_2pi, policy.max_terms())?;
            Ok(ln_2pi - sum)
        }
        WehrlMethod::Quadrature => {
            // Only (b, c) enter Q_φ; h is irrelevant here.
            let v = BlochVector::new(b, c, T::zero())?;
            integrate_phi(|p| -xlnx(q_phi(&v, p)), policy.quad_tol())
        }
    }
}

/// `Ŵ_θ = ln 2 / ln(4/e) · (2 W_θ - 1)`, mapping `[½, ln 2]` onto `[0, ln 2]`.
pub fn rescale_w_theta<T: Scalar>(w: T) -> Result<T> {
    let slack = lit::<T>(RESCALE_SLACK);
    let lo = lit::<T>(0.5);
    if !(w >= lo - slack && w <= T::LN_2() + slack) {
        return Err(Error::domain("W_theta", to_f64(w), "[1/2, ln 2]"));
    }
    let ln_4_over_e = lit::<T>(2.0) * T::LN_2() - T::one();
    Ok(T::LN_2() / ln_4_over_e * (lit::<T>(2.0) * w - T::one()))
}

/// Rescaled `W_φ`.
///
/// With [`Constants::Exact`] the map is `(ln 2/ω)(w - ln 2π + ω)`, sending
/// `[ln 2π - ω, ln 2π]` onto `[0, ln 2]`. [`Constants::PaperLiteral`] applies
/// `ln 2 / (ln 2π - 0.17) · (w - 0.17)` verbatim; it fixes the upper endpoint
/// at `ln 2` but maps the lower one to about `0.6226`, not to zero.
pub fn rescale_w_phi<T: Scalar>(w: T, constants: Constants) -> Result<T> {
    let om = omega::<T>();
    let ln_2pi = T::TAU().ln();
    let slack = lit::<T>(RESCALE_SLACK);
    if !(w >= ln_2pi - om - slack && w <= ln_2pi + slack) {
        return Err(Error::domain("W_phi", to_f64(w), "[ln 2pi - omega, ln 2pi]"));
    }
    Ok(match constants {
        Constants::Exact => T::LN_2() * ((w - ln_2pi) + om) / om,
        Constants::PaperLiteral => {
            let p = lit::<T>(PAPER_OMEGA);
            T::LN_2() / (ln_2pi - p) * (w - p)
        }
    })
}

/// Rescaled `W_φ` straight from `(b, c)`. With [`Constants::Exact`] it is
/// `ln 2 · (ω - f(ξ))/ω`, which hits `ln 2` at `b = c = 0` and `0` at
/// `b² + c² = 1` without rounding; [`Constants::PaperLiteral`] goes through
/// [`rescale_w_phi`].
pub fn rescaled_w_phi<T: Scalar>(b: T, c: T, constants: Constants) -> Result<T> {
    let transverse = b * b + c * c;
    if !(transverse <= T::one() + domain_slack::<T>()) {
        return Err(Error::domain("b^2 + c^2", to_f64(transverse), "[0, 1]"));
    }
    let xi = T::PI() * T::PI() / lit(16.0) * transverse.min(T::one());
    match constants {
        Constants::Exact => {
            let om = omega::<T>();
            Ok(T::LN_2() * (om - central_log_closed(xi)) / om)
        }
        Constants::PaperLiteral => rescale_w_phi(T::TAU().ln() - central_log_closed(xi), constants),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{LN_2, TAU};

    const QUAD_TOL: f64 = 1e-10;

    fn policy() -> SeriesPolicy<f64> {
        SeriesPolicy::default()
    }

    #[test]
    fn w_theta_bounds_attained() {
        assert_relative_eq!(w_theta(0.0f64).unwrap(), LN_2, max_relative = 1e-15);
        assert_relative_eq!(w_theta(1.0f64).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(w_theta(-1.0f64).unwrap(), 0.5, epsilon = 1e-15);
        assert!(w_theta(1.0 + 1e-9f64).is_err());
    }

    #[test]
    fn w_theta_midpoint_matches_quadrature() {
        let q = w_theta_quadrature(0.5f64, 1e-12).unwrap();
        assert_relative_eq!(q, 0.65036, epsilon = 1e-5);
        assert!((w_theta(0.5f64).unwrap() - q).abs() < 1e-11);
    }

    #[test]
    fn w_theta_two_forms_agree() {
        for k in -100..=100 {
            let h = k as f64 / 100.0;
            let a = w_theta(h).unwrap();
            let b = w_theta_information_form(h).unwrap();
            assert!((a - b).abs() < 1e-12, "h = {h}: {a} vs {b}");
            assert!((0.5 - 1e-15..=LN_2 + 1e-15).contains(&a));
        }
        // Continuity across the series/closed-form switch.
        let eps = 1e-12;
        let lo = w_theta(W_THETA_SERIES_CUTOFF - eps).unwrap();
        let hi = w_theta(W_THETA_SERIES_CUTOFF + eps).unwrap();
        assert!((lo - hi).abs() < 1e-13);
    }

    #[test]
    fn w_phi_examples() {
        let p = policy();
        for m in [WehrlMethod::ClosedForm, WehrlMethod::Series, WehrlMethod::Quadrature] {
            assert_relative_eq!(w_phi(0.0, 0.0, m, &p).unwrap(), TAU.ln(), epsilon = 1e-12);
            let extreme = w_phi(1.0, 0.0, m, &p).unwrap();
            assert!((extreme - (TAU.ln() - omega::<f64>())).abs() < 1e-10, "{m:?}");
            assert!((extreme - 1.6682).abs() < 1e-4);
            let rotated = w_phi(0.5f64.sqrt(), 0.5f64.sqrt(), m, &p).unwrap();
            assert!((rotated - extreme).abs() < 1e-10, "{m:?}");
        }
        assert!(w_phi(1.0, 0.1, WehrlMethod::ClosedForm, &p).is_err());
    }

    #[test]
    fn w_phi_methods_agree_on_a_sweep() {
        let p = policy();
        for k in 0..=50 {
            let r = k as f64 / 50.0;
            let (b, c) = (r * 0.3f64.cos(), r * 0.3f64.sin());
            let closed = w_phi(b, c, WehrlMethod::ClosedForm, &p).unwrap();
            let series = w_phi(b, c, WehrlMethod::Series, &p).unwrap();
            let quad = w_phi(b, c, WehrlMethod::Quadrature, &p).unwrap();
            assert!((closed - series).abs() < 1e-11);
            assert!((closed - quad).abs() < QUAD_TOL * 10.0);
        }
    }

    #[test]
    fn rescale_w_theta_examples() {
        assert_eq!(rescale_w_theta(0.5f64).unwrap(), 0.0);
        assert_relative_eq!(rescale_w_theta(LN_2).unwrap(), LN_2, max_relative = 1e-14);
        // ln 2 · 0.2 / (2 ln 2 - 1)
        let w = rescale_w_theta(0.6f64).unwrap();
        assert_relative_eq!(w, LN_2 * 0.2 / (2.0 * LN_2 - 1.0), max_relative = 1e-14);
        assert!((w - 0.35885).abs() < 5e-5);
        assert!(rescale_w_theta(0.49f64).is_err());
        assert!(rescale_w_theta(0.7f64).is_err());
    }

    #[test]
    fn rescale_w_phi_examples() {
        let top = TAU.ln();
        let bottom = top - omega::<f64>();
        assert_relative_eq!(rescale_w_phi(top, Constants::Exact).unwrap(), LN_2, max_relative = 1e-14);
        assert_relative_eq!(
            rescale_w_phi(top, Constants::PaperLiteral).unwrap(),
            LN_2,
            max_relative = 1e-14
        );
        assert!(rescale_w_phi(bottom, Constants::Exact).unwrap().abs() < 1e-14);
        let literal = rescale_w_phi(bottom, Constants::PaperLiteral).unwrap();
        assert!((literal - LN_2 / (top - 0.17) * (bottom - 0.17)).abs() < 1e-15);
        assert_relative_eq!(literal, 0.6226, epsilon = 1e-4);
        assert!(rescale_w_phi(top + 1e-6, Constants::Exact).is_err());
        assert!(rescale_w_phi(bottom - 1e-6, Constants::Exact).is_err());
    }

    #[test]
    fn rescaled_from_bloch_hits_endpoints_exactly() {
        assert_eq!(rescaled_w_phi(0.0f64, 0.0, Constants::Exact).unwrap(), LN_2);
        assert_eq!(rescaled_w_phi(1.0f64, 0.0, Constants::Exact).unwrap(), 0.0);
        assert_eq!(rescaled_w_phi(0.0f64, -1.0, Constants::Exact).unwrap(), 0.0);
        let p = policy();
        for r in [0.1, 0.5, 0.9] {
            let via_w = rescale_w_phi(w_phi(r, 0.0, WehrlMethod::ClosedForm, &p).unwrap(), Constants::Exact).unwrap();
            assert!((rescaled_w_phi(r, 0.0, Constants::Exact).unwrap() - via_w).abs() < 1e-14);
        }
        let literal = rescaled_w_phi(1.0f64, 0.0, Constants::PaperLiteral).unwrap();
        assert!((literal - 0.6226).abs() < 1e-4);
    }

    #[test]
    fn rescaled_maps_are_decreasing_in_bloch_length() {
        // W rises as the transverse length drops; the rescaled value then
        // decreases monotonically in r, like γ does in η.
        let p = policy();
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let r = k as f64 / 200.0;
            let w = w_phi(r, 0.0, WehrlMethod::ClosedForm, &p).unwrap();
            let scaled = rescale_w_phi(w, Constants::Exact).unwrap();
            assert!(scaled < prev || k == 0);
            prev = scaled;
        }
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let h = k as f64 / 200.0;
            let scaled = rescale_w_theta(w_theta(h).unwrap()).unwrap();
            assert!(scaled < prev);
            prev = scaled;
        }
    }

    #[test]
    fn quadrature_reaches_lower_bound_for_pure_polar_state() {
        let q = w_theta_quadrature(1.0f64, 1e-12).unwrap();
        assert!((q - 0.5).abs() < 1e-11);
    }
}
