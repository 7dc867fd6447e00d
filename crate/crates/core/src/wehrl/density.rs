use super::{
    central_log_closed, central_log_series, rho, Constants, SeriesPolicy, WehrlMethod, PAPER_RHO,
};
use super::marginal::w_theta_information_form;
use crate::entropy::info_entropy;
use crate::error::{Error, Result};
use crate::husimi::{q_at, transverse_projection};
use crate::jcm::BlochVector;
use crate::quadrature::{integrate_phi, integrate_theta, log_beta};
use crate::scalar::{domain_slack, from_usize, lit, to_f64, xlnx, Scalar};

/// Angles this close to a pole or the equator use the closed forms there.
const ANGLE_EPS: f64 = 1e-12;

/// `|ε|` below which `Z_φ` is evaluated by its `ε → 0` closed form.
const EPSILON_EPS: f64 = 1e-12;

fn ln_4pi<T: Scalar>() -> T {
    (lit::<T>(4.0) * T::PI()).ln()
}

fn check_theta<T: Scalar>(theta: T) -> Result<()> {
    if !(theta >= T::zero() && theta <= T::PI()) {
        return Err(Error::domain("theta", to_f64(theta), "[0, pi]"));
    }
    Ok(())
}

/// `ln k!` for `k = 0..=n`.
fn ln_factorials<T: Scalar>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = T::zero();
    out.push(acc);
    for k in 1..=n {
        acc = acc + from_usize::<T>(k).ln();
        out.push(acc);
    }
    out
}

/// Smallest order `N` such that `scale · Σ_{n>N} M^n / (n(n-1))`, bounded by
/// `scale · M^{N+1} / ((N+1) N (1-M))`, is at most `tol`.
fn orders_needed<T: Scalar>(m: T, scale: T, tol: T, max_terms: usize) -> Result<usize> {
    if m == T::zero() {
        return Ok(1);
    }
    let one = T::one();
    let mut pow = m * m;
    let mut n = 1usize;
    while n < 50_000_000 {
        pow = pow * m;
        let nf: T = from_usize(n);
        if scale * pow / ((nf + one) * nf * (one - m)) <= tol {
            if n > max_terms {
                return Err(Error::SeriesNonConvergence {
                    needed: n,
                    max_terms,
                });
            }
            return Ok(n.max(1));
        }
        n += 1;
    }
    Err(Error::SeriesNonConvergence {
        needed: usize::MAX,
        max_terms,
    })
}

fn guard<T: Scalar>(max_beta: T, policy: &SeriesPolicy<T>) -> Result<()> {
    if !(max_beta <= policy.fallback_threshold()) {
        return Err(Error::SeriesDomain {
            max_beta: to_f64(max_beta),
            threshold: to_f64(policy.fallback_threshold()),
        });
    }
    Ok(())
}

/// `base^k` carried as `k ln|base|`; `None` when the power vanishes.
fn ln_power<T: Scalar>(base: T, k: usize) -> Option<T> {
    if k == 0 {
        Some(T::zero())
    } else if base == T::zero() {
        None
    } else {
        Some(from_usize::<T>(k) * base.abs().ln())
    }
}

/// Density Wehrl entropy at fixed polar angle, `Z_θ = -∫_0^{2π} Q_a ln Q_a dφ`.
///
/// Closed forms exist at the poles, where `Q_a` does not depend on `φ`, and on
/// the equator (see [`z_theta_half_pi`]).
pub fn z_theta<T: Scalar>(
    v: &BlochVector<T>,
    theta: T,
    method: WehrlMethod,
    policy: &SeriesPolicy<T>,
) -> Result<T> {
    check_theta(theta)?;
    match method {
        WehrlMethod::ClosedForm => {
            let eps = lit::<T>(ANGLE_EPS);
            if theta <= eps {
                Ok(z_pole(v.h()))
            } else if T::PI() - theta <= eps {
                Ok(z_pole(-v.h()))
            } else if (theta - T::FRAC_PI_2()).abs() <= eps {
                z_theta_half_pi(v.b(), v.c())
            } else {
                Err(Error::NoClosedForm("Z_theta away from the poles and the equator"))
            }
        }
        WehrlMethod::Series => z_theta_series(v, theta, policy),
        WehrlMethod::Quadrature => {
            integrate_phi(|phi| -xlnx(q_at(v, theta, phi)), policy.quad_tol())
        }
    }
}

/// `Z` on the axis where `β = x` for every azimuth: `(1+x)/2 · [ln 4π - ln(1+x)]`.
fn z_pole<T: Scalar>(x: T) -> T {
    let one_plus = (T::one() + x).max(T::zero());
    lit::<T>(0.5) * (one_plus * ln_4pi::<T>() - xlnx(one_plus))
}

/// `(1 + h cos θ) ln(4π)/2 - ½{h cos θ + Σ_{n≥2} Σ_{r≤n/2} (-1)^n (n-2)! /
/// ((n-2r)! (r!)² 4^r) (h cos θ)^{n-2r} sin^{2r}θ (b²+c²)^r}`.
fn z_theta_series<T: Scalar>(v: &BlochVector<T>, theta: T, policy: &SeriesPolicy<T>) -> Result<T> {
    let (st, ct) = theta.sin_cos();
    let x = v.h() * ct;
    let y2 = st * st * v.transverse_sqr();
    let max_beta = x.abs() + y2.sqrt();
    guard(max_beta, policy)?;

    let half = lit::<T>(0.5);
    let lead = (T::one() + x) * ln_4pi::<T>() * half;
    let orders = orders_needed(max_beta, half, policy.tol() * lead.abs(), policy.max_terms())?;
    let lnf = ln_factorials::<T>(orders);
    let ln4 = lit::<T>(4.0).ln();

    let mut acc = x;
    for n in 2..=orders {
        let mut inner = T::zero();
        for r in 0..=n / 2 {
            let p = n - 2 * r;
            let (Some(lx), Some(ly)) = (ln_power(x, p), ln_power(y2, r)) else {
                continue;
            };
            let ln_mag = lnf[n - 2] - lnf[p] - lit::<T>(2.0) * lnf[r] - from_usize::<T>(r) * ln4 + lx + ly;
            let term = ln_mag.exp();
            inner = if x < T::zero() && p % 2 == 1 { inner - term } else { inner + term };
        }
        acc = if n % 2 == 0 { acc + inner } else { acc - inner };
    }
    Ok(lead - half * acc)
}

/// Density Wehrl entropy at fixed azimuth, `Z_φ = -∫_0^π Q_a ln Q_a sin θ dθ`.
///
/// The closed form is the `ε = b cos φ + c sin φ → 0` limit
/// [`z_phi_equatorial_limit`].
pub fn z_phi<T: Scalar>(
    v: &BlochVector<T>,
    phi: T,
    method: WehrlMethod,
    policy: &SeriesPolicy<T>,
) -> Result<T> {
    if !phi.is_finite() {
        return Err(Error::domain("phi", to_f64(phi), "finite"));
    }
    match method {
        WehrlMethod::ClosedForm => {
            if transverse_projection(v, phi).abs() <= lit(EPSILON_EPS) {
                z_phi_equatorial_limit(v.h())
            } else {
                Err(Error::NoClosedForm("Z_phi with b cos(phi) + c sin(phi) != 0"))
            }
        }
        WehrlMethod::Series => {
            let eps = transverse_projection(v, phi);
            let max_beta = (v.h() * v.h() + eps * eps).sqrt();
            guard(max_beta, policy)?;
            let lead = z_phi_lead(eps);
            let scale = T::one() / T::TAU();
            let orders = orders_needed(max_beta, scale, policy.tol() * lead.abs(), policy.max_terms())?;
            Ok(lead + z_phi_collapsed_terms(v.h(), eps, orders.max(2)))
        }
        WehrlMethod::Quadrature => {
            integrate_theta(|theta| -xlnx(q_at(v, theta, phi)), policy.quad_tol())
        }
    }
}

/// `(2 + πε/2) ln(4π) / 4π - ε/8`: the orders 0 and 1 of the log expansion.
fn z_phi_lead<T: Scalar>(eps: T) -> T {
    let four_pi = lit::<T>(4.0) * T::PI();
    (lit::<T>(2.0) + T::FRAC_PI_2() * eps) * four_pi.ln() / four_pi - eps / lit(8.0)
}

/// Orders `2..=max_order` of the `Z_φ` expansion.
///
/// Order `N` contributes `(-1)^{N+1}/(4π N(N-1)) ∫ β^N sin θ dθ`. Expanding
/// `β^N` binomially leaves moments `∫ cos^{2m}θ sin^{k+1}θ dθ = B(m+½, (k+2)/2)`,
/// used here in closed form.
fn z_phi_collapsed_terms<T: Scalar>(h: T, eps: T, max_order: usize) -> T {
    let lnf = ln_factorials::<T>(max_order);
    let half = lit::<T>(0.5);
    let mut odd = T::zero();
    let mut even = T::zero();
    for total in 2..=max_order {
        let n = total / 2;
        if total % 2 == 0 {
            for r in 0..=n {
                let m = n - r;
                let (Some(lh), Some(le)) = (ln_power(h, 2 * m), ln_power(eps, 2 * r)) else {
                    continue;
                };
                let coef = lnf[2 * n - 2] - lnf[2 * r] - lnf[2 * n - 2 * r];
                let beta = log_beta(from_usize::<T>(m) + half, from_usize::<T>(r + 1))
                    .expect("positive Beta arguments");
                even = even + (coef + beta + lh + le).exp();
            }
        } else {
            for r in 0..=n {
                let m = n - r;
                let (Some(lh), Some(le)) = (ln_power(h, 2 * m), ln_power(eps, 2 * r + 1)) else {
                    continue;
                };
                let coef = lnf[2 * n - 1] - lnf[2 * r + 1] - lnf[2 * n - 2 * r];
                let beta = log_beta(from_usize::<T>(m) + half, from_usize::<T>(r + 1) + half)
                    .expect("positive Beta arguments");
                let term = (coef + beta + lh + le).exp();
                odd = if eps < T::zero() { odd - term } else { odd + term };
            }
        }
    }
    (odd - even) / (lit::<T>(4.0) * T::PI())
}

/// `Z_φ` from the triple-sum expansion with its inner alternating sums
/// written out term by term, truncated at outer index `n ≤ orders`.
///
/// The alternating binomial sums cancel catastrophically once `n` passes a
/// few dozen, so this is a transcription check for low orders only;
/// [`z_phi`] with [`WehrlMethod::Series`] evaluates the same expansion
/// with the inner sums in closed form.
pub fn z_phi_series_expanded<T: Scalar>(v: &BlochVector<T>, phi: T, orders: usize) -> Result<T> {
    let h = v.h();
    let eps = transverse_projection(v, phi);
    let lnf = ln_factorials::<T>(2 * orders + 2);
    let binom = |n: usize, k: usize| (lnf[n] - lnf[k] - lnf[n - k]).exp();
    let four = lit::<T>(4.0);
    let ln4 = four.ln();

    let mut odd = T::zero();
    let mut even = T::zero();
    for n in 1..=orders {
        for r in 0..=n {
            let m = n - r;
            let hp = h.powi(2 * m as i32);

            // (2n-1)! (n-r)! (-1)^s h^{2(n-r)} ε^{2r+1} /
            //   ((2r+1)! (2n-2r)! (n-r-s)! s! (2s+2r+3) 4^{s+r+2} B(s+r+2, s+r+2))
            let mut inner = T::zero();
            for s in 0..=m {
                let a = from_usize::<T>(s + r + 2);
                let ln_den = from_usize::<T>(2 * s + 2 * r + 3).ln() + a * ln4 + log_beta(a, a)?;
                let term = binom(m, s) * (-ln_den).exp();
                inner = if s % 2 == 0 { inner + term } else { inner - term };
            }
            let coef = (lnf[2 * n - 1] - lnf[2 * r + 1] - lnf[2 * n - 2 * r]).exp();
            odd = odd + coef * hp * eps.powi(2 * r as i32 + 1) * inner;

            // (2n-2)! r! (-1)^s h^{2(n-r)} ε^{2r} /
            //   ((2r)! (2n-2r)! (r-s)! s! (2n+2s-2r+1))
            let mut inner = T::zero();
            for s in 0..=r {
                let term = binom(r, s) / from_usize::<T>(2 * n + 2 * s - 2 * r + 1);
                inner = if s % 2 == 0 { inner + term } else { inner - term };
            }
            let coef = (lnf[2 * n - 2] - lnf[2 * r] - lnf[2 * n - 2 * r]).exp();
            even = even + coef * hp * eps.powi(2 * r as i32) * inner;
        }
    }
    Ok(z_phi_lead(eps) + odd - even / T::TAU())
}

/// `Z_φ` at `ε = 0`: `{ln 2π + H(h) + ½ + (1-h²)/(4h) ln[(1-h)/(1+h)]} / 2π`.
pub fn z_phi_equatorial_limit<T: Scalar>(h: T) -> Result<T> {
    Ok((T::TAU().ln() + w_theta_information_form(h)?) / T::TAU())
}

/// `(Z_{θ=0} + Z_{θ=π}, H(h) + ln 2π)`; the two sides agree identically.
pub fn z_theta_sum_identity<T: Scalar>(v: &BlochVector<T>) -> (T, T) {
    let h = v.h().max(-T::one()).min(T::one());
    let lhs = z_pole(h) + z_pole(-h);
    let rhs = info_entropy(h).expect("clamped into [-1, 1]") + T::TAU().ln();
    (lhs, rhs)
}

fn check_transverse<T: Scalar>(b: T, c: T) -> Result<T> {
    let xi = b * b + c * c;
    if !(xi <= T::one() + domain_slack::<T>()) {
        return Err(Error::domain("b^2 + c^2", to_f64(xi), "[0, 1]"));
    }
    Ok(xi.min(T::one()))
}

/// `Z_{θ=π/2} = ½ ln 4π - ½ + ½√(1-ξ̄) - ½ ln[(1 + √(1-ξ̄))/2]`, `ξ̄ = b² + c²`.
pub fn z_theta_half_pi<T: Scalar>(b: T, c: T) -> Result<T> {
    let xi = check_transverse(b, c)?;
    let half = lit::<T>(0.5);
    Ok(half * (ln_4pi::<T>() - central_log_closed(xi)))
}

/// Power-series form `½ ln 4π - ⅛ Σ (2n)! ξ̄^{n+1} / (4^n ((n+1)!)²)`.
///
/// At `ξ̄ = 1` the terms decay only like `n^{-3/2}`, so this obeys the same
/// `fallback_threshold` guard as the other series, applied to `√ξ̄ = max|β|`.
pub fn z_theta_half_pi_series<T: Scalar>(b: T, c: T, policy: &SeriesPolicy<T>) -> Result<T> {
    let xi = check_transverse(b, c)?;
    guard(xi.sqrt(), policy)?;
    let half = lit::<T>(0.5);
    let lead = half * ln_4pi::<T>();
    let sum = central_log_series(xi, policy.tol() * lead / half, policy.max_terms())?;
    Ok(lead - half * sum)
}

/// Rescaled `Z_{θ=π/2}`: `(ln 2/ρ)(Z - ½ ln 4π + ρ)`, onto `[0, ln 2]` with the
/// exact `ρ`; [`Constants::PaperLiteral`] uses the rounded `0.15`.
pub fn rescaled_z_half_pi<T: Scalar>(b: T, c: T, constants: Constants) -> Result<T> {
    let half = lit::<T>(0.5);
    match constants {
        Constants::Exact => {
            // Z - ½ ln 4π = -½ f(ξ̄), kept symbolic so both endpoints are exact.
            let xi = check_transverse(b, c)?;
            let r = rho::<T>();
            Ok(T::LN_2() * (r - half * central_log_closed(xi)) / r)
        }
        Constants::PaperLiteral => {
            let depth = lit::<T>(PAPER_RHO);
            let z = z_theta_half_pi(b, c)?;
            Ok(T::LN_2() / depth * (z - half * ln_4pi::<T>() + depth))
        }
    }
}
