//! Atomic Husimi function `Q_a(θ, φ) = ⟨θ,φ|ρ_a|θ,φ⟩ / 2π` and its marginals.

use crate::error::{Error, Result};
use crate::jcm::BlochVector;
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Polar points per rendered grid (1° spacing, both poles included).
pub const GRID_THETA_POINTS: usize = 181;
/// Azimuthal points per rendered grid (1° spacing, `0` and `2π` included).
pub const GRID_PHI_POINTS: usize = 361;

/// Direction of a spin coherent state `|θ,φ⟩ = cos(θ/2)|e⟩ + sin(θ/2) e^{iφ}|g⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint<T> {
    theta: T,
    phi: T,
}

impl<T: Scalar> SphericalPoint<T> {
    /// `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn new(theta: T, phi: T) -> Result<Self> {
        if !(theta >= T::zero() && theta <= T::PI()) {
            return Err(Error::domain("theta", to_f64(theta), "[0, pi]"));
        }
        if !(phi >= T::zero() && phi < T::TAU()) {
            return Err(Error::domain("phi", to_f64(phi), "[0, 2pi)"));
        }
        Ok(SphericalPoint { theta, phi })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }
}

/// `β = h cos θ + (b cos φ + c sin φ) sin θ`, the projection of the Bloch
/// vector on the direction `(θ, φ)`; `|β| ≤ η ≤ 1`.
#[inline]
pub fn beta<T: Scalar>(v: &BlochVector<T>, theta: T, phi: T) -> T {
    let (st, ct) = theta.sin_cos();
    v.h() * ct + transverse_projection(v, phi) * st
}

/// `ε = b cos φ + c sin φ`.
#[inline]
pub fn transverse_projection<T: Scalar>(v: &BlochVector<T>, phi: T) -> T {
    let (sp, cp) = phi.sin_cos();
    v.b() * cp + v.c() * sp
}

/// `Q_a = (1 + β) / 4π`.
pub fn q_value<T: Scalar>(v: &BlochVector<T>, p: SphericalPoint<T>) -> T {
    q_at(v, p.theta, p.phi)
}

#[inline]
pub(crate) fn q_at<T: Scalar>(v: &BlochVector<T>, theta: T, phi: T) -> T {
    (T::one() + beta(v, theta, phi)) / (lit::<T>(2.0) * T::TAU())
}

/// `Q_θ = ∫ Q_a dφ = ½(1 + h cos θ)`.
pub fn q_theta<T: Scalar>(v: &BlochVector<T>, theta: T) -> T {
    lit::<T>(0.5) * (T::one() + v.h() * theta.cos())
}

/// `Q_φ = ∫ Q_a sin θ dθ = [1 + (π/4) ε] / 2π`.
pub fn q_phi<T: Scalar>(v: &BlochVector<T>, phi: T) -> T {
    (T::one() + T::FRAC_PI_4() * transverse_projection(v, phi)) / T::TAU()
}

/// A Bloch vector bound to its Husimi function, handing out one-angle
/// slices for the integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HusimiQ<T> {
    bloch: BlochVector<T>,
}

impl<T: Scalar> HusimiQ<T> {
    pub fn new(bloch: BlochVector<T>) -> Self {
        HusimiQ { bloch }
    }

    pub fn bloch(&self) -> &BlochVector<T> {
        &self.bloch
    }

    pub fn at(&self, theta: T, phi: T) -> T {
        q_at(&self.bloch, theta, phi)
    }

    /// `φ ↦ Q_a(θ, φ)` at fixed polar angle.
    pub fn along_phi(&self, theta: T) -> impl Fn(T) -> T + '_ {
        move |phi| q_at(&self.bloch, theta, phi)
    }

    /// `θ ↦ Q_a(θ, φ)` at fixed azimuth.
    pub fn along_theta(&self, phi: T) -> impl Fn(T) -> T + '_ {
        move |theta| q_at(&self.bloch, theta, phi)
    }

    pub fn theta_marginal(&self, theta: T) -> T {
        q_theta(&self.bloch, theta)
    }

    pub fn phi_marginal(&self, phi: T) -> T {
        q_phi(&self.bloch, phi)
    }
}

/// `Q_a` tabulated on the rendering grid; `values[i][j]` is at `(thetas[i], phis[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid<T> {
    pub thetas: Vec<T>,
    pub phis: Vec<T>,
    pub values: Vec<Vec<T>>,
}

pub fn q_grid<T: Scalar>(v: &BlochVector<T>) -> QGrid<T> {
    let axis = |n: usize, span: T| -> Vec<T> {
        (0..n)
            .map(|k| span * from_usize::<T>(k) / from_usize::<T>(n - 1))
            .collect()
    };
    let thetas = axis(GRID_THETA_POINTS, T::PI());
    let phis = axis(GRID_PHI_POINTS, T::TAU());
    let values = thetas
        .iter()
        .map(|&t| phis.iter().map(|&p| q_at(v, t, p)).collect())
        .collect();
    QGrid {
        thetas,
        phis,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_phi, integrate_theta};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};

    const QUAD_TOL: f64 = 1e-10;

    fn bv(b: f64, c: f64, h: f64) -> BlochVector<f64> {
        BlochVector::new(b, c, h).unwrap()
    }

    fn random_bloch(rng: &mut impl Rng) -> BlochVector<f64> {
        loop {
            let (b, c, h) = (
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
            );
            if b * b + c * c + h * h <= 1.0 {
                return bv(b, c, h);
            }
        }
    }

    #[test]
    fn point_values() {
        let p = |t, f| SphericalPoint::new(t, f).unwrap();
        assert_relative_eq!(q_value(&bv(0.0, 0.0, 1.0), p(0.0, 0.0)), 1.0 / TAU);
        assert_relative_eq!(q_value(&bv(0.0, 0.0, 0.0), p(1.0, 2.0)), 1.0 / (4.0 * PI));
        assert_relative_eq!(q_value(&bv(1.0, 0.0, 0.0), p(FRAC_PI_2, 0.0)), 1.0 / TAU);
    }

    #[test]
    fn point_range_checks() {
        assert!(SphericalPoint::new(-0.1, 0.0).is_err());
        assert!(SphericalPoint::new(PI + 1e-9, 0.0).is_err());
        assert!(SphericalPoint::new(0.0, TAU).is_err());
        assert!(SphericalPoint::new(PI, 0.0).is_ok());
    }

    #[test]
    fn marginal_values() {
        for t in [0.0, 1.0, 2.5] {
            assert_eq!(q_theta(&bv(0.3, 0.2, 0.0), t), 0.5);
        }
        assert_eq!(q_theta(&bv(0.0, 0.0, 1.0), 0.0), 1.0);
        assert_relative_eq!(q_theta(&bv(0.0, 0.0, 0.5), FRAC_PI_3), 0.625, epsilon = 1e-15);

        assert_relative_eq!(q_phi(&bv(0.0, 0.0, 0.7), 1.3), 1.0 / TAU);
        let peak = (1.0 + PI / 4.0) / TAU;
        assert_relative_eq!(q_phi(&bv(1.0, 0.0, 0.0), 0.0), peak);
        assert_relative_eq!(peak, 0.284_155, epsilon = 1e-6);
        assert_relative_eq!(q_phi(&bv(0.0, 1.0, 0.0), FRAC_PI_2), peak, epsilon = 1e-15);
        // Quadrature of the definition at the same point.
        let q = HusimiQ::new(bv(1.0, 0.0, 0.0));
        let direct = integrate_theta(q.along_theta(0.0), QUAD_TOL).unwrap();
        assert_relative_eq!(direct, peak, epsilon = QUAD_TOL);
    }

    #[test]
    fn normalisation_and_marginal_consistency() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let v = random_bloch(&mut rng);
            let q = HusimiQ::new(v);
            let total = integrate_phi(
                |phi| integrate_theta(q.along_theta(phi), QUAD_TOL).unwrap(),
                QUAD_TOL,
            )
            .unwrap();
            assert!((total - 1.0).abs() < QUAD_TOL, "{v:?}: {total}");

            for &theta in &[0.0, 0.4, 1.7, PI] {
                let direct = integrate_phi(q.along_phi(theta), QUAD_TOL).unwrap();
                assert!((direct - q.theta_marginal(theta)).abs() < QUAD_TOL);
            }
            for &phi in &[0.0, 1.1, 4.0] {
                let direct = integrate_theta(q.along_theta(phi), QUAD_TOL).unwrap();
                assert!((direct - q.phi_marginal(phi)).abs() < QUAD_TOL);
            }

            let qt = integrate_theta(|t| q.theta_marginal(t), QUAD_TOL).unwrap();
            let qp = integrate_phi(|p| q.phi_marginal(p), QUAD_TOL).unwrap();
            assert!((qt - 1.0).abs() < QUAD_TOL && (qp - 1.0).abs() < QUAD_TOL);
        }
    }

    #[test]
    fn non_negative_on_grid() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let v = random_bloch(&mut rng);
            let g = q_grid(&v);
            assert_eq!(g.thetas.len(), GRID_THETA_POINTS);
            assert_eq!(g.phis.len(), GRID_PHI_POINTS);
            assert_eq!(*g.phis.last().unwrap(), TAU);
            assert!(g.values.iter().flatten().all(|&q| q >= 0.0));
        }
        // Pure state: Q vanishes at the antipode only.
        let v = bv(0.0, 0.0, 1.0);
        assert!(q_at(&v, PI, 0.3).abs() < 1e-17);
    }
}
