//! Resonant Jaynes-Cummings dynamics for a coherent field and a two-level
//! atom prepared in `cos ϑ |e⟩ + sin ϑ |g⟩`.
//!
//! Time is the scaled time `T = λt`. In the interaction picture each pair
//! `{|e,n⟩, |g,n+1⟩}` rotates at the Rabi frequency `√(n+1)`; the state
//! `|g,0⟩` is dark and keeps its initial amplitude `sin ϑ · C_0`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{domain_slack, from_usize, lit, to_f64, Scalar};

/// Default relative truncation tolerance of infinite sums.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

/// Default absolute tolerance handed to the quadrature oracles.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// `⌈α² + 10α + 20⌉`: ten standard deviations of the photon number past its mean.
pub fn default_n_max<T: Scalar>(alpha: T) -> usize {
    let a = to_f64(alpha);
    (a * a + 10.0 * a + 20.0).ceil() as usize
}

/// Coherent-state amplitudes `C_n = α^n e^{-α²/2} / √(n!)` for `n = 0..=n_max`.
///
/// Built outward from the Poisson mode with the ratio `C_{n+1}/C_n = α/√(n+1)`
/// and normalised by the full sum, so no `ln n!` of large magnitude is ever
/// differenced against `α²/2`.
pub fn coherent_weights<T: Scalar>(alpha: T, n_max: usize) -> Result<Vec<T>> {
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::domain("alpha", to_f64(alpha), "[0, inf)"));
    }
    if n_max < 1 {
        return Err(Error::domain("n_max", n_max as f64, "n_max >= 1"));
    }
    let (mut w, total) = relative_weights(alpha, n_max);
    let norm = total.sqrt();
    w.truncate(n_max + 1);
    Ok(w.into_iter().map(|x| x / norm).collect())
}

/// Unnormalised `w_n ∝ C_n` with `w_mode = 1`, listed up to at least `upto`
/// and far enough past it that the rest is below rounding, plus `Σ w_n²`.
fn relative_weights<T: Scalar>(alpha: T, upto: usize) -> (Vec<T>, T) {
    let mut w = vec![T::one()];
    if alpha == T::zero() {
        w.resize(upto + 2, T::zero());
        return (w, T::one());
    }
    let mode = to_f64(alpha * alpha).floor() as usize;
    w.resize(mode + 1, T::zero());
    w[mode] = T::one();
    for n in (1..=mode).rev() {
        w[n - 1] = w[n] * from_usize::<T>(n).sqrt() / alpha;
    }
    let mut total: T = w.iter().fold(T::zero(), |acc, &x| acc + x * x);
    let mut n = mode;
    loop {
        let next = w[n] * alpha / from_usize::<T>(n + 1).sqrt();
        n += 1;
        w.push(next);
        total = total + next * next;
        if n > upto && next * next <= total * T::epsilon() * T::epsilon() {
            break;
        }
    }
    (w, total)
}

/// `Σ_{n > n_max} C_n²`, summed directly rather than as `1 - Σ_{n ≤ n_max}`.
pub fn poisson_tail<T: Scalar>(alpha: T, n_max: usize) -> T {
    let (w, total) = relative_weights(alpha, n_max);
    let tail = w[n_max + 1..].iter().fold(T::zero(), |acc, &x| acc + x * x);
    tail / total
}

/// Uniform, endpoint-inclusive grid of `steps` points on `[0, t_max]`.
pub fn uniform_grid<T: Scalar>(t_max: T, steps: usize) -> Vec<T> {
    match steps {
        0 => Vec::new(),
        1 => vec![T::zero()],
        _ => {
            let last = from_usize::<T>(steps - 1);
            (0..steps)
                .map(|k| t_max * from_usize::<T>(k) / last)
                .collect()
        }
    }
}

/// Complete description of one run: field amplitude, atomic preparation,
/// Fock cutoff, time grid, and tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig<T> {
    alpha: T,
    vartheta: T,
    n_max: usize,
    t_grid: Vec<T>,
    series_tol: T,
    quad_tol: T,
    weights: Vec<T>,
}

impl<T: Scalar> ModelConfig<T> {
    pub fn builder(alpha: T, vartheta: T) -> ModelConfigBuilder<T> {
        ModelConfigBuilder {
            alpha,
            vartheta,
            n_max: None,
            t_grid: vec![T::zero()],
            series_tol: lit(DEFAULT_SERIES_TOL),
            quad_tol: lit(DEFAULT_QUAD_TOL),
        }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn vartheta(&self) -> T {
        self.vartheta
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn t_grid(&self) -> &[T] {
        &self.t_grid
    }

    pub fn series_tol(&self) -> T {
        self.series_tol
    }

    pub fn quad_tol(&self) -> T {
        self.quad_tol
    }

    /// `C_0 ..= C_{n_max + 1}`; the extra entry feeds `G_1(n_max)`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Same physics on a different time grid.
    pub fn with_t_grid(&self, t_grid: Vec<T>) -> Result<Self> {
        check_grid(&t_grid)?;
        Ok(ModelConfig {
            t_grid,
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone)]
pub struct ModelConfigBuilder<T> {
    alpha: T,
    vartheta: T,
    n_max: Option<usize>,
    t_grid: Vec<T>,
    series_tol: T,
    quad_tol: T,
}

impl<T: Scalar> ModelConfigBuilder<T> {
    pub fn n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    pub fn t_grid(mut self, t_grid: Vec<T>) -> Self {
        self.t_grid = t_grid;
        self
    }

    pub fn series_tol(mut self, tol: T) -> Self {
        self.series_tol = tol;
        self
    }

    pub fn quad_tol(mut self, tol: T) -> Self {
        self.quad_tol = tol;
        self
    }

    pub fn build(self) -> Result<ModelConfig<T>> {
        let ModelConfigBuilder {
            alpha,
            vartheta,
            n_max,
            t_grid,
            series_tol,
            quad_tol,
        } = self;
        if !(alpha >= T::zero()) || !alpha.is_finite() {
            return Err(Error::Config(format!("alpha must be finite and >= 0, got {}", to_f64(alpha))));
        }
        if !vartheta.is_finite() {
            return Err(Error::Config("vartheta must be finite".into()));
        }
        if !(series_tol > T::zero()) || !(quad_tol > T::zero()) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        let n_max = n_max.unwrap_or_else(|| default_n_max(alpha));
        if n_max < 1 {
            return Err(Error::Config("n_max must be at least 1".into()));
        }
        check_grid(&t_grid)?;
        let tail = poisson_tail(alpha, n_max);
        if !(tail < series_tol) {
            return Err(Error::FockTail {
                n_max,
                tail: to_f64(tail),
                tol: to_f64(series_tol),
            });
        }
        let weights = coherent_weights(alpha, n_max + 1)?;
        Ok(ModelConfig {
            alpha,
            vartheta,
            n_max,
            t_grid,
            series_tol,
            quad_tol,
            weights,
        })
    }
}

fn check_grid<T: Scalar>(t_grid: &[T]) -> Result<()> {
    if let Some(bad) = t_grid.iter().find(|t| !(**t >= T::zero()) || !t.is_finite()) {
        return Err(Error::Config(format!(
            "time grid entries must be finite and >= 0, got {}",
            to_f64(*bad)
        )));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Joint atom-field amplitudes at one scaled time.
///
/// `g1[n]` multiplies `|e,n⟩`, `g2[n]` multiplies `|g,n+1⟩`, and
/// `ground_vacuum` multiplies `|g,0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSet<T> {
    g1: Vec<Complex<T>>,
    g2: Vec<Complex<T>>,
    ground_vacuum: Complex<T>,
    t: T,
}

impl<T: Scalar> AmplitudeSet<T> {
    pub fn g1(&self) -> &[Complex<T>] {
        &self.g1
    }

    pub fn g2(&self) -> &[Complex<T>] {
        &self.g2
    }

    pub fn ground_vacuum(&self) -> Complex<T> {
        self.ground_vacuum
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn norm_sqr(&self) -> T {
        self.g1
            .iter()
            .chain(&self.g2)
            .fold(self.ground_vacuum.norm_sqr(), |acc, z| acc + z.norm_sqr())
    }
}

/// Amplitudes at scaled time `t`.
pub fn evolve<T: Scalar>(config: &ModelConfig<T>, t: T) -> Result<AmplitudeSet<T>> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain("scaled time T", to_f64(t), "[0, inf)"));
    }
    let (sin_v, cos_v) = config.vartheta.sin_cos();
    let c = &config.weights;
    let n_len = config.n_max + 1;
    let mut g1 = Vec::with_capacity(n_len);
    let mut g2 = Vec::with_capacity(n_len);
    for n in 0..n_len {
        let (s, co) = (t * from_usize::<T>(n + 1).sqrt()).sin_cos();
        let excited = c[n] * cos_v;
        let ground = c[n + 1] * sin_v;
        g1.push(Complex::new(excited * co, -(ground * s)));
        g2.push(Complex::new(ground * co, -(excited * s)));
    }
    Ok(AmplitudeSet {
        g1,
        g2,
        ground_vacuum: Complex::new(c[0] * sin_v, T::zero()),
        t,
    })
}

/// Bloch vector `(b, c, h) = (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)` of the reduced atomic state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector<T> {
    b: T,
    c: T,
    h: T,
}

impl<T: Scalar> BlochVector<T> {
    /// Rejects vectors longer than one beyond the domain slack.
    pub fn new(b: T, c: T, h: T) -> Result<Self> {
        let v = BlochVector { b, c, h };
        let len2 = v.length_sqr();
        if !len2.is_finite() || len2 > T::one() + domain_slack::<T>() {
            return Err(Error::domain("|Bloch vector|^2", to_f64(len2), "[0, 1]"));
        }
        Ok(v)
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn h(&self) -> T {
        self.h
    }

    /// `b² + c²`.
    pub fn transverse_sqr(&self) -> T {
        self.b * self.b + self.c * self.c
    }

    pub fn length_sqr(&self) -> T {
        self.transverse_sqr() + self.h * self.h
    }

    pub fn eta(&self) -> T {
        self.length_sqr().sqrt()
    }
}

pub fn bloch_vector<T: Scalar>(amps: &AmplitudeSet<T>) -> BlochVector<T> {
    let mut h = -amps.ground_vacuum.norm_sqr();
    for (a, b) in amps.g1.iter().zip(&amps.g2) {
        h = h + a.norm_sqr() - b.norm_sqr();
    }
    // ⟨σ_+⟩ = Σ_n G1*(n+1) G2(n) + G1*(0) g0.
    let mut raising = amps.g1[0].conj() * amps.ground_vacuum;
    for (g1_next, g2) in amps.g1.iter().skip(1).zip(&amps.g2) {
        raising = raising + g1_next.conj() * g2;
    }
    let two = lit::<T>(2.0);
    BlochVector {
        b: two * raising.re,
        c: two * raising.im,
        h,
    }
}

/// Bloch length `η = √(b² + c² + h²)`.
pub fn eta<T: Scalar>(v: &BlochVector<T>) -> T {
    v.eta()
}
