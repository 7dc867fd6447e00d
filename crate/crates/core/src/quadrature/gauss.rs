//! Gauss-Legendre nodes and a bisecting adaptive driver.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Points per panel of the adaptive rule.
pub const PANEL_ORDER: usize = 10;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    /// Builds the rule by Newton iteration on `P_n` from Chebyshev initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        let m = n.div_ceil(2);
        for i in 0..m {
            // Iterate in f64 and convert at the end: the nodes are then exact to
            // double precision whatever the working scalar.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = lit(-x);
            nodes[n - 1 - i] = lit(x);
            weights[i] = lit(w);
            weights[n - 1 - i] = lit(w);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: Fn(T) -> T>(&self, f: &F, a: T, b: T) -> T {
        let half = lit::<T>(0.5) * (b - a);
        let mid = lit::<T>(0.5) * (b + a);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection: a panel is accepted once its two halves agree with the
/// whole-panel estimate to `tol` scaled by the panel's share of `[a, b]`.
pub fn adaptive<T, F>(f: F, a: T, b: T, tol: T, max_panels: usize) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let rule = GaussLegendre::<T>::new(PANEL_ORDER);
    let width = b - a;
    if width == T::zero() {
        return Ok(T::zero());
    }
    let half = lit::<T>(0.5);
    let min_width = width.abs() * lit::<T>(1e-14).max(T::epsilon() * lit(4.0));

    let mut stack = vec![(a, b, rule.integrate(&f, a, b))];
    let mut total = T::zero();
    let mut panels = 1usize;
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = half * (lo + hi);
        let left = rule.integrate(&f, lo, mid);
        let right = rule.integrate(&f, mid, hi);
        let refined = left + right;
        let change = (refined - whole).abs();
        let local_tol = tol * ((hi - lo) / width).abs();
        panels += 2;
        if change <= local_tol || (hi - lo).abs() < min_width {
            total = total + refined;
            continue;
        }
        if panels >= max_panels {
            let pending = stack.iter().fold(T::zero(), |acc, p| acc + p.2);
            return Err(Error::QuadratureNonConvergence {
                estimate: to_f64(total + refined + pending),
                change: to_f64(change),
                evaluations: panels * PANEL_ORDER,
            });
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    Ok(total)
}
