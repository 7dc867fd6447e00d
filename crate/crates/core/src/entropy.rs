//! Von Neumann and information entropies of the reduced atomic state.
//!
//! Both are the same binary entropy: `γ = S(η)` for the Bloch length and
//! `H(σ_k) = S(⟨σ_k⟩)` for a single component, where
//! `S(x) = -½(1+x) ln ½(1+x) - ½(1-x) ln ½(1-x)`.

use crate::error::{Error, Result};
use crate::jcm::BlochVector;
use crate::scalar::{domain_slack, lit, to_f64, Scalar};

/// `S(x)` for `x ∈ [-1, 1]`, written as
/// `ln 2 - ½[(1+x) ln(1+x) + (1-x) ln(1-x)]` with `ln_1p` so the endpoints
/// lose no digits.
fn binary_entropy<T: Scalar>(x: T) -> T {
    let one = T::one();
    let half = lit::<T>(0.5);
    let up = if one + x == T::zero() {
        T::zero()
    } else {
        (one + x) * x.ln_1p()
    };
    let down = if one - x == T::zero() {
        T::zero()
    } else {
        (one - x) * (-x).ln_1p()
    };
    (T::LN_2() - half * (up + down)).max(T::zero())
}

fn clamp_unit<T: Scalar>(x: T, what: &'static str, lower: T) -> Result<T> {
    let slack = domain_slack::<T>();
    if !(x >= lower - slack && x <= T::one() + slack) {
        return Err(Error::domain(
            what,
            to_f64(x),
            if lower == T::zero() { "[0, 1]" } else { "[-1, 1]" },
        ));
    }
    Ok(x.max(lower).min(T::one()))
}

/// `γ(η)`, the entanglement entropy of the pure joint state.
pub fn von_neumann<T: Scalar>(eta: T) -> Result<T> {
    let eta = clamp_unit(eta, "eta", T::zero())?;
    Ok(binary_entropy(eta))
}

/// `H(x)`: Shannon entropy of a `σ_k` measurement with mean `x`.
pub fn info_entropy<T: Scalar>(x: T) -> Result<T> {
    let x = clamp_unit(x, "Pauli expectation", -T::one())?;
    Ok(binary_entropy(x))
}

/// `(H(b), H(c), H(h))`.
pub fn info_entropies<T: Scalar>(v: &BlochVector<T>) -> Result<[T; 3]> {
    Ok([info_entropy(v.b())?, info_entropy(v.c())?, info_entropy(v.h())?])
}

/// `γ` of a Bloch vector.
pub fn von_neumann_of<T: Scalar>(v: &BlochVector<T>) -> Result<T> {
    von_neumann(v.eta())
}
