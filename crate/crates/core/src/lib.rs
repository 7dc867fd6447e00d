//! Resonant Jaynes-Cummings model with the entropies of its reduced atomic
//! state: von Neumann, information, and the marginal and density atomic
//! Wehrl entropies built from the atomic Husimi function.
//!
//! The numerical modules are generic over [`Scalar`] (`f32` or `f64`);
//! the aliases below fix the precision. The [`scenario`] sweeps and their
//! file output are `f64` only.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod husimi;
pub mod jcm;
pub mod quadrature;
pub mod scalar;
pub mod scenario;
pub mod wehrl;

pub use entropy::{info_entropies, info_entropy, von_neumann, von_neumann_of};
pub use error::{Error, Result};
pub use husimi::{q_phi, q_theta, q_value, HusimiQ, SphericalPoint};
pub use jcm::{bloch_vector, evolve, AmplitudeSet, BlochVector, ModelConfig};
pub use scalar::Scalar;
pub use wehrl::{Constants, SeriesPolicy, WehrlMethod};

pub type BlochVector64 = BlochVector<f64>;
pub type BlochVector32 = BlochVector<f32>;
pub type ModelConfig64 = ModelConfig<f64>;
pub type ModelConfig32 = ModelConfig<f32>;
pub type AmplitudeSet64 = AmplitudeSet<f64>;
pub type AmplitudeSet32 = AmplitudeSet<f32>;
pub type SeriesPolicy64 = SeriesPolicy<f64>;
pub type SeriesPolicy32 = SeriesPolicy<f32>;
pub type HusimiQ64 = HusimiQ<f64>;
pub type HusimiQ32 = HusimiQ<f32>;
