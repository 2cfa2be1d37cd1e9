//! Backward-pass-free adversarial attack experiments at desk scale.
//!
//! The crate has five pillars:
//!
//! - [`diffnet`]: toy differentiable networks with hidden-state taps, early
//!   exit, and an exact input-gradient oracle.
//! - [`gradpredict`]: the affine gradient predictor — trajectory-augmented
//!   sample collection, feature standardization, and a closed-form weighted
//!   ridge fit.
//! - [`attacks`]: FGSM/FGM/RS-FGSM/PGD embedding attacks parameterized by
//!   gradient source (exact backprop, predicted, or mixed), with norm-ball
//!   projections and generation-only timing.
//! - [`tokenattack`]: a toy autoregressive LM and a GCG-style discrete suffix
//!   attack whose candidate generation can run from predicted gradients.
//! - [`ntklab`]: Monte-Carlo certification of the random-field facts the
//!   predictor rests on (stationarity, constant moments, affine Gaussian
//!   conditioning, GP derivative posteriors).
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below pin the common double-precision configuration. `f64` is the
//! reference precision for every correctness statement.

pub mod attacks;
pub mod clock;
pub mod diffnet;
pub mod error;
pub mod gradpredict;
pub mod linalg;
pub mod ntklab;
pub mod rng;
pub mod scalar;
pub mod tokenattack;

pub use error::{CoreError, Result};
pub use scalar::Scalar;

/// Double-precision network.
pub type Network64 = diffnet::Network<f64>;
/// Double-precision forward trace.
pub type ForwardTrace64 = diffnet::ForwardTrace<f64>;
// TODO-scaffold: aliases restored as modules land
/// Single-precision network, for the timing harness.
pub type Network32 = diffnet::Network<f32>;
