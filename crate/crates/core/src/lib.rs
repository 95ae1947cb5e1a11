//! Neural decoding of the 2D toric code with a restricted Boltzmann machine.
//!
//! The pipeline is: sample phase-flip error chains ([`noise`]), train a
//! tri-layer RBM on `(error, syndrome)` pairs ([`training`]), then decode a
//! measured syndrome by Gibbs sampling the error layer with the syndrome layer
//! clamped ([`decoders`]). A minimum-weight perfect matching decoder is the
//! baseline, and [`bench`] estimates logical failure rates for both.
//!
//! The network math is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the precision used by the command-line tools.

pub mod bench;
pub mod decoders;
pub mod error;
pub mod lattice;
pub mod noise;
pub mod rbm;
pub mod rng;
pub mod scalar;
pub mod training;

pub use error::{Error, Result};
pub use lattice::{Chain, HomologyClass, Lattice, Orientation, Syndrome, Vertex};
pub use noise::{Dataset, ErrorModel};
pub use rbm::{MachineState, RbmParams};
pub use scalar::Scalar;
pub use training::Hyperparams;

/// Double-precision parameters, used for persistence and the exact oracles.
pub type RbmParamsF64 = RbmParams<f64>;
/// Single-precision parameters.
pub type RbmParamsF32 = RbmParams<f32>;
