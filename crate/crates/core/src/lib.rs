//! Max-min exponential sampling neural network operators.
//!
//! This crate builds bell-shaped kernels from sigmoidal activations, combines
//! exponentially spaced samples (or cell means) of a target function through a
//! normalized max-min lattice, and provides the diagnostics needed to measure
//! how fast the resulting approximants converge: the logarithmic modulus of
//! smoothness, theoretical rate certificates, log-Hölder order fitting, and
//! Orlicz-space modular analysis with respect to the Haar measure `dz/z`.
//!
//! The [`harness`] module carries the built-in test corpus, the experiment
//! driver that produces per-`n` error tables, and the CSV/JSON/SVG emitters
//! used by the command line front end.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod kernels;
pub mod lattice;
pub mod operators;
pub mod orlicz;
pub mod quad;

pub use error::Error;
pub use kernels::{LogKernel, SigmoidKind, SigmoidalActivation};
pub use lattice::{IndexWindow, WeightVector};
pub use operators::{
    Extension, OperatorConfig, QuadratureRule, QuadratureSpec, RangePolicy, TargetFunction,
};
pub use orlicz::PhiFunction;

pub type Result<T> = std::result::Result<T, Error>;
