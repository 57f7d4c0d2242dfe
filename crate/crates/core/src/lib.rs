//! Phase-space numerics for one-dimensional quantum states.
//!
//! The crate computes Wigner quasi-distributions and quantum characteristic
//! functions, checks that a quasi-distribution reproduces the measured
//! distribution of every linear combination `a·x + b·p` (and rebuilds the
//! distribution from those marginals), quantizes phase-space functions with
//! the Weyl correspondence, and explores the one-parameter family of
//! spin-½ quasi-probabilities for the `Z`/`X` pair.
//!
//! Conventions used throughout:
//!
//! * Fourier transforms are unitary with symmetric `1/√(2π)` factors,
//!   `f̂(ξ) = (1/√(2π)) ∫ f(x) e^{-iξx} dx`, and `1/(2π)` in two variables.
//! * `ħ` is a plain parameter (default `1.0`); all quantities are
//!   dimensionless.
//! * Characteristic functions follow `⟨ψ| e^{-i(αX+βP)} |ψ⟩`.

pub mod error;
pub mod numerics;
pub mod spin;
pub mod states;
pub mod tomography;
pub mod verify;
pub mod weyl;
pub mod wigner;

pub use error::{Error, Result};
pub use numerics::{Grid1D, Grid2D, SampledFunction1D, SampledFunction2D};
pub use states::{DirectionAB, StateSpec, WaveFunction};
pub use tomography::Marginal;
pub use wigner::{CharacteristicFunction, QuasiDistribution};
