//! Numerical toolkit for weighted time-frequency analysis at desk scale.
//!
//! The crate is organized around five subsystems:
//!
//! * [`weights`] — weight functions, monotone weight systems, structural
//!   condition checkers, and Nachbin-family constructions;
//! * [`funcgrid`] — centered uniform grids, the Fourier transform with the
//!   `e^{-2πi ξ·t}` convention, and weighted seminorms;
//! * [`stft`] — short-time Fourier transform, its adjoint, reconstruction,
//!   and continuity-bound verification;
//! * [`kothe`] — Köthe sets over the integer lattice, sequence norms, and
//!   the sampling/translation embedding machinery;
//! * [`kernels`] — tensorized kernels, the analysis/synthesis round-trip,
//!   and separable low-rank approximation.

pub mod error;
pub mod funcgrid;
pub mod kernels;
pub mod kothe;
pub mod report;
pub mod stft;
pub mod weights;

pub use error::BbError;
pub use funcgrid::{Grid, SampledFunction, SeminormKind, SeminormValue};
pub use report::{BoundReport, ConditionReport, Variant, Verdict};
pub use weights::{WeightExpr, WeightFunction, WeightMode, WeightSystem};
