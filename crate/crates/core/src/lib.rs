//! Escape rates for a particle tunneling out of a metastable well while
//! coupled to Ohmic position and momentum baths with a Drude cutoff.
//!
//! Units are reduced: ħ = m = ω₀ = 1. The bounce is computed in closed
//! form from the partial-fraction roots of the bath kernel; direct
//! quadrature routes exist for every closed-form quantity as oracles.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounce;
pub mod error;
pub mod limits;
pub mod model;
pub mod path;
pub mod prefactor;
pub mod poly;
pub mod quad;
pub mod roots;
pub mod smooth;
pub mod spectral;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{Asymmetry, KernelDenominator, ModelParams, QuadratureConfig};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
