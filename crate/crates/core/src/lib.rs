//! Linear and second-order optical response of two-dimensional Dirac materials
//! (graphene, topological-insulator surfaces) and the parametric decay of an
//! infrared pump into THz surface plasmons plus idler photons.
//!
//! All internal quantities are Gaussian CGS.  See [`units`] for the boundary
//! conversions used by front ends.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chi2_closed;
pub mod chi2_oracle;
pub mod constants;
pub mod error;
pub mod langevin;
pub mod linear_response;
pub mod oscillator0d;
pub mod params;
pub mod three_wave;
pub mod units;

pub use error::{Error, Result};
pub use params::{DetectionGeometry, Geometry, MaterialParams};
