//! Riesz s-energy kernels reduced to the half-plane for surfaces of
//! revolution, minimal discrete-energy point configurations on planar curves,
//! and numerical checks of the resulting equilibrium measures.

// reference values are kept at the digits they were computed to; domain
// checks are written as `!(x > 0.0)` so that NaN is rejected
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kernel;
pub mod optimize;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
