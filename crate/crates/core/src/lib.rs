#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

//! Gaussian–Student model of bursty mixed Gaussian and impulsive noise.

pub mod error;
pub mod estimator;
pub mod features;
pub mod io;
pub mod math;
pub mod model;
pub mod sampler;

pub use error::{GsError, Result};
