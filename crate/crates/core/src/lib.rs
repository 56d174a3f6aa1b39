//! Curves in Minkowski 3-space: causal classification, Frenet apparatus,
//! slant helix detection with axis reconstruction, and curve synthesis from
//! prescribed curvature and torsion.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dsl;
pub mod error;
pub mod frenet;
pub mod jet;
pub mod lorentz;
pub mod numeric;
pub mod scalar;
pub mod slant;
pub mod synth;

pub use error::{Error, Result};
