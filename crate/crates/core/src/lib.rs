//! Herglotz-Nevanlinna and Cauchy-type functions on the poly cut-plane
//! `(C \ R)^n`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod complex_fmt;
pub mod cutplane;
pub mod error;
pub mod functions;
pub mod kernels;
pub mod measures;
pub mod sampling;
pub mod tables;

pub use cutplane::{ComponentSignature, CutPlanePoint, IndexSet, Sign};
pub use error::{Error, Result};
pub use functions::Evaluable;
pub use measures::{Measure, QuadratureConfig};
