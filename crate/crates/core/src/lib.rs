//! Numerical laboratory for δ-tube packings, Littlewood-Paley analysis of
//! multiplier symbols and tube-based lower bounds for radial Fourier
//! multipliers.

// `!(x > 0.0)` is how inputs reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bump;
pub mod error;
pub mod geometry;
pub mod profile;
pub mod quadrature;
pub mod report;
pub mod sampled;

pub use error::{LabError, Result};
pub use geometry::{Tube, TubeFamily};
pub use profile::Profile;
pub use report::{BoundReport, Real};
pub use sampled::SampledFunction;
pub mod besicovitch;
pub mod filterbank;
pub mod bounds;
pub mod spherical;
pub mod multiplier;
pub mod io;
