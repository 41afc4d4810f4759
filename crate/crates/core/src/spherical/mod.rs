//! Spherical side: reflected poles, sampled Schur multipliers, circle LP data.

pub mod distortion;
pub mod lp;
pub mod schur;

pub use distortion::{psi_distortion_check, ReflectedPoleConfig};
pub use lp::{cos_composition, spherical_lp, theta_grid};
pub use schur::{msp_lower_bound, schatten_norm, schur_apply, symbol_matrix, MspResult, SphereSample, WarmStart};
