//! Fourier multipliers on planar grids, tube test functions and the
//! lower-bound chain built from them.

pub mod canonical;
pub mod certify;
pub mod cov;
pub mod field;
pub mod profiles;
pub mod raster;
pub mod relaxed;
pub mod testfn;

pub use canonical::{CanonicalField, CanonicalSpec};
pub use certify::{certify_lower_bound, rel_slack, CertifySettings};
pub use cov::{change_of_variable_check, change_of_variable_check_with, default_inputs, derivative_norms, helper_inequalities, HelperCheck};
pub use field::{apply_multiplier, fft2, DirectionalSymbol, GridField2D, Symbol, SymbolMode};
pub use profiles::Profiles;
pub use raster::{raster_norms, RasterNorms};
pub use relaxed::{interpolated_constant, relaxed_gain_check};
pub use testfn::{
    build_test_functions, conjugate, kakeya_pairing, square_function, tube_symbols, world_grid, Pairing,
    TestFunctionPair,
};
