//! Littlewood-Paley filter banks and smoothness diagnostics.

pub mod bank;
pub mod maximal;
pub mod window;
pub mod zygmund;

pub use bank::{build_filterbank, lp_coefficients, lp_sup_norms, FilterBank, GridSpec};
pub use maximal::{envelope_check, maximal_function, maximal_function_periodic};
pub use window::{partition_residual, w, w0, w_n};
pub use zygmund::{
    classify_b0, modulus_from_lp, zygmund_modulus, zygmund_modulus_periodic, BERNSTEIN_C,
    CONSISTENT_B0, INCONSISTENT,
};
