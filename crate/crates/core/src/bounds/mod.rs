//! Closed-form bound evaluators.

pub mod fmodel;
pub mod infimum;
pub mod modulus;
pub mod wn;

pub use fmodel::{lp_exponent, FModel, Tabulated};
pub use infimum::{infimum_bound, infimum_bound_log, objective, Infimum, LogInfimum};
pub use modulus::{
    integrability_test, modulus_bound_euclidean, modulus_bound_spherical, Weight, CONVERGES, DIVERGES,
};
pub use wn::{holder_exponent, holder_modulus, wn_bound_euclidean, wn_bound_spherical};
