//! Tube families witnessing small compression ratios.

pub mod anneal;
pub mod curve;
pub mod keich;
pub mod separated;

pub use anneal::{optimize_family, optimize_from, AnnealSchedule};
pub use curve::{f_curve, CurveMode, FCurve, FPoint};
pub use keich::{keich_family, keich_family_with, KeichLayout};
pub use separated::separated_direction_family;
