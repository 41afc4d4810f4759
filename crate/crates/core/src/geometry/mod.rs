//! Planar and higher-dimensional δ-tubes.

pub mod family;
pub mod measures;
pub mod polygon;
pub mod raster;
pub mod tube;

pub use family::{FamilyMeta, TubeFamily};
pub use measures::{
    certificate_of, compression_ratio, relaxed_score, translate_certificate, translate_overlap_sum,
    union_measure, Certificate,
};
pub use raster::RasterGrid;
pub use tube::{make_tube, translate_tube, tube2, tubes_disjoint, unit_ball_volume, Tube, DEFAULT_WINDOW, TAU_GEOM};
