//! Chamfer-distance losses with vertex exclusion, mesh quality metrics and a
//! gradient-descent template deformation engine.
//!
//! Geometry, metric, loss and deformation routines are generic over the
//! coordinate type through [`Scalar`]; the aliases below fix it to `f64` or
//! `f32`.

pub mod bench;
pub mod deform;
pub mod error;
pub mod geometry;
pub mod losses;
pub mod metrics;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{ceil_fraction, dist2, Scalar};

pub type PointSetF64 = geometry::PointSet<f64>;
pub type MeshF64 = geometry::Mesh<f64>;
pub type NnTablesF64 = geometry::NnTables<f64>;
pub type ChamferResultF64 = metrics::ChamferResult<f64>;
pub type LossResultF64 = losses::LossResult<f64>;
pub type DeformTraceF64 = deform::DeformTrace<f64>;

pub type PointSetF32 = geometry::PointSet<f32>;
pub type MeshF32 = geometry::Mesh<f32>;
pub type NnTablesF32 = geometry::NnTables<f32>;
pub type ChamferResultF32 = metrics::ChamferResult<f32>;
pub type LossResultF32 = losses::LossResult<f32>;
pub type DeformTraceF32 = deform::DeformTrace<f32>;
