//! Point and mesh data model, nearest-neighbour queries, generators,
//! surface sampling and file formats.

pub mod io;
mod kdtree;
mod mesh;
mod nn;
mod point_set;
mod sampling;
mod shapes;

pub use kdtree::{Neighbor, NnIndex};
pub use mesh::Mesh;
pub use nn::{mean_nn_distance, nn_tables, self_nearest, NnTables};
pub use point_set::PointSet;
pub use sampling::{sample_indices, sample_surface, sample_unit_sphere, seeded_rng};

pub use shapes::{
    make_box, make_chair_2d, make_circle_loop, make_icosphere, CHAIR_POINTS, CHAIR_TEMPLATE_RADIUS,
    CHAIR_TEMPLATE_VERTICES, MAX_ICOSPHERE_SUBDIVISIONS,
};
