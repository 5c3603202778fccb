//! Geometric kernel: polytopes, polygons, discs, placements and the
//! shadow-cover construction.

use thiserror::Error;

pub mod cover;
pub mod disc;
mod hull3;
pub mod placement;
pub mod polygon;
pub mod polytope;

pub use cover::{shadow_cover, CoverPlacement};
pub use disc::{enclosing_disc, triangle_enclosing_diameter, Disc};
pub use placement::{
    lex_canonical_sign, lex_less, orthonormal_pair, rotation_between_frames, signed_angle_about,
    Dir2, Dir3, RigidPlacement,
};
pub use polygon::{
    convex_hull_2d, fit_angle_in_interval, fit_points_in_rect, min_xslab_points, width_of_points,
    Polygon2, XSlab,
};
pub use polytope::{
    box_polytope, build_polytope, fibonacci_directions, refine_on_sphere, regular_tetrahedron,
    regular_tetrahedron_vertices, AxisPlane, CrossSection, Polytope,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("triangle inequality violated")]
    DegenerateTriangle,
}
