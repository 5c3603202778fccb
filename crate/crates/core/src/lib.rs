//! Decide whether a convex polytope can pass through a planar window.
//!
//! The library covers sliding (translation in one fixed direction),
//! fixed-orientation translational motion, gate and circular windows, the
//! regular-tetrahedron circular-window thresholds, a rotation-necessity
//! demonstration, sampled rigid-motion validation, and a 2-DOF grid planner.
//! The `sofa-window` binary exposes every procedure on JSON scenes.

pub mod circular;
pub mod geom;
pub mod motion;
pub mod scene;
pub mod sliding;
pub mod svg;
pub mod tol;
pub mod translation;

pub use geom::{
    build_polytope, enclosing_disc, regular_tetrahedron, CrossSection, Dir3, Disc, GeomError,
    Polygon2, Polytope, RigidPlacement,
};
pub use tol::Tolerances;
