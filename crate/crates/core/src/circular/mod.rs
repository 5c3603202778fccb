//! Circular-window analysis for the unit regular tetrahedron: the
//! translational and general-motion diameter thresholds, the enclosing
//! cylinder bound, and the crossing motion itself.

mod five_step;

pub use five_step::{five_step_motion, five_step_parameters, FiveStepParameters};

use nalgebra::Point2;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{enclosing_disc, fibonacci_directions, refine_on_sphere, Dir3, Polytope};
pub use crate::geom::triangle_enclosing_diameter as tri_enclosing_diameter;
use crate::tol::OPT_TOL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircularError {
    #[error("cross-section parameters must satisfy 0 ≤ y ≤ x ≤ 1")]
    InvalidParams,
    #[error("window diameter {0} is below the general-motion threshold")]
    PreconditionViolated(f64),
}

/// Positions of the two cross-section points on the edges from the bottom
/// vertex: `x` and `y` in [0,1], plus the derived parameters of the parallel
/// cross-section through the other middle vertex.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CrossParams {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl CrossParams {
    /// Requires `0 ≤ y ≤ x ≤ 1`; `x = y` is the degenerate boundary where
    /// `z = w = 0`.
    pub fn new(x: f64, y: f64) -> Result<CrossParams, CircularError> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) || y > x {
            return Err(CircularError::InvalidParams);
        }
        let (z, w) = if x > y {
            ((x - y) / x, (x - y) / (x * (1.0 - y)))
        } else {
            (0.0, 0.0)
        };
        Ok(CrossParams { x, y, z, w })
    }
}

/// Squared side lengths of the triangle cut through the lower middle vertex:
/// `(|BU|², |BV|², |UV|²)` by the law of cosines on unit edges.
pub fn buv_sides_sq(x: f64, y: f64) -> [f64; 3] {
    [
        1.0 - x + x * x,
        1.0 - y + y * y,
        x * x - x * y + y * y,
    ]
}

/// Squared side lengths of both middle-vertex cross-section triangles.
pub fn cross_triangle_lengths(p: &CrossParams) -> ([f64; 3], [f64; 3]) {
    (buv_sides_sq(p.x, p.y), buv_sides_sq(p.z, p.w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdMode {
    Delta1,
    Delta2,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub value: f64,
    pub argmin: (f64, f64),
    pub mode: ThresholdMode,
}

fn buv_diameter(x: f64, y: f64) -> f64 {
    tri_enclosing_diameter(buv_sides_sq(x, y)).expect("cross-section triangle is valid")
}

/// Deterministic coarse grid plus compass refinement.
fn grid_refine<F: Fn(f64, f64) -> f64, C: Fn(f64, f64) -> bool>(
    f: &F,
    feasible: &C,
    grid_step: f64,
) -> (f64, f64, f64) {
    let n = (1.0 / grid_step).round() as usize;
    let mut best = f64::INFINITY;
    let mut bx = 0.0;
    let mut by = 0.0;
    for i in 0..=n {
        let x = i as f64 * grid_step;
        for j in 0..=n {
            let y = j as f64 * grid_step;
            if !feasible(x, y) {
                continue;
            }
            let v = f(x, y);
            if v < best {
                best = v;
                bx = x;
                by = y;
            }
        }
    }
    let mut step = grid_step;
    while step > OPT_TOL {
        let mut improved = false;
        for (dx, dy) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let (x, y) = (bx + dx, by + dy);
            if !feasible(x, y) {
                continue;
            }
            let v = f(x, y);
            if v < best {
                best = v;
                bx = x;
                by = y;
                improved = true;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (bx, by, best)
}

/// Translational threshold: minimize, over parallel middle-vertex
/// cross-sections with `0 < y < x < 1`, the larger of the two enclosing-disc
/// diameters.
pub fn find_delta1() -> ThresholdResult {
    let f = |x: f64, y: f64| -> f64 {
        let p = CrossParams::new(x, y).expect("feasible region");
        let (buv, cst) = cross_triangle_lengths(&p);
        let d1 = tri_enclosing_diameter(buv).expect("valid triangle");
        let d2 = tri_enclosing_diameter(cst).expect("valid triangle");
        d1.max(d2)
    };
    let feasible = |x: f64, y: f64| x < 1.0 && y > 0.0 && y < x - 1e-12;
    let (x, y, value) = grid_refine(&f, &feasible, 1e-3);
    ThresholdResult {
        value,
        argmin: (x, y),
        mode: ThresholdMode::Delta1,
    }
}

/// General-motion threshold: minimize the enclosing-disc diameter of the
/// single cross-section triangle over the closed parameter square.
pub fn find_delta2() -> ThresholdResult {
    let feasible = |x: f64, y: f64| (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y);
    let (x, y, value) = grid_refine(&buv_diameter, &feasible, 1e-3);
    ThresholdResult {
        value,
        argmin: (x, y),
        mode: ThresholdMode::Delta2,
    }
}

pub(crate) static DELTA2: Lazy<ThresholdResult> = Lazy::new(find_delta2);

pub fn delta2_cached() -> ThresholdResult {
    *DELTA2
}

/// Minimal enclosing-disc diameter of a vertex cross-section, over all
/// orientations: the certificate that no motion through a smaller circle can
/// ever pass a vertex of the tetrahedron. Equal to the general-motion
/// threshold by the symmetry of the four vertices.
pub fn vertex_cross_min() -> ThresholdResult {
    delta2_cached()
}

/// Minimal enclosing-cylinder diameter over sampled axis directions, locally
/// refined: the smallest circle every shadow fits in.
pub fn min_cylinder_diameter(poly: &Polytope, resolution: usize) -> f64 {
    assert!(resolution >= 10_000, "resolution must be ≥ 10⁴ samples");
    let f = |v: &Dir3| shadow_disc_diameter(poly, v);
    let mut best = f64::INFINITY;
    let mut best_dir = fibonacci_directions(1)[0];
    for v in fibonacci_directions(resolution) {
        let d = f(&v);
        if d < best {
            best = d;
            best_dir = v;
        }
    }
    let step = (4.0 / resolution as f64).sqrt();
    let (_, refined) = refine_on_sphere(&f, best_dir, step, OPT_TOL, false);
    refined
}

/// Enclosing-disc diameter of the shadow along `v`.
pub fn shadow_disc_diameter(poly: &Polytope, v: &Dir3) -> f64 {
    let (xa, ya) = Polytope::shadow_frame(v);
    let pts: Vec<Point2<f64>> = poly
        .vertices()
        .iter()
        .map(|p| Point2::new(p.coords.dot(&xa), p.coords.dot(&ya)))
        .collect();
    enclosing_disc(&pts).diameter()
}
