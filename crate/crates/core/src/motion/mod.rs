//! Rigid-motion paths, window specifications and sampled free-space
//! validation.

mod planner;
mod rotate_demo;

pub use planner::planner_2dof;
pub use rotate_demo::{
    must_rotate_motion, must_rotate_placement, must_rotate_section, must_rotate_tetrahedron,
    MUST_ROTATE_WINDOW_SIDE,
};

use nalgebra::{Point2, Point3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geom::{Dir3, Polygon2, Polytope, RigidPlacement};

/// Planar window in the plane `z = 0`.
///
/// Rectangles and gates are anchored at the origin (`[0,a]×[0,b]`,
/// `0 ≤ x ≤ a`); circles are centered at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowSpec {
    Rect { a: f64, b: f64 },
    Gate { a: f64 },
    Circle { d: f64 },
    ConvexPolygon { vertices: Polygon2 },
}

impl WindowSpec {
    pub fn validate(&self) -> Result<(), String> {
        match self {
            WindowSpec::Rect { a, b } => {
                if *a <= 0.0 {
                    return Err("window.a must be > 0".into());
                }
                if *b <= 0.0 {
                    return Err("window.b must be > 0".into());
                }
            }
            WindowSpec::Gate { a } => {
                if *a <= 0.0 {
                    return Err("window.a must be > 0".into());
                }
            }
            WindowSpec::Circle { d } => {
                if *d <= 0.0 {
                    return Err("window.d must be > 0".into());
                }
            }
            WindowSpec::ConvexPolygon { vertices } => {
                if vertices.len() < 3 {
                    return Err("window polygon needs at least 3 vertices".into());
                }
            }
        }
        Ok(())
    }

    /// Depth by which a point sticks out of the window (0 inside).
    pub fn violation(&self, p: &Point2<f64>) -> f64 {
        match self {
            WindowSpec::Rect { a, b } => {
                let dx = (-p.x).max(p.x - a).max(0.0);
                let dy = (-p.y).max(p.y - b).max(0.0);
                dx.max(dy)
            }
            WindowSpec::Gate { a } => (-p.x).max(p.x - a).max(0.0),
            WindowSpec::Circle { d } => (p.coords.norm() - d / 2.0).max(0.0),
            WindowSpec::ConvexPolygon { vertices } => {
                let vs = vertices.vertices();
                let n = vs.len();
                let mut worst: f64 = 0.0;
                for i in 0..n {
                    let a = vs[i];
                    let b = vs[(i + 1) % n];
                    let e = b - a;
                    let len = e.norm();
                    if len < 1e-15 {
                        continue;
                    }
                    // positive = outside this edge's halfplane
                    let d = -e.perp(&(p - a)) / len;
                    worst = worst.max(d);
                }
                worst
            }
        }
    }
}

/// Placement of the polytope relative to the fixed window plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Configuration {
    pub placement: RigidPlacement,
}

/// One stage of a piecewise rigid motion, parameterized on [0, 1].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stage {
    /// Fixed rotation, translation interpolated from `from` to `to`.
    Translate {
        rotation: Rotation3<f64>,
        from: Vector3<f64>,
        to: Vector3<f64>,
    },
    /// `Rot(axis, angle(s)) ∘ base` with the angle linear in the parameter.
    RotateAboutAxis {
        axis_point: Point3<f64>,
        axis_dir: Dir3,
        angle_from: f64,
        angle_to: f64,
        base: RigidPlacement,
    },
}

impl Stage {
    pub fn at(&self, s: f64) -> RigidPlacement {
        match self {
            Stage::Translate { rotation, from, to } => {
                RigidPlacement::new(*rotation, from + (to - from) * s)
            }
            Stage::RotateAboutAxis {
                axis_point,
                axis_dir,
                angle_from,
                angle_to,
                base,
            } => {
                let angle = angle_from + (angle_to - angle_from) * s;
                let rot = Rotation3::from_axis_angle(axis_dir, angle);
                let spin = RigidPlacement::new(rot, axis_point.coords - rot * axis_point.coords);
                spin.compose(base)
            }
        }
    }

    pub fn reversed(&self) -> Stage {
        match self {
            Stage::Translate { rotation, from, to } => Stage::Translate {
                rotation: *rotation,
                from: *to,
                to: *from,
            },
            Stage::RotateAboutAxis {
                axis_point,
                axis_dir,
                angle_from,
                angle_to,
                base,
            } => Stage::RotateAboutAxis {
                axis_point: *axis_point,
                axis_dir: *axis_dir,
                angle_from: *angle_to,
                angle_to: *angle_from,
                base: base.clone(),
            },
        }
    }
}

/// Piecewise rigid motion; stage endpoints chain continuously.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MotionPath {
    pub stages: Vec<Stage>,
}

impl MotionPath {
    pub fn config_at(&self, stage: usize, s: f64) -> Configuration {
        Configuration {
            placement: self.stages[stage].at(s),
        }
    }

    pub fn reversed(&self) -> MotionPath {
        MotionPath {
            stages: self.stages.iter().rev().map(Stage::reversed).collect(),
        }
    }

    /// Maximal configuration mismatch between consecutive stage endpoints,
    /// measured on a probe cube.
    pub fn continuity_defect(&self) -> f64 {
        let probes = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let mut worst: f64 = 0.0;
        for w in self.stages.windows(2) {
            let a = w[0].at(1.0);
            let b = w[1].at(0.0);
            for p in &probes {
                worst = worst.max((a.apply(p) - b.apply(p)).norm());
            }
        }
        worst
    }
}

/// Free-space verdict for one configuration.
///
/// Free iff the window-plane cross-section is empty or inside the window
/// (closed, `tol` slack). The returned depth is the worst vertex violation.
pub fn config_free(
    poly: &Polytope,
    config: &Configuration,
    window: &WindowSpec,
    tol: f64,
) -> (bool, f64) {
    let section = poly.cross_section_z0(&config.placement);
    let mut depth: f64 = 0.0;
    for p in section.points() {
        depth = depth.max(window.violation(&p));
    }
    (depth <= tol, depth)
}

/// Sampled validation report. This is a sampled check of the motion, not a
/// proof of freeness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub free_at_all_samples: bool,
    pub max_violation: f64,
    pub first_violation: Option<(usize, f64)>,
    pub start_above: bool,
    pub end_below: bool,
    pub samples_per_stage: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.free_at_all_samples && self.start_above && self.end_below
    }
}

const ABOVE_BELOW_MARGIN: f64 = 1e-6;

/// Sample every stage uniformly and check freeness, plus fully-above /
/// fully-below at the path ends (strict margin on every vertex).
pub fn validate_path(
    poly: &Polytope,
    path: &MotionPath,
    window: &WindowSpec,
    n_samples: usize,
    tol: f64,
) -> ValidationReport {
    assert!(n_samples >= 2, "need at least 2 samples per stage");
    let mut free = true;
    let mut max_violation: f64 = 0.0;
    let mut first_violation = None;
    for (si, stage) in path.stages.iter().enumerate() {
        for k in 0..n_samples {
            let s = k as f64 / (n_samples - 1) as f64;
            let config = Configuration {
                placement: stage.at(s),
            };
            let (ok, depth) = config_free(poly, &config, window, tol);
            max_violation = max_violation.max(depth);
            if !ok && first_violation.is_none() {
                first_violation = Some((si, s));
            }
            free &= ok;
        }
    }
    let start = path.stages.first().map(|s| s.at(0.0));
    let end = path.stages.last().map(|s| s.at(1.0));
    let start_above = start
        .map(|p| poly.vertices().iter().all(|v| p.apply(v).z > ABOVE_BELOW_MARGIN))
        .unwrap_or(false);
    let end_below = end
        .map(|p| poly.vertices().iter().all(|v| p.apply(v).z < -ABOVE_BELOW_MARGIN))
        .unwrap_or(false);
    ValidationReport {
        free_at_all_samples: free,
        max_violation,
        first_violation,
        start_above,
        end_below,
        samples_per_stage: n_samples,
    }
}

/// Straight vertical drop of the identity-oriented polytope through the
/// window, shadow centered for rectangles and circles.
pub fn vertical_drop_path(poly: &Polytope, window: &WindowSpec) -> MotionPath {
    let (zlo, zhi) = poly.extent(&nalgebra::Unit::new_unchecked(Vector3::z()));
    let (xlo, xhi) = poly.extent(&nalgebra::Unit::new_unchecked(Vector3::x()));
    let (ylo, yhi) = poly.extent(&nalgebra::Unit::new_unchecked(Vector3::y()));
    let center = match window {
        WindowSpec::Rect { a, b } => Vector3::new(
            (a - (xhi - xlo)) / 2.0 - xlo,
            (b - (yhi - ylo)) / 2.0 - ylo,
            0.0,
        ),
        WindowSpec::Gate { a } => Vector3::new((a - (xhi - xlo)) / 2.0 - xlo, 0.0, 0.0),
        _ => Vector3::new(
            -(xlo + xhi) / 2.0,
            -(ylo + yhi) / 2.0,
            0.0,
        ),
    };
    let span = zhi - zlo;
    let top = center + Vector3::new(0.0, 0.0, span + 1.0 - zlo);
    let bottom = center - Vector3::new(0.0, 0.0, span + 1.0 + zhi);
    MotionPath {
        stages: vec![Stage::Translate {
            rotation: Rotation3::identity(),
            from: top,
            to: bottom,
        }],
    }
}
