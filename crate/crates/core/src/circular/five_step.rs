//! The general motion of the unit regular tetrahedron through a circular
//! window of diameter ≥ the general-motion threshold.
//!
//! Described window-centrically: slide the window plane from below the
//! bottom vertex to the optimal middle-vertex triangle, rotate about its
//! short chord to a rectangular cross-section, slide across the rectangular
//! band to the swapped rectangle, then mirror the first two phases through
//! the opposite vertex pair. At threshold, the disc's in-plane position
//! after the band crossing is forced to a different point than the mirrored
//! rotation requires, so the middle phase carries an extra in-plane
//! recentering translation; the emitted path therefore has six stages
//! realizing the five phases. Everything is converted to a motion of the
//! body with the window fixed in the plane `z = 0`.

use nalgebra::{Matrix3, Point3, Rotation3, Unit, Vector3};

use crate::geom::{regular_tetrahedron_vertices, Dir3, RigidPlacement};
use crate::motion::{MotionPath, Stage};
use crate::tol::EPS_GEOM;

use super::{delta2_cached, CircularError};

/// Geometry underlying the motion, exposed for tests and rendering.
#[derive(Debug, Clone)]
pub struct FiveStepParameters {
    /// Edge parameter of the optimal cross-section (x = y).
    pub t: f64,
    /// Enclosing-disc diameter of that cross-section.
    pub delta2: f64,
    /// Diagonal of the mid-motion rectangular cross-section.
    pub mid_rect_diagonal: f64,
}

pub fn five_step_parameters() -> FiveStepParameters {
    let d2 = delta2_cached();
    let t = d2.argmin.0;
    FiveStepParameters {
        t,
        delta2: d2.value,
        mid_rect_diagonal: (t * t + (1.0 - t) * (1.0 - t)).sqrt(),
    }
}

/// Window pose: rigid map from window-local coordinates (disc centered at
/// the origin in the plane z = 0) into the body frame.
#[derive(Debug, Clone)]
struct WinPose {
    rotation: Rotation3<f64>,
    center: Vector3<f64>,
}

impl WinPose {
    fn from_frame(p: &Dir3, q: &Dir3, n: &Dir3, center: Vector3<f64>) -> WinPose {
        let m = Matrix3::from_columns(&[p.into_inner(), q.into_inner(), n.into_inner()]);
        WinPose {
            rotation: Rotation3::from_matrix_unchecked(m),
            center,
        }
    }

    fn rotated_about_line(&self, point: &Point3<f64>, axis: &Dir3, angle: f64) -> WinPose {
        let rot = Rotation3::from_axis_angle(axis, angle);
        WinPose {
            rotation: rot * self.rotation,
            center: point.coords + rot * (self.center - point.coords),
        }
    }
}

/// Body-frame stage of the window, before inversion.
enum WinStage {
    Slide {
        pose: WinPose,
        to: Vector3<f64>,
    },
    Rotate {
        pose: WinPose,
        axis_point: Point3<f64>,
        axis_dir: Dir3,
        angle: f64,
    },
}

fn invert(stages: Vec<WinStage>) -> MotionPath {
    let stages = stages
        .into_iter()
        .map(|s| match s {
            WinStage::Slide { pose, to } => {
                let rinv = pose.rotation.inverse();
                Stage::Translate {
                    rotation: rinv,
                    from: -(rinv * pose.center),
                    to: -(rinv * to),
                }
            }
            WinStage::Rotate {
                pose,
                axis_point,
                axis_dir,
                angle,
            } => {
                let rinv = pose.rotation.inverse();
                let base = RigidPlacement::new(rinv, -(rinv * pose.center));
                Stage::RotateAboutAxis {
                    axis_point: base.apply(&axis_point),
                    axis_dir: Unit::new_normalize(rinv * axis_dir.into_inner()),
                    angle_from: 0.0,
                    angle_to: -angle,
                    base,
                }
            }
        })
        .collect();
    MotionPath { stages }
}

fn in_plane_unit_towards(
    from: &Point3<f64>,
    towards: &Point3<f64>,
    along: &Dir3,
) -> Dir3 {
    let d = towards - from;
    Unit::new_normalize(d - along.into_inner() * d.dot(along))
}

/// The crossing motion for a window of diameter `d ≥ δ₂ − ε`.
pub fn five_step_motion(d: f64) -> Result<MotionPath, CircularError> {
    let params = five_step_parameters();
    if d < params.delta2 - EPS_GEOM {
        return Err(CircularError::PreconditionViolated(d));
    }
    let t = params.t;
    let [a, b, c, dd] = regular_tetrahedron_vertices();

    // First triangle: through B with U on AC, V on AD at parameter t.
    let u: Point3<f64> = a + (c - a) * t;
    let v: Point3<f64> = a + (dd - a) * t;
    let mid_uv = Point3::from((u.coords + v.coords) / 2.0);
    let mut up1 = Unit::new_normalize((u - b).cross(&(v - b)));
    if up1.dot(&(a - b)) > 0.0 {
        up1 = Unit::new_unchecked(-up1.into_inner());
    }
    // Hinge direction chosen so positive rotation sweeps B below the plane.
    let w0 = in_plane_unit_towards(&mid_uv, &b, &up1);
    let mut p1 = Unit::new_normalize(v - u);
    if up1.cross(&p1).dot(&w0) < 0.0 {
        p1 = Unit::new_unchecked(-p1.into_inner());
    }
    let q1 = Unit::new_normalize(up1.cross(&p1));

    // Disc center: boundary circle through U and V, bulging toward B.
    let half_chord = t / 2.0;
    let m = ((d / 2.0) * (d / 2.0) - half_chord * half_chord).sqrt();
    let c1 = mid_uv.coords + w0.into_inner() * m;

    // Rectangle band: cross-sections parallel to both AB and CD.
    let mut n_rect = Unit::new_normalize((b - a).cross(&(dd - c)));
    if n_rect.dot(&(c - u)) < 0.0 {
        n_rect = Unit::new_unchecked(-n_rect.into_inner());
    }

    // Second hinge: the side of the swapped rectangle on the far triangle.
    let u2: Point3<f64> = a + (c - a) * (1.0 - t);
    let v2: Point3<f64> = b + (c - b) * (1.0 - t);
    let mid2 = Point3::from((u2.coords + v2.coords) / 2.0);
    let s2: Point3<f64> = a + (dd - a) * (1.0 - t);
    let t2: Point3<f64> = b + (dd - b) * (1.0 - t);
    let rect2_center = Point3::from((u2.coords + v2.coords + s2.coords + t2.coords) / 4.0);
    let w2 = in_plane_unit_towards(&mid2, &rect2_center, &n_rect);
    let mut p2 = Unit::new_normalize(v2 - u2);
    if n_rect.cross(&p2).dot(&w2) < 0.0 {
        p2 = Unit::new_unchecked(-p2.into_inner());
    }

    // Final triangle: through D with the second hinge as base.
    let mut n5 = Unit::new_normalize((v2 - u2).cross(&(dd - u2)));
    if n5.dot(&(c - u2)) < 0.0 {
        n5 = Unit::new_unchecked(-n5.into_inner());
    }

    // Positive rotation sweeps the sections by the hinge-direction choice;
    // reduce the signed dihedral angles to that direction.
    let tau = std::f64::consts::TAU;
    let phi2 = crate::geom::signed_angle_about(&p1, &up1, &n_rect).rem_euclid(tau);
    let phi5 = crate::geom::signed_angle_about(&p2, &n_rect, &n5).rem_euclid(tau);
    debug_assert!(phi2 > 0.0 && phi2 < std::f64::consts::PI);
    debug_assert!(phi5 > 0.0 && phi5 < std::f64::consts::PI);

    let approach = 0.6;
    let pose1 = WinPose::from_frame(&p1, &q1, &up1, c1 - (c1 - a.coords) * (1.0 + approach));

    let mut stages = Vec::new();
    // Phase 1: slide up to the optimal triangle.
    stages.push(WinStage::Slide {
        pose: pose1.clone(),
        to: c1,
    });
    // Phase 2: rotate about UV to the rectangular section.
    let pose2 = WinPose {
        rotation: pose1.rotation,
        center: c1,
    };
    stages.push(WinStage::Rotate {
        pose: pose2.clone(),
        axis_point: u,
        axis_dir: p1,
        angle: phi2,
    });
    let pose3 = pose2.rotated_about_line(&u, &p1, phi2);
    // Phase 3a: slide across the rectangle band, perpendicular to it.
    let band = (1.0 - 2.0 * t) * n_rect.dot(&(c - a));
    let c3_end = pose3.center + n_rect.into_inner() * band;
    stages.push(WinStage::Slide {
        pose: pose3.clone(),
        to: c3_end,
    });
    // Phase 3b: in-plane recentering onto the mirrored rotation's start.
    let c4 = mid2.coords + w2.into_inner() * m;
    debug_assert!((c4 - c3_end).dot(&n_rect).abs() < 1e-9);
    let pose4 = WinPose {
        rotation: pose3.rotation,
        center: c3_end,
    };
    stages.push(WinStage::Slide {
        pose: pose4.clone(),
        to: c4,
    });
    // Phase 4: rotate about the second hinge to the far triangle.
    let pose5 = WinPose {
        rotation: pose3.rotation,
        center: c4,
    };
    stages.push(WinStage::Rotate {
        pose: pose5.clone(),
        axis_point: u2,
        axis_dir: p2,
        angle: phi5,
    });
    let pose6 = pose5.rotated_about_line(&u2, &p2, phi5);
    // Phase 5: slide out past the top vertex.
    let exit = c.coords + (pose6.center - c.coords) * (-approach);
    stages.push(WinStage::Slide {
        pose: pose6,
        to: exit,
    });

    Ok(invert(stages))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::regular_tetrahedron;
    use crate::motion::{validate_path, WindowSpec};
    use approx::assert_relative_eq;

    #[test]
    fn parameters_match_published_values() {
        let p = five_step_parameters();
        assert_relative_eq!(p.mid_rect_diagonal, 0.72368, epsilon = 1e-4);
        assert_relative_eq!(1.0 - p.t, 0.608887, epsilon = 5e-3);
    }

    #[test]
    fn path_is_continuous() {
        let path = five_step_motion(0.9).unwrap();
        assert!(path.continuity_defect() < 1e-9, "defect {}", path.continuity_defect());
    }

    #[test]
    fn below_threshold_is_rejected() {
        assert!(matches!(
            five_step_motion(0.89),
            Err(CircularError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn validates_just_above_threshold() {
        let d = five_step_parameters().delta2 + 1e-4;
        let tetra = regular_tetrahedron();
        let path = five_step_motion(d).unwrap();
        let report = validate_path(&tetra, &path, &WindowSpec::Circle { d }, 300, 1e-9);
        assert!(
            report.passed(),
            "max violation {} at {:?}",
            report.max_violation,
            report.first_violation
        );
    }

    #[test]
    fn validates_at_unit_diameter() {
        let tetra = regular_tetrahedron();
        let path = five_step_motion(1.0).unwrap();
        let report = validate_path(&tetra, &path, &WindowSpec::Circle { d: 1.0 }, 200, 1e-9);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn mid_motion_rectangle_diagonal() {
        let d = five_step_parameters().delta2 + 1e-4;
        let tetra = regular_tetrahedron();
        let path = five_step_motion(d).unwrap();
        // End of the first rotation stage: the rectangular cross-section.
        let config = path.config_at(1, 1.0);
        let pts = tetra.cross_section_z0(&config.placement).points();
        assert_eq!(pts.len(), 4);
        let mut diag: f64 = 0.0;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                diag = diag.max((pts[i] - pts[j]).norm());
            }
        }
        assert_relative_eq!(diag, 0.72368, epsilon = 1e-4);
    }
}
