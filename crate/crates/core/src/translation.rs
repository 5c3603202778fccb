//! Gate feasibility, fixed-orientation translational planning and the
//! projection-width diagnostic.

use nalgebra::{Point3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    fibonacci_directions, lex_less, refine_on_sphere, rotation_between_frames, AxisPlane, Dir3,
    Polytope, RigidPlacement, XSlab,
};
use crate::sliding::SlidingWitness;
use crate::tol::{EPS_GEOM, OPT_TOL};

/// Witness that the polytope fits a gate (infinite slab window) of width `a`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateWitness {
    pub normal: Dir3,
    pub width: f64,
    /// Rotation+translation placing the minimal slab across the gate
    /// `0 ≤ x ≤ a`, lifted above the window plane.
    pub orientation: RigidPlacement,
    pub grazing: bool,
}

/// Sliding line for a prescribed orientation: the reference vertex moves
/// along this line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlideLine {
    pub point: Point3<f64>,
    pub direction: Dir3,
    /// Translation applied to the oriented polytope before sliding.
    pub offset: Vector3<f64>,
    pub xz_slab: XSlab,
    pub yz_slab: XSlab,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranslationError {
    #[error("slab normals are parallel")]
    DegeneratePrism,
}

/// Gate feasibility: the polytope passes an infinite slab of width `a` by
/// some rigid motion iff it slides through it, iff its minimal width is ≤ a.
pub fn gate_feasible(poly: &Polytope, a: f64) -> Option<GateWitness> {
    assert!(a > 0.0);
    let (w, normal) = poly.width3();
    if w > a + EPS_GEOM {
        return None;
    }
    let ex = Unit::new_unchecked(Vector3::x());
    let (p, _) = crate::geom::orthonormal_pair(&normal);
    let (tp, _) = crate::geom::orthonormal_pair(&ex);
    let rotation = rotation_between_frames(&normal, &p, &ex, &tp);
    let rotated = poly.transformed(&RigidPlacement::new(rotation, Vector3::zeros()));
    let (xlo, xhi) = rotated.extent(&ex);
    let (zlo, _) = rotated.extent(&Unit::new_unchecked(Vector3::z()));
    let t = Vector3::new((a - (xhi - xlo)) / 2.0 - xlo, 0.0, 0.5 * a.max(1.0) - zlo);
    Some(GateWitness {
        normal,
        width: w,
        orientation: RigidPlacement::new(rotation, t),
        grazing: w > a - 1e-6,
    })
}

/// Fixed-orientation translational feasibility through `[0,a]×[0,b]`.
///
/// Projects the oriented polytope onto the xz- and yz-planes; a slab through
/// the window axis of intercept ≤ a (resp. ≤ b) in each projection yields a
/// prism whose cross-section with the window plane is a rectangle inside the
/// window. The returned line passes through the lexicographically smallest
/// vertex of the translated body.
pub fn fixed_orientation_slide(
    poly: &Polytope,
    orientation: &Rotation3<f64>,
    a: f64,
    b: f64,
) -> Result<Option<SlideLine>, TranslationError> {
    assert!(a > 0.0 && b > 0.0);
    let oriented = poly.transformed(&RigidPlacement::new(*orientation, Vector3::zeros()));
    let pxz = oriented.project_axis_plane(AxisPlane::Xz);
    let pyz = oriented.project_axis_plane(AxisPlane::Yz);
    let sx = pxz.min_xslab();
    let sy = pyz.min_xslab();
    if sx.ratio > a + EPS_GEOM || sy.ratio > b + EPS_GEOM {
        return Ok(None);
    }

    // 3D slab normals (no y-, resp. no x-component).
    let na = Vector3::new(-sx.theta.sin(), 0.0, sx.theta.cos());
    let nb = Vector3::new(0.0, -sy.theta.sin(), sy.theta.cos());
    let axis = na.cross(&nb);
    if axis.norm() < 1e-12 {
        return Err(TranslationError::DegeneratePrism);
    }
    let mut direction = Unit::new_normalize(axis);
    if direction.z > 0.0 {
        direction = Unit::new_unchecked(-direction.into_inner());
    }

    // Window-plane intercepts of the two slabs; center them in the window.
    let x_interval = (sx.lo / -sx.theta.sin(), sx.hi / -sx.theta.sin());
    let (x0, x1) = (x_interval.0.min(x_interval.1), x_interval.0.max(x_interval.1));
    let y_interval = (sy.lo / -sy.theta.sin(), sy.hi / -sy.theta.sin());
    let (y0, y1) = (y_interval.0.min(y_interval.1), y_interval.0.max(y_interval.1));
    let offset = Vector3::new(
        (a - (x1 - x0)) / 2.0 - x0,
        (b - (y1 - y0)) / 2.0 - y0,
        0.0,
    );

    let mut reference = oriented.vertices()[0] + offset;
    for v in oriented.vertices() {
        let cand = v + offset;
        if lex_less(&cand.coords, &reference.coords) {
            reference = cand;
        }
    }
    Ok(Some(SlideLine {
        point: reference,
        direction,
        offset,
        xz_slab: sx,
        yz_slab: sy,
    }))
}

/// Maximal shadow width over sampled projection directions, locally refined.
///
/// A diagnostic, not a decision procedure: each sample certifies a lower
/// bound, the global maximum is grid-resolution approximate.
pub fn projection_width_max(poly: &Polytope, resolution: usize) -> f64 {
    assert!(resolution >= 100, "resolution must be at least 100 samples");
    let f = |v: &Dir3| poly.project_shadow(v).width2().0;
    let mut best_dir = Unit::new_unchecked(Vector3::z());
    let mut best = f64::NEG_INFINITY;
    for v in fibonacci_directions(resolution) {
        let w = f(&v);
        if w > best {
            best = w;
            best_dir = v;
        }
    }
    let step = (4.0 / (resolution as f64)).sqrt();
    let (_, refined) = refine_on_sphere(&f, best_dir, step, OPT_TOL, true);
    refined
}

/// Sliding witness for the `min(a,b) × √(a²+b²)` rectangle, built from the
/// gate witness by rotating about the gate axis until the second
/// projection's bounding lines are vertical.
pub fn slide_trade(poly: &Polytope, a: f64, b: f64) -> Option<SlidingWitness> {
    assert!(a > 0.0 && b > 0.0);
    let m = a.min(b);
    let diag = a.hypot(b);
    let gate = gate_feasible(poly, m)?;
    let rot0 = gate.orientation.rotation;
    let oriented = poly.transformed(&RigidPlacement::new(rot0, Vector3::zeros()));
    let pyz = oriented.project_axis_plane(AxisPlane::Yz);
    let (w2, dir2) = pyz.width2();
    if w2 > diag + EPS_GEOM {
        return None;
    }
    // Rotate about x so the width direction of the yz-shadow becomes e_y.
    let gamma = dir2.y.atan2(dir2.x);
    let fix = Rotation3::from_axis_angle(&Unit::new_unchecked(Vector3::x()), -gamma);
    let total = fix * rot0;
    let x_axis = Unit::new_normalize(total.inverse() * Vector3::x());
    let y_axis = Unit::new_normalize(total.inverse() * Vector3::y());
    let wx = poly.extent_width(&x_axis);
    let wy = poly.extent_width(&y_axis);
    if wx > m + EPS_GEOM || wy > diag + EPS_GEOM || x_axis.dot(&y_axis).abs() > 1e-10 {
        return None;
    }
    let x = crate::geom::lex_canonical_sign(&x_axis);
    let y = crate::geom::lex_canonical_sign(&y_axis);
    Some(SlidingWitness {
        x_axis: x,
        y_axis: y,
        v: Unit::new_normalize(x.cross(&y)),
        grazing: wx > m - 1e-6 || wy > diag - 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{box_polytope, build_polytope, regular_tetrahedron};
    use crate::motion::{config_free, Configuration, WindowSpec};
    use approx::assert_relative_eq;
    use nalgebra::Point3;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tetrahedron_gate_thresholds() {
        let t = regular_tetrahedron();
        assert!(gate_feasible(&t, 0.71).is_some());
        assert!(gate_feasible(&t, 0.70).is_none());
        let w = gate_feasible(&t, 0.71).unwrap();
        assert_relative_eq!(w.width, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn cube_gate_grazing() {
        let c = box_polytope(1.0, 1.0, 1.0).unwrap();
        let w = gate_feasible(&c, 1.0).expect("feasible");
        assert!(w.grazing);
        // The oriented body fits the vertical slab 0 ≤ x ≤ 1.
        let placed = c.transformed(&w.orientation);
        for v in placed.vertices() {
            assert!(v.x >= -1e-9 && v.x <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn cube_identity_slide_line_is_vertical() {
        let c = box_polytope(1.0, 1.0, 1.0).unwrap();
        let line = fixed_orientation_slide(&c, &Rotation3::identity(), 1.0, 1.0)
            .unwrap()
            .expect("feasible");
        assert_relative_eq!(line.direction.into_inner(), -Vector3::z(), epsilon = 1e-12);
    }

    #[test]
    fn sliding_along_line_keeps_sections_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let window = WindowSpec::Rect { a: 1.3, b: 1.1 };
        for _ in 0..10 {
            let pts: Vec<Point3<f64>> = (0..9)
                .map(|_| {
                    Point3::new(
                        rng.random::<f64>(),
                        rng.random::<f64>(),
                        rng.random::<f64>(),
                    )
                })
                .collect();
            let Ok(poly) = build_polytope(&pts) else {
                continue;
            };
            let rot = Rotation3::from_euler_angles(
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
            );
            let Some(line) = fixed_orientation_slide(&poly, &rot, 1.3, 1.1).unwrap() else {
                continue;
            };
            let oriented = poly.transformed(&RigidPlacement::new(rot, Vector3::zeros()));
            let (zlo, zhi) = oriented.extent(&Unit::new_unchecked(Vector3::z()));
            let span = (zhi - zlo) / line.direction.z.abs() + 1.0;
            for k in 0..=1000 {
                let t = -span + 2.0 * span * k as f64 / 1000.0;
                let placement = RigidPlacement::new(
                    rot,
                    line.offset + line.direction.into_inner() * t,
                );
                let (free, depth) =
                    config_free(&poly, &Configuration { placement }, &window, 1e-9);
                assert!(free, "violation depth {depth} at t={t}");
            }
        }
    }

    #[test]
    fn must_rotate_tetrahedron_has_no_translational_motion() {
        // Long thin tetrahedron: no fixed-orientation translation through the
        // √5 square near the identity orientation.
        let h = 100.0;
        let k = build_polytope(&[
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 3.0, 0.0),
            Point3::new(1.0, 0.0, h),
            Point3::new(0.0, 3.0, h),
        ])
        .unwrap();
        let s = 5.0_f64.sqrt();
        assert!(fixed_orientation_slide(&k, &Rotation3::identity(), s, s)
            .unwrap()
            .is_none());
        let near = Rotation3::from_euler_angles(0.01, -0.005, 0.02);
        assert!(fixed_orientation_slide(&k, &near, s, s).unwrap().is_none());
    }

    #[test]
    fn projection_width_dominates_width3() {
        let t = regular_tetrahedron();
        let (w3, _) = t.width3();
        assert!(projection_width_max(&t, 500) >= w3 - 1e-9);
    }

    #[test]
    fn slide_trade_cube() {
        let c = box_polytope(1.0, 1.0, 1.0).unwrap();
        let w = slide_trade(&c, 1.0, 2.0).expect("witness");
        assert!(c.extent_width(&w.x_axis) <= 1.0 + 1e-9);
        assert!(c.extent_width(&w.y_axis) <= 5.0_f64.sqrt() + 1e-9);
    }

    #[test]
    fn slide_trade_tetrahedron() {
        let t = regular_tetrahedron();
        let w = slide_trade(&t, 0.71, 0.71).expect("witness");
        let diag = 0.71_f64.hypot(0.71);
        assert!(t.extent_width(&w.x_axis) <= 0.71 + 1e-9);
        assert!(t.extent_width(&w.y_axis) <= diag + 1e-9);
    }

    #[test]
    fn slide_trade_requires_gate() {
        let c = box_polytope(1.0, 1.0, 1.0).unwrap();
        assert!(slide_trade(&c, 0.9, 5.0).is_none());
    }
}
