//! Property tests for the spec-level invariants.

use nalgebra::{Point2, Point3, Unit, Vector2, Vector3};
use proptest::prelude::*;

use sofa_window::geom::{build_polytope, Polygon2};
use sofa_window::motion::WindowSpec;
use sofa_window::sliding::{admissible_region, slide_feasible};

fn point3_strategy() -> impl Strategy<Value = Point3<f64>> {
    (
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
    )
        .prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn cloud_strategy(n: usize) -> impl Strategy<Value = Vec<Point3<f64>>> {
    proptest::collection::vec(point3_strategy(), 4..n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hull_preserves_support_in_every_direction(
        pts in cloud_strategy(12),
        dir in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
    ) {
        let v = Vector3::new(dir.0, dir.1, dir.2);
        prop_assume!(v.norm() > 1e-3);
        let u = Unit::new_normalize(v);
        let Ok(poly) = build_polytope(&pts) else {
            return Ok(()); // degenerate clouds are rejected, nothing to check
        };
        let input_max = pts.iter().map(|p| u.dot(&p.coords)).fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = poly.extent(&u);
        prop_assert!((hi - input_max).abs() < 1e-9);
        prop_assert!(lo <= hi);
        // Euler relation holds for every constructed hull.
        let e = poly.edges().len() as i64;
        let f = poly.faces().len() as i64;
        prop_assert_eq!(poly.num_vertices() as i64 - e + f, 2);
    }

    #[test]
    fn admissible_membership_matches_extent(
        pts in cloud_strategy(9),
        bound in 0.3..2.5f64,
        dir in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
    ) {
        let v = Vector3::new(dir.0, dir.1, dir.2);
        prop_assume!(v.norm() > 1e-3);
        let u = Unit::new_normalize(v);
        let Ok(poly) = build_polytope(&pts) else { return Ok(()) };
        let region = admissible_region(&poly, bound);
        let w = poly.extent_width(&u);
        // central symmetry
        prop_assert_eq!(region.membership(&u), region.membership(&-u.into_inner()));
        if w < bound - 1e-7 {
            prop_assert!(region.membership(&u));
        }
        if w > bound + 1e-7 {
            prop_assert!(!region.membership(&u));
        }
    }

    #[test]
    fn sliding_monotone_in_window_size(
        pts in cloud_strategy(9),
        a in 0.4..1.6f64,
        b in 0.4..1.6f64,
        grow in 0.0..0.8f64,
    ) {
        let Ok(poly) = build_polytope(&pts) else { return Ok(()) };
        if slide_feasible(&poly, a, b).is_some() {
            prop_assert!(slide_feasible(&poly, a + grow, b).is_some());
            prop_assert!(slide_feasible(&poly, a, b + grow).is_some());
        }
    }

    #[test]
    fn polygon_hull_contains_inputs_and_is_idempotent(
        pts in proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 3..14),
    ) {
        let points: Vec<Point2<f64>> = pts.iter().map(|(x, y)| Point2::new(*x, *y)).collect();
        let poly = Polygon2::from_hull_points(&points);
        if poly.is_degenerate() {
            return Ok(());
        }
        for p in &points {
            prop_assert!(poly.contains(p, 1e-7));
        }
        let again = Polygon2::from_hull_points(poly.vertices());
        prop_assert_eq!(again.len(), poly.len());
        prop_assert!(poly.area() > 0.0);
    }

    #[test]
    fn fits_in_rect_monotone(
        pts in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3..10),
        a in 0.5..3.0f64,
        b in 0.5..3.0f64,
        grow in 0.0..1.0f64,
    ) {
        let points: Vec<Point2<f64>> = pts.iter().map(|(x, y)| Point2::new(*x, *y)).collect();
        let poly = Polygon2::from_hull_points(&points);
        if poly.is_degenerate() {
            return Ok(());
        }
        if poly.fits_in_rect(a, b).is_some() {
            prop_assert!(poly.fits_in_rect(a + grow, b + grow).is_some());
        }
    }

    #[test]
    fn window_violation_zero_iff_inside(
        px in -2.0..4.0f64,
        py in -2.0..4.0f64,
        a in 0.5..2.0f64,
        b in 0.5..2.0f64,
    ) {
        let w = WindowSpec::Rect { a, b };
        let p = Point2::new(px, py);
        let inside = px >= 0.0 && px <= a && py >= 0.0 && py <= b;
        if inside {
            prop_assert_eq!(w.violation(&p), 0.0);
        } else {
            prop_assert!(w.violation(&p) > 0.0);
        }
        // circle window agrees with the distance formula
        let c = WindowSpec::Circle { d: a };
        let expect = (Vector2::new(px, py).norm() - a / 2.0).max(0.0);
        prop_assert!((c.violation(&p) - expect).abs() < 1e-12);
    }
}
