//! Sliding feasibility through a rectangular window.
//!
//! A polytope can slide through the `a×b` window if and only if there are
//! orthogonal unit vectors `x`, `y` with `extent(K,x) ≤ a` and
//! `extent(K,y) ≤ b`; the sliding direction is then `x×y`, and a vertical
//! slide exists after rotating that frame onto the window axes. The search
//! iterates candidate points of the two admissible regions and intersects,
//! exactly, the constraint intervals induced on each candidate's orthogonal
//! great circle.

pub mod region;

use nalgebra::{Unit, Vector2, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    lex_canonical_sign, orthonormal_pair, rotation_between_frames, Dir3, Polytope, RigidPlacement,
};
use crate::tol::EPS_GEOM;

pub use region::{admissible_region, BoundaryArc, SphereConstraint, SphericalRegion};

use region::{constraint_on_circle, intersect_intervals, Circle};

use std::f64::consts::PI;

/// Witness of a feasible sliding motion: window axis directions and the
/// sliding direction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlidingWitness {
    pub x_axis: Dir3,
    pub y_axis: Dir3,
    /// Sliding direction `x×y`.
    pub v: Dir3,
    /// Set when some extent constraint is within 1e-6 of equality.
    pub grazing: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SlidingError {
    #[error("witness fails the extent/orthogonality verification")]
    InvalidWitness,
}

/// Verification slack for returned witnesses: candidate points are exact
/// solutions of their binding constraints, so a couple of ulps beyond
/// `EPS_GEOM` suffices.
const WITNESS_SLACK: f64 = 2.0 * EPS_GEOM;
const GRAZING_BAND: f64 = 1e-6;

fn verify_pair(poly: &Polytope, x: &Dir3, y: &Dir3, a: f64, b: f64) -> Option<bool> {
    if x.dot(y).abs() > 1e-10 {
        return None;
    }
    let wx = poly.extent_width(x);
    let wy = poly.extent_width(y);
    if wx <= a + WITNESS_SLACK && wy <= b + WITNESS_SLACK {
        Some(wx > a - GRAZING_BAND || wy > b - GRAZING_BAND)
    } else {
        None
    }
}

/// Points worth probing on the great circle orthogonal to `x`, inside
/// `other`: for each surviving interval its endpoints (exact solutions of
/// the binding constraint) and midpoint.
fn great_circle_candidates(other: &SphericalRegion, x: &Dir3) -> Vec<Vector3<f64>> {
    let (p, q) = orthonormal_pair(x);
    let circle = Circle {
        center: Vector3::zeros(),
        radius: 1.0,
        basis_p: p.into_inner(),
        basis_q: q.into_inner(),
    };
    let mut intervals = vec![(0.0, 2.0 * PI)];
    if !other.full_sphere {
        for con in &other.constraints {
            match constraint_on_circle(&circle, con, EPS_GEOM) {
                None => return Vec::new(),
                Some(None) => {}
                Some(Some(arc)) => {
                    intervals = intersect_intervals(&intervals, arc);
                    if intervals.is_empty() {
                        return Vec::new();
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for (s, e) in intervals {
        for phi in [s, e, (s + e) / 2.0] {
            out.push(circle.point(phi));
        }
    }
    out
}

/// Search for an orthogonal pair `x ∈ A`, `y ∈ B`.
///
/// If a pair exists, one exists with `x` among A's vertex/top points or `y`
/// among B's, so iterating those candidates is complete. Candidates are
/// visited in lexicographic order for determinism.
pub fn good_pair_search(
    poly: &Polytope,
    region_a: &SphericalRegion,
    region_b: &SphericalRegion,
    a: f64,
    b: f64,
) -> Option<SlidingWitness> {
    if region_a.empty || region_b.empty {
        return None;
    }
    if region_a.full_sphere && region_b.full_sphere {
        let x = Unit::new_unchecked(Vector3::x());
        let y = Unit::new_unchecked(Vector3::y());
        let grazing = verify_pair(poly, &x, &y, a, b)?;
        return Some(make_witness(x, y, grazing));
    }

    // Pass 1: x from A's candidates, y on the circle orthogonal to x in B.
    for x in region_a.candidate_points() {
        for yv in great_circle_candidates(region_b, &x) {
            let y = Unit::new_normalize(yv);
            if let Some(grazing) = verify_pair(poly, &x, &y, a, b) {
                return Some(make_witness(x, y, grazing));
            }
        }
    }
    // Pass 2: symmetric.
    for y in region_b.candidate_points() {
        for xv in great_circle_candidates(region_a, &y) {
            let x = Unit::new_normalize(xv);
            if let Some(grazing) = verify_pair(poly, &x, &y, a, b) {
                return Some(make_witness(x, y, grazing));
            }
        }
    }
    None
}

fn make_witness(x: Dir3, y: Dir3, grazing: bool) -> SlidingWitness {
    let x = lex_canonical_sign(&x);
    let y = lex_canonical_sign(&y);
    let v = Unit::new_normalize(x.cross(&y));
    SlidingWitness {
        x_axis: x,
        y_axis: y,
        v,
        grazing,
    }
}

/// Decide whether the polytope can slide through the `a×b` window.
///
/// Swapping the window sides swaps the witness axes.
pub fn slide_feasible(poly: &Polytope, a: f64, b: f64) -> Option<SlidingWitness> {
    assert!(a > 0.0 && b > 0.0);
    if a <= b {
        let ra = admissible_region(poly, a);
        let rb = admissible_region(poly, b);
        good_pair_search(poly, &ra, &rb, a, b)
    } else {
        let rb = admissible_region(poly, b);
        let ra = admissible_region(poly, a);
        good_pair_search(poly, &rb, &ra, b, a).map(|w| {
            let x = w.y_axis;
            let y = w.x_axis;
            let v = Unit::new_normalize(x.cross(&y));
            SlidingWitness {
                x_axis: x,
                y_axis: y,
                v,
                grazing: w.grazing,
            }
        })
    }
}

/// Placement from which the polytope passes the window `[0,a]×[0,b]×{0}` by
/// translating in the −z direction.
///
/// The witness frame `(x, y, v)` is rotated onto `(eₓ, −e_y, −e_z)` so the
/// vertical shadow has extents `≤ (a, b)`; the shadow is then centered in
/// the window and the body lifted above the plane.
pub fn vertical_slide_witness(
    poly: &Polytope,
    witness: &SlidingWitness,
    a: f64,
    b: f64,
) -> Result<RigidPlacement, SlidingError> {
    if verify_pair(poly, &witness.x_axis, &witness.y_axis, a, b).is_none() {
        return Err(SlidingError::InvalidWitness);
    }
    let ex = Unit::new_unchecked(Vector3::x());
    let ney = Unit::new_unchecked(-Vector3::y());
    let rotation = rotation_between_frames(&witness.x_axis, &witness.y_axis, &ex, &ney);
    let rotated = poly.transformed(&RigidPlacement::new(rotation, Vector3::zeros()));
    let (xlo, xhi) = rotated.extent(&Unit::new_unchecked(Vector3::x()));
    let (ylo, yhi) = rotated.extent(&Unit::new_unchecked(Vector3::y()));
    let (zlo, _zhi) = rotated.extent(&Unit::new_unchecked(Vector3::z()));
    let t = Vector3::new(
        (a - (xhi - xlo)) / 2.0 - xlo,
        (b - (yhi - ylo)) / 2.0 - ylo,
        0.5 * (a + b).max(1.0) - zlo,
    );
    Ok(RigidPlacement::new(rotation, t))
}

/// Shadow extents of the placed polytope in the window plane (diagnostics).
pub fn shadow_extents(
    poly: &Polytope,
    placement: &RigidPlacement,
) -> (Vector2<f64>, Vector2<f64>) {
    let placed = poly.transformed(placement);
    let (xlo, xhi) = placed.extent(&Unit::new_unchecked(Vector3::x()));
    let (ylo, yhi) = placed.extent(&Unit::new_unchecked(Vector3::y()));
    (Vector2::new(xlo, ylo), Vector2::new(xhi, yhi))
}
