//! Admissible direction regions on the unit sphere.
//!
//! For a window side length `bound`, the admissible region of a polytope K
//! is `{u ∈ S² : extent(K, u) ≤ bound}`: the sphere cut by the halfspaces
//! `|⟨u, e⟩| ≤ bound` over all vertex-difference segments e. Constraints come
//! in antipodal pairs, so the region is centrally symmetric.

use nalgebra::{Point3, Unit, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{orthonormal_pair, Dir3, Polytope};
use crate::tol::EPS_GEOM;

use std::f64::consts::PI;

/// One linear constraint `⟨u, normal⟩ ≤ bound` cutting the sphere.
#[derive(Debug, Clone)]
pub struct SphereConstraint {
    pub normal: Dir3,
    pub bound: f64,
}

/// Angular interval of one constraint circle on the region boundary.
#[derive(Debug, Clone)]
pub struct BoundaryArc {
    pub constraint: usize,
    /// Closed interval `[start, end]` in the circle's angular parameter.
    pub start: f64,
    pub end: f64,
}

/// Subset of the unit sphere cut by linear constraints.
#[derive(Debug, Clone)]
pub struct SphericalRegion {
    pub constraints: Vec<SphereConstraint>,
    pub arcs: Vec<BoundaryArc>,
    /// Arc-pair intersection points inside the region.
    pub vertex_points: Vec<Dir3>,
    /// North-closest point of each boundary circle, when inside the region.
    pub top_points: Vec<Dir3>,
    pub north: Dir3,
    pub full_sphere: bool,
    pub empty: bool,
}

/// Small circle on the sphere: `⟨u, n⟩ = c`, parameterized by angle.
#[derive(Debug, Clone)]
pub(crate) struct Circle {
    pub center: Vector3<f64>,
    pub radius: f64,
    pub basis_p: Vector3<f64>,
    pub basis_q: Vector3<f64>,
}

impl Circle {
    pub(crate) fn for_constraint(c: &SphereConstraint) -> Circle {
        let r2 = 1.0 - c.bound * c.bound;
        let radius = r2.max(0.0).sqrt();
        let (p, q) = orthonormal_pair(&c.normal);
        Circle {
            center: c.normal.into_inner() * c.bound,
            radius,
            basis_p: p.into_inner(),
            basis_q: q.into_inner(),
        }
    }

    pub(crate) fn point(&self, phi: f64) -> Vector3<f64> {
        self.center + (self.basis_p * phi.cos() + self.basis_q * phi.sin()) * self.radius
    }
}

/// Allowed set of one constraint restricted to a parameterized circle:
/// `None` = empty, `Some(None)` = the whole circle, else the closed
/// complement arc `[start, end]` (length < 2π).
pub(crate) type CircleArcSet = Option<Option<(f64, f64)>>;

pub(crate) fn constraint_on_circle(
    circle: &Circle,
    con: &SphereConstraint,
    slack: f64,
) -> CircleArcSet {
    let a = circle.radius * circle.basis_p.dot(&con.normal);
    let b = circle.radius * circle.basis_q.dot(&con.normal);
    let d = con.bound + slack - circle.center.dot(&con.normal);
    let r = a.hypot(b);
    if r <= d {
        return Some(None);
    }
    if d <= -r {
        return None;
    }
    let phi0 = b.atan2(a);
    let delta = (d / r).clamp(-1.0, 1.0).acos();
    Some(Some((phi0 + delta, phi0 + 2.0 * PI - delta)))
}

/// Intersect a set of closed angular intervals with an arc (mod 2π).
pub(crate) fn intersect_intervals(
    intervals: &[(f64, f64)],
    arc: (f64, f64),
) -> Vec<(f64, f64)> {
    let (lo, hi) = arc;
    let mut out = Vec::new();
    for &(s, e) in intervals {
        let mut k = ((s - hi) / (2.0 * PI)).floor();
        loop {
            let alo = lo + k * 2.0 * PI;
            let ahi = hi + k * 2.0 * PI;
            if alo > e {
                break;
            }
            let ns = s.max(alo);
            let ne = e.min(ahi);
            if ns <= ne {
                out.push((ns, ne));
            }
            k += 1.0;
        }
    }
    out
}

fn candidate_norths() -> Vec<Dir3> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x534f_4641);
    (0..16)
        .map(|_| {
            let v = Vector3::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            );
            Unit::new_normalize(v)
        })
        .collect()
}

impl SphericalRegion {
    pub fn membership(&self, u: &Vector3<f64>) -> bool {
        if self.empty {
            return false;
        }
        self.constraints
            .iter()
            .all(|c| c.normal.dot(u) <= c.bound + EPS_GEOM)
    }

    /// Worst constraint margin: positive means outside.
    pub fn violation(&self, u: &Vector3<f64>) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.normal.dot(u) - c.bound)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn candidate_points(&self) -> Vec<Dir3> {
        let mut pts: Vec<Dir3> = Vec::new();
        for p in self.vertex_points.iter().chain(self.top_points.iter()) {
            if pts.iter().all(|q| (q.into_inner() - p.into_inner()).norm() > 1e-9) {
                pts.push(*p);
            }
        }
        pts.sort_by(|a, b| {
            a.x.partial_cmp(&b.x)
                .unwrap()
                .then(a.y.partial_cmp(&b.y).unwrap())
                .then(a.z.partial_cmp(&b.z).unwrap())
        });
        pts
    }
}

/// Admissible region `{u : extent(K, u) ≤ bound}`.
///
/// An empty region is returned with `empty = true` (membership always
/// false); a region with no effective constraints has `full_sphere = true`.
pub fn admissible_region(poly: &Polytope, bound: f64) -> SphericalRegion {
    assert!(bound > 0.0, "window side must be positive");
    let mut constraints: Vec<SphereConstraint> = Vec::new();
    for (dir, len) in poly.segment_directions() {
        let c = bound / len;
        if c >= 1.0 - 1e-15 {
            continue; // satisfied everywhere on the sphere
        }
        constraints.push(SphereConstraint {
            normal: dir,
            bound: c,
        });
        constraints.push(SphereConstraint {
            normal: Unit::new_unchecked(-dir.into_inner()),
            bound: c,
        });
    }

    if constraints.is_empty() {
        return SphericalRegion {
            constraints,
            arcs: Vec::new(),
            vertex_points: Vec::new(),
            top_points: Vec::new(),
            north: Unit::new_normalize(Vector3::new(0.1, 0.2, 0.97)),
            full_sphere: true,
            empty: false,
        };
    }

    let circles: Vec<Circle> = constraints.iter().map(Circle::for_constraint).collect();

    // Generic north pole: no boundary circle may be north-symmetric.
    let north = candidate_norths()
        .into_iter()
        .find(|n| {
            constraints
                .iter()
                .all(|c| c.normal.dot(n).abs() < 1.0 - 1e-6)
        })
        .expect("a generic north pole exists");

    let membership = |u: &Vector3<f64>| -> bool {
        constraints
            .iter()
            .all(|c| c.normal.dot(u) <= c.bound + EPS_GEOM)
    };

    // Boundary arcs per circle, clipped by every other constraint.
    let mut arcs: Vec<BoundaryArc> = Vec::new();
    for (i, circle) in circles.iter().enumerate() {
        let mut intervals = vec![(0.0, 2.0 * PI)];
        let mut alive = true;
        for (j, con) in constraints.iter().enumerate() {
            if i == j {
                continue;
            }
            match constraint_on_circle(circle, con, EPS_GEOM) {
                None => {
                    alive = false;
                    break;
                }
                Some(None) => {}
                Some(Some(arc)) => {
                    intervals = intersect_intervals(&intervals, arc);
                    if intervals.is_empty() {
                        alive = false;
                        break;
                    }
                }
            }
        }
        if alive {
            for (s, e) in intervals {
                arcs.push(BoundaryArc {
                    constraint: i,
                    start: s,
                    end: e,
                });
            }
        }
    }

    // Vertex points: exact pairwise circle intersections kept inside the
    // region. Solving the two binding constraints directly keeps candidates
    // exact at criticality, where interval endpoints would be rounded away.
    let mut vertex_points: Vec<Dir3> = Vec::new();
    let push_point = |v: Vector3<f64>, out: &mut Vec<Dir3>| {
        if !membership(&v) {
            return;
        }
        let u = Unit::new_normalize(v);
        if out
            .iter()
            .all(|q| (q.into_inner() - u.into_inner()).norm() > 1e-9)
        {
            out.push(u);
        }
    };
    for i in 0..constraints.len() {
        for j in (i + 1)..constraints.len() {
            let ni = constraints[i].normal.into_inner();
            let nj = constraints[j].normal.into_inner();
            let g = ni.dot(&nj);
            let det = 1.0 - g * g;
            if det < 1e-12 {
                continue;
            }
            let ci = constraints[i].bound;
            let cj = constraints[j].bound;
            let ai = (ci - g * cj) / det;
            let aj = (cj - g * ci) / det;
            let w = ni * ai + nj * aj;
            let cross = ni.cross(&nj);
            let t2 = (1.0 - w.norm_squared()) / cross.norm_squared();
            if t2 < -1e-12 {
                continue;
            }
            let t = t2.max(0.0).sqrt();
            push_point(w + cross * t, &mut vertex_points);
            if t > 1e-12 {
                push_point(w - cross * t, &mut vertex_points);
            }
        }
    }

    // Top points: north-closest point of each constraint circle.
    let mut top_points: Vec<Dir3> = Vec::new();
    for circle in &circles {
        if circle.radius <= 1e-12 {
            push_point(circle.center, &mut top_points);
            continue;
        }
        let a = circle.basis_p.dot(&north);
        let b = circle.basis_q.dot(&north);
        if a.abs() < 1e-15 && b.abs() < 1e-15 {
            continue; // excluded by the generic-north check
        }
        let phi = b.atan2(a);
        push_point(circle.point(phi), &mut top_points);
    }

    let empty = vertex_points.is_empty() && top_points.is_empty();
    SphericalRegion {
        constraints,
        arcs,
        vertex_points,
        top_points,
        north,
        full_sphere: false,
        empty,
    }
}

/// Sample points of the region boundary arcs (used by the stereographic
/// renderer and by tests).
pub fn sample_arcs(region: &SphericalRegion, per_arc: usize) -> Vec<Vec<Point3<f64>>> {
    let circles: Vec<Circle> = region
        .constraints
        .iter()
        .map(Circle::for_constraint)
        .collect();
    region
        .arcs
        .iter()
        .map(|arc| {
            let c = &circles[arc.constraint];
            (0..=per_arc)
                .map(|k| {
                    let phi = arc.start + (arc.end - arc.start) * k as f64 / per_arc as f64;
                    Point3::from(c.point(phi))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{box_polytope, regular_tetrahedron};

    fn unit_cube() -> Polytope {
        box_polytope(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn cube_at_body_diagonal_bound_is_full_sphere() {
        let r = admissible_region(&unit_cube(), 3.0_f64.sqrt() + 1e-12);
        assert!(r.full_sphere);
        assert!(r.membership(&Vector3::new(1.0, 0.0, 0.0)));
    }

    #[test]
    fn cube_at_unit_bound_is_the_axis_points() {
        let r = admissible_region(&unit_cube(), 1.0);
        assert!(!r.empty, "region must contain the ±axis directions");
        for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
            assert!(r.membership(&axis), "axis {axis:?} must be admissible");
            assert!(r.membership(&-axis));
            assert!(
                r.candidate_points()
                    .iter()
                    .any(|p| (p.into_inner() - axis).norm() < 1e-7),
                "axis {axis:?} must appear among candidates"
            );
        }
        // Nothing far from the axes is admissible: extent is Σ|uᵢ| ≥ 1 with
        // equality only on the axes.
        let off = Unit::new_normalize(Vector3::new(1.0, 0.4, 0.0));
        assert!(!r.membership(&off));
    }

    #[test]
    fn tetrahedron_below_width_is_empty() {
        let r = admissible_region(&regular_tetrahedron(), 0.70);
        assert!(r.empty);
        assert!(!r.membership(&Vector3::z()));
    }

    #[test]
    fn membership_matches_extent_and_is_centrally_symmetric() {
        use rand::Rng;
        use rand::SeedableRng;
        let tetra = regular_tetrahedron();
        let r = admissible_region(&tetra, 0.85);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let u = Unit::new_normalize(Vector3::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            ));
            let m = r.membership(&u);
            assert_eq!(m, r.membership(&-u.into_inner()), "central symmetry");
            let ext = tetra.extent_width(&u);
            if ext < 0.85 - 1e-7 {
                assert!(m);
            }
            if ext > 0.85 + 1e-7 {
                assert!(!m);
            }
        }
    }

    #[test]
    fn boundary_points_lie_on_circles_and_in_region() {
        let cube = unit_cube();
        let r = admissible_region(&cube, 1.2);
        assert!(!r.empty && !r.full_sphere);
        for p in r.candidate_points() {
            assert!(r.violation(&p.into_inner()) <= EPS_GEOM * 2.0);
            let on_circle = r
                .constraints
                .iter()
                .any(|c| (c.normal.dot(&p) - c.bound).abs() <= 1e-7);
            assert!(on_circle, "candidate not supported by any circle");
        }
        assert!(!r.arcs.is_empty());
    }
}
