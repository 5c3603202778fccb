//! Convex polytope: hull structure and the directional queries every
//! decision procedure is built on.

use nalgebra::{Point2, Point3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use super::hull3::{self, face_normal};
use super::placement::{lex_less, orthonormal_pair, Dir3, RigidPlacement};
use super::polygon::{convex_hull_2d, Polygon2};
use super::GeomError;
use crate::tol::EPS_GEOM;

/// Convex 3D body stored as hull vertices, outward-oriented polygonal faces
/// and undirected edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polytope {
    vertices: Vec<Point3<f64>>,
    faces: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

/// Cross-section of a placed polytope with the window plane `z = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum CrossSection {
    Empty,
    /// Single touching point.
    Point(Point2<f64>),
    /// Touching segment.
    Segment(Point2<f64>, Point2<f64>),
    Polygon(Polygon2),
}

impl CrossSection {
    pub fn is_empty(&self) -> bool {
        matches!(self, CrossSection::Empty)
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, CrossSection::Point(_) | CrossSection::Segment(_, _))
    }

    pub fn points(&self) -> Vec<Point2<f64>> {
        match self {
            CrossSection::Empty => Vec::new(),
            CrossSection::Point(p) => vec![*p],
            CrossSection::Segment(p, q) => vec![*p, *q],
            CrossSection::Polygon(poly) => poly.vertices().to_vec(),
        }
    }
}

/// Which coordinate plane to project onto, keeping the window axis first and
/// the vertical axis second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisPlane {
    /// (x, z) coordinates.
    Xz,
    /// (y, z) coordinates.
    Yz,
}

/// Convex hull of the input points.
///
/// Interior points are discarded; returns an error for fewer than four
/// affinely independent points.
pub fn build_polytope(points: &[Point3<f64>]) -> Result<Polytope, GeomError> {
    let hull = hull3::convex_hull(points)?;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for f in &hull.faces {
        for k in 0..f.len() {
            let a = f[k];
            let b = f[(k + 1) % f.len()];
            let e = (a.min(b), a.max(b));
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    edges.sort_unstable();
    let poly = Polytope {
        vertices: hull.vertices,
        faces: hull.faces,
        edges,
    };
    poly.validate()?;
    Ok(poly)
}

impl Polytope {
    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Euler relation, planarity, orientation and extremality checks.
    pub fn validate(&self) -> Result<(), GeomError> {
        let v = self.vertices.len();
        let e = self.edges.len();
        let f = self.faces.len();
        if v as i64 - e as i64 + f as i64 != 2 {
            return Err(GeomError::DegenerateInput(format!(
                "Euler relation violated: V={v} E={e} F={f}"
            )));
        }
        let scale = self
            .vertices
            .iter()
            .map(|p| p.coords.norm())
            .fold(1.0_f64, f64::max);
        let tol = 1e-7 * scale;
        for face in &self.faces {
            let n = face_normal(&self.vertices, face);
            let off = n.dot(&self.vertices[face[0]].coords);
            for &vi in face {
                if (n.dot(&self.vertices[vi].coords) - off).abs() > tol {
                    return Err(GeomError::DegenerateInput("non-planar face".into()));
                }
            }
            for (vi, p) in self.vertices.iter().enumerate() {
                if face.contains(&vi) {
                    continue;
                }
                if n.dot(&p.coords) - off > tol {
                    return Err(GeomError::DegenerateInput(
                        "face normal not outward".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Support interval `(min ⟨u,v⟩, max ⟨u,v⟩)` over the vertices.
    pub fn extent(&self, u: &Dir3) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &self.vertices {
            let d = u.dot(&p.coords);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        (lo, hi)
    }

    pub fn extent_width(&self, u: &Dir3) -> f64 {
        let (lo, hi) = self.extent(u);
        hi - lo
    }

    /// Minimal width over all directions, with an achieving direction.
    ///
    /// Exact over the candidate set of face normals and pairwise edge-edge
    /// cross products; the minimum width of a polytope is attained at a
    /// face-vertex or edge-edge antipodal pair.
    pub fn width3(&self) -> (f64, Dir3) {
        let mut best = f64::INFINITY;
        let mut best_dir = Unit::new_unchecked(Vector3::z());
        let mut consider = |dir: Dir3| {
            let w = self.extent_width(&dir);
            if w < best {
                best = w;
                best_dir = dir;
            }
        };
        for face in &self.faces {
            consider(face_normal(&self.vertices, face));
        }
        let dirs: Vec<Vector3<f64>> = self
            .edges
            .iter()
            .map(|&(a, b)| self.vertices[b] - self.vertices[a])
            .collect();
        for i in 0..dirs.len() {
            for j in (i + 1)..dirs.len() {
                let c = dirs[i].cross(&dirs[j]);
                let n = c.norm();
                if n > 1e-12 {
                    consider(Unit::new_unchecked(c / n));
                }
            }
        }
        (best, best_dir)
    }

    /// Canonical in-plane frame of the projection plane perpendicular to `v`:
    /// the first axis lies in the xz-plane, the second has a positive
    /// y-component. The O(1) directions parallel to the y-axis use a fixed
    /// fallback frame.
    pub fn shadow_frame(v: &Dir3) -> (Vector3<f64>, Vector3<f64>) {
        let ey = Vector3::y();
        let c = v.cross(&ey);
        if c.norm() < 1e-9 {
            let x_axis = Vector3::x();
            let y_axis = v.cross(&x_axis);
            return (x_axis, y_axis);
        }
        let mut x_axis = c.normalize();
        let mut y_axis = v.cross(&x_axis);
        if y_axis.y < 0.0 {
            x_axis = -x_axis;
            y_axis = -y_axis;
        }
        (x_axis, y_axis)
    }

    /// Shadow (orthogonal projection) onto the plane perpendicular to `v`,
    /// in the canonical in-plane frame.
    pub fn project_shadow(&self, v: &Dir3) -> Polygon2 {
        let (xa, ya) = Self::shadow_frame(v);
        let pts: Vec<Point2<f64>> = self
            .vertices
            .iter()
            .map(|p| Point2::new(p.coords.dot(&xa), p.coords.dot(&ya)))
            .collect();
        Polygon2::from_hull_points(&pts)
    }

    /// Projection onto a coordinate plane, keeping (window axis, vertical).
    pub fn project_axis_plane(&self, plane: AxisPlane) -> Polygon2 {
        let pts: Vec<Point2<f64>> = self
            .vertices
            .iter()
            .map(|p| match plane {
                AxisPlane::Xz => Point2::new(p.x, p.z),
                AxisPlane::Yz => Point2::new(p.y, p.z),
            })
            .collect();
        Polygon2::from_hull_points(&pts)
    }

    /// Cross-section of the placed polytope with the plane `z = 0`.
    pub fn cross_section_z0(&self, placement: &RigidPlacement) -> CrossSection {
        let placed: Vec<Point3<f64>> = self.vertices.iter().map(|p| placement.apply(p)).collect();
        let scale = placed
            .iter()
            .map(|p| p.coords.norm())
            .fold(1.0_f64, f64::max);
        let eps = EPS_GEOM * scale.max(1.0);

        let mut pts: Vec<Point2<f64>> = Vec::new();
        for p in &placed {
            if p.z.abs() <= eps {
                pts.push(Point2::new(p.x, p.y));
            }
        }
        for &(a, b) in &self.edges {
            let pa = placed[a];
            let pb = placed[b];
            if (pa.z > eps && pb.z < -eps) || (pa.z < -eps && pb.z > eps) {
                let t = pa.z / (pa.z - pb.z);
                pts.push(Point2::new(pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)));
            }
        }
        if pts.is_empty() {
            return CrossSection::Empty;
        }
        let hull = convex_hull_2d(&pts, eps);
        match hull.len() {
            1 => CrossSection::Point(hull[0]),
            2 => CrossSection::Segment(hull[0], hull[1]),
            _ => CrossSection::Polygon(Polygon2::from_ccw_unchecked(hull)),
        }
    }

    /// Apply a rigid placement to every vertex, keeping the combinatorics.
    pub fn transformed(&self, placement: &RigidPlacement) -> Polytope {
        Polytope {
            vertices: self.vertices.iter().map(|p| placement.apply(p)).collect(),
            faces: self.faces.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Sum of face areas.
    pub fn surface_area(&self) -> f64 {
        let mut total = 0.0;
        for face in &self.faces {
            let o = self.vertices[face[0]];
            let mut a = Vector3::zeros();
            for k in 1..face.len() - 1 {
                a += (self.vertices[face[k]] - o).cross(&(self.vertices[face[k + 1]] - o));
            }
            total += a.norm() / 2.0;
        }
        total
    }

    /// Lexicographically smallest vertex (deterministic reference point).
    pub fn reference_vertex(&self) -> Point3<f64> {
        let mut best = self.vertices[0];
        for p in &self.vertices[1..] {
            if lex_less(&p.coords, &best.coords) {
                best = *p;
            }
        }
        best
    }

    /// Unit directions of the vertex-difference segments, deduplicated up to
    /// sign, each with the longest segment length realizing it.
    pub fn segment_directions(&self) -> Vec<(Dir3, f64)> {
        let mut out: Vec<(Dir3, f64)> = Vec::new();
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                let d = self.vertices[j] - self.vertices[i];
                let len = d.norm();
                if len < 1e-12 {
                    continue;
                }
                let dir = super::placement::lex_canonical_sign(&Unit::new_unchecked(d / len));
                match out
                    .iter_mut()
                    .find(|(u, _)| u.dot(&dir).abs() > 1.0 - 1e-12)
                {
                    Some((_, l)) => *l = l.max(len),
                    None => out.push((dir, len)),
                }
            }
        }
        out
    }

    pub fn face_normals(&self) -> Vec<Dir3> {
        self.faces
            .iter()
            .map(|f| face_normal(&self.vertices, f))
            .collect()
    }
}

/// Unit-edge regular tetrahedron in symmetric coordinates.
///
/// Vertex order is the labeling used by the circular-window analysis.
pub fn regular_tetrahedron_vertices() -> [Point3<f64>; 4] {
    let s = 1.0 / (2.0 * 2.0_f64.sqrt());
    [
        Point3::new(s, s, s),
        Point3::new(s, -s, -s),
        Point3::new(-s, s, -s),
        Point3::new(-s, -s, s),
    ]
}

pub fn regular_tetrahedron() -> Polytope {
    build_polytope(&regular_tetrahedron_vertices()).expect("regular tetrahedron is non-degenerate")
}

/// Axis-aligned box `[0,a]×[0,b]×[0,c]`.
pub fn box_polytope(a: f64, b: f64, c: f64) -> Result<Polytope, GeomError> {
    let mut pts = Vec::with_capacity(8);
    for &x in &[0.0, a] {
        for &y in &[0.0, b] {
            for &z in &[0.0, c] {
                pts.push(Point3::new(x, y, z));
            }
        }
    }
    build_polytope(&pts)
}

/// Fibonacci sphere sampling of directions.
pub fn fibonacci_directions(n: usize) -> Vec<Dir3> {
    let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
            Unit::new_normalize(Vector3::new(r * phi.cos(), r * phi.sin(), z))
        })
        .collect()
}

/// Local maximizer/minimizer refinement on the sphere: compass search in the
/// tangent plane with shrinking step.
pub fn refine_on_sphere<F: Fn(&Dir3) -> f64>(
    f: &F,
    start: Dir3,
    initial_step: f64,
    stop: f64,
    maximize: bool,
) -> (Dir3, f64) {
    let mut dir = start;
    let mut val = f(&dir);
    let mut step = initial_step;
    while step > stop {
        let (p, q) = orthonormal_pair(&dir);
        let mut improved = false;
        for cand in [
            Unit::new_normalize(dir.into_inner() + p.into_inner() * step),
            Unit::new_normalize(dir.into_inner() - p.into_inner() * step),
            Unit::new_normalize(dir.into_inner() + q.into_inner() * step),
            Unit::new_normalize(dir.into_inner() - q.into_inner() * step),
        ] {
            let v = f(&cand);
            if (maximize && v > val) || (!maximize && v < val) {
                val = v;
                dir = cand;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (dir, val)
}
