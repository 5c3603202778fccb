//! Incremental 3D convex hull with coplanar-face merging.
//!
//! Desk-scale implementation: quadratic point insertion, tolerance-based
//! visibility, and a post-pass that merges coplanar triangles into polygonal
//! faces and drops collinear boundary vertices.

use nalgebra::{Point3, Unit, Vector3};

use super::GeomError;
use crate::tol::EPS_GEOM;

#[derive(Debug, Clone, Copy)]
struct Tri {
    v: [usize; 3],
    normal: Vector3<f64>, // unit, outward
    offset: f64,          // plane: <n, p> = offset
}

impl Tri {
    fn new(pts: &[Point3<f64>], a: usize, b: usize, c: usize) -> Option<Tri> {
        let n = (pts[b] - pts[a]).cross(&(pts[c] - pts[a]));
        let len = n.norm();
        if len < 1e-14 {
            return None;
        }
        let normal = n / len;
        Some(Tri {
            v: [a, b, c],
            normal,
            offset: normal.dot(&pts[a].coords),
        })
    }

    fn dist(&self, p: &Point3<f64>) -> f64 {
        self.normal.dot(&p.coords) - self.offset
    }
}

/// Triangulated hull plus merged polygonal faces.
pub(crate) struct HullStructure {
    pub vertices: Vec<Point3<f64>>,
    /// Outward-oriented vertex cycles (CCW seen from outside).
    pub faces: Vec<Vec<usize>>,
}

pub(crate) fn convex_hull(points: &[Point3<f64>]) -> Result<HullStructure, GeomError> {
    let scale = points
        .iter()
        .map(|p| p.coords.norm())
        .fold(1.0_f64, f64::max);
    let eps_merge = EPS_GEOM * scale.max(1.0);

    // Deduplicate within tolerance, keeping first occurrences.
    let mut pts: Vec<Point3<f64>> = Vec::new();
    for p in points {
        if !p.coords.iter().all(|c| c.is_finite()) {
            return Err(GeomError::DegenerateInput("non-finite coordinate".into()));
        }
        if pts.iter().all(|q| (p - q).norm() > eps_merge) {
            pts.push(*p);
        }
    }
    if pts.len() < 4 {
        return Err(GeomError::DegenerateInput(
            "need at least 4 distinct points".into(),
        ));
    }

    let simplex = initial_simplex(&pts, eps_merge)?;
    let mut tris = simplex_faces(&pts, simplex);

    let eps_vis = 1e-9 * scale.max(1.0);
    for i in 0..pts.len() {
        if simplex.contains(&i) {
            continue;
        }
        insert_point(&pts, &mut tris, i, eps_vis);
    }

    merge_faces(&pts, &tris, eps_vis)
}

fn initial_simplex(pts: &[Point3<f64>], eps: f64) -> Result<[usize; 4], GeomError> {
    // Farthest pair along x as a seed, then maximize distance to the line,
    // then to the plane.
    let mut i0 = 0;
    let mut i1 = 0;
    for (i, p) in pts.iter().enumerate() {
        if p.x < pts[i0].x {
            i0 = i;
        }
        if p.x > pts[i1].x {
            i1 = i;
        }
    }
    if i0 == i1 {
        i1 = if i0 == 0 { 1 } else { 0 };
    }
    let mut best = (pts[i1] - pts[i0]).norm();
    for (i, p) in pts.iter().enumerate() {
        let d = (p - pts[i0]).norm();
        if d > best {
            best = d;
            i1 = i;
        }
    }
    if best < eps {
        return Err(GeomError::DegenerateInput("all points coincide".into()));
    }

    let dir = (pts[i1] - pts[i0]).normalize();
    let mut i2 = usize::MAX;
    let mut best2 = eps;
    for (i, p) in pts.iter().enumerate() {
        let v = p - pts[i0];
        let d = (v - dir * v.dot(&dir)).norm();
        if d > best2 {
            best2 = d;
            i2 = i;
        }
    }
    if i2 == usize::MAX {
        return Err(GeomError::DegenerateInput("points are collinear".into()));
    }

    let n = (pts[i1] - pts[i0]).cross(&(pts[i2] - pts[i0])).normalize();
    let mut i3 = usize::MAX;
    let mut best3 = eps;
    for (i, p) in pts.iter().enumerate() {
        let d = n.dot(&(p - pts[i0])).abs();
        if d > best3 {
            best3 = d;
            i3 = i;
        }
    }
    if i3 == usize::MAX {
        return Err(GeomError::DegenerateInput("points are coplanar".into()));
    }
    Ok([i0, i1, i2, i3])
}

fn simplex_faces(pts: &[Point3<f64>], s: [usize; 4]) -> Vec<Tri> {
    let centroid = (pts[s[0]].coords + pts[s[1]].coords + pts[s[2]].coords + pts[s[3]].coords)
        / 4.0;
    let mut tris = Vec::with_capacity(4);
    for f in [
        [s[0], s[1], s[2]],
        [s[0], s[1], s[3]],
        [s[0], s[2], s[3]],
        [s[1], s[2], s[3]],
    ] {
        let mut t = Tri::new(pts, f[0], f[1], f[2]).expect("simplex face degenerate");
        if t.dist(&Point3::from(centroid)) > 0.0 {
            t = Tri::new(pts, f[0], f[2], f[1]).unwrap();
        }
        tris.push(t);
    }
    tris
}

fn insert_point(pts: &[Point3<f64>], tris: &mut Vec<Tri>, idx: usize, eps: f64) {
    let p = pts[idx];
    let strictly_outside = tris.iter().any(|t| t.dist(&p) > eps);
    if !strictly_outside {
        return;
    }
    // Visible set includes coplanar faces so that points lying in the plane
    // of an existing face (e.g. the fourth corner of a box face) still extend
    // the hull.
    let visible: Vec<bool> = tris.iter().map(|t| t.dist(&p) > -eps).collect();

    // Horizon: directed edges of visible triangles whose reverse belongs to a
    // hidden triangle.
    let mut horizon: Vec<(usize, usize)> = Vec::new();
    for (ti, t) in tris.iter().enumerate() {
        if !visible[ti] {
            continue;
        }
        for k in 0..3 {
            let a = t.v[k];
            let b = t.v[(k + 1) % 3];
            let mut shared_hidden = false;
            for (tj, u) in tris.iter().enumerate() {
                if tj == ti || visible[tj] {
                    continue;
                }
                if u.v.contains(&a) && u.v.contains(&b) {
                    shared_hidden = true;
                    break;
                }
            }
            if shared_hidden {
                horizon.push((a, b));
            }
        }
    }

    let mut next: Vec<Tri> = tris
        .iter()
        .zip(&visible)
        .filter(|(_, vis)| !**vis)
        .map(|(t, _)| *t)
        .collect();
    for (a, b) in horizon {
        if let Some(t) = Tri::new(pts, a, b, idx) {
            next.push(t);
        }
    }
    *tris = next;
}

fn merge_faces(
    pts: &[Point3<f64>],
    tris: &[Tri],
    eps: f64,
) -> Result<HullStructure, GeomError> {
    let n = tris.len();
    let mut group = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();

    let coplanar = |a: &Tri, b: &Tri| -> bool {
        a.normal.dot(&b.normal) > 1.0 - 1e-9 && (a.offset - b.offset).abs() < 10.0 * eps
    };
    let share_edge = |a: &Tri, b: &Tri| -> bool {
        a.v.iter().filter(|x| b.v.contains(x)).count() >= 2
    };

    for i in 0..n {
        if group[i] != usize::MAX {
            continue;
        }
        let gid = groups.len();
        let mut stack = vec![i];
        let mut members = Vec::new();
        group[i] = gid;
        while let Some(t) = stack.pop() {
            members.push(t);
            for j in 0..n {
                if group[j] == usize::MAX && coplanar(&tris[t], &tris[j]) && share_edge(&tris[t], &tris[j]) {
                    group[j] = gid;
                    stack.push(j);
                }
            }
        }
        groups.push(members);
    }

    // Boundary cycle of each group: directed edges used exactly once.
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for members in &groups {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &ti in members {
            let t = &tris[ti];
            for k in 0..3 {
                let e = (t.v[k], t.v[(k + 1) % 3]);
                if let Some(pos) = edges.iter().position(|&(a, b)| a == e.1 && b == e.0) {
                    edges.swap_remove(pos);
                } else {
                    edges.push(e);
                }
            }
        }
        if edges.len() < 3 {
            return Err(GeomError::DegenerateInput(
                "hull face boundary collapsed".into(),
            ));
        }
        let mut cycle = vec![edges[0].0, edges[0].1];
        edges.swap_remove(0);
        while !edges.is_empty() {
            let last = *cycle.last().unwrap();
            let pos = edges
                .iter()
                .position(|&(a, _)| a == last)
                .ok_or_else(|| GeomError::DegenerateInput("open hull face boundary".into()))?;
            let (_, b) = edges.swap_remove(pos);
            if b == cycle[0] {
                break;
            }
            cycle.push(b);
        }
        // Drop collinear run vertices (points absorbed into hull edges).
        let m = cycle.len();
        let mut kept = Vec::with_capacity(m);
        for k in 0..m {
            let prev = pts[cycle[(k + m - 1) % m]];
            let cur = pts[cycle[k]];
            let next = pts[cycle[(k + 1) % m]];
            let cr = (cur - prev).cross(&(next - cur)).norm();
            if cr > eps * (cur - prev).norm().max(eps) {
                kept.push(cycle[k]);
            }
        }
        if kept.len() < 3 {
            return Err(GeomError::DegenerateInput(
                "hull face degenerated to a segment".into(),
            ));
        }
        faces.push(kept);
    }

    // Re-index to the vertices actually on the hull.
    let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let remap: std::collections::HashMap<usize, usize> =
        used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices: Vec<Point3<f64>> = used.iter().map(|&i| pts[i]).collect();
    let faces: Vec<Vec<usize>> = faces
        .into_iter()
        .map(|f| f.into_iter().map(|i| remap[&i]).collect())
        .collect();

    Ok(HullStructure { vertices, faces })
}

/// Outward unit normal of a hull face cycle.
pub(crate) fn face_normal(vertices: &[Point3<f64>], face: &[usize]) -> Unit<Vector3<f64>> {
    // Newell's formula, robust for near-collinear leading vertices.
    let mut n = Vector3::zeros();
    for k in 0..face.len() {
        let a = vertices[face[k]].coords;
        let b = vertices[face[(k + 1) % face.len()]].coords;
        n += a.cross(&b);
    }
    Unit::new_normalize(n)
}
