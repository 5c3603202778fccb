//! Convex planar polygons and the caliper-style queries on them.

use nalgebra::{Point2, Unit, Vector2};
use serde::{Deserialize, Serialize};

use super::placement::Dir2;
use super::GeomError;
use crate::tol::EPS_GEOM;

use std::f64::consts::PI;

/// Strictly convex polygon, CCW vertex cycle, collinear runs merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon2 {
    vertices: Vec<Point2<f64>>,
}

fn cross(o: &Point2<f64>, a: &Point2<f64>, b: &Point2<f64>) -> f64 {
    (a - o).perp(&(b - o))
}

/// Monotone-chain convex hull; collinear points within `eps` are dropped.
/// Returns 1 or 2 points for degenerate input sets.
pub fn convex_hull_2d(points: &[Point2<f64>], eps: f64) -> Vec<Point2<f64>> {
    let mut pts: Vec<Point2<f64>> = Vec::new();
    for p in points {
        if pts.iter().all(|q| (p - q).norm() > eps) {
            pts.push(*p);
        }
    }
    if pts.len() <= 2 {
        return pts;
    }
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    let mut lower: Vec<Point2<f64>> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], &p) <= eps
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2<f64>> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], &p) <= eps
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() <= 2 {
        // Collinear input collapsed; report the extreme pair.
        return lower;
    }
    lower
}

impl Polygon2 {
    /// Validate an explicit CCW vertex cycle.
    pub fn new(vertices: Vec<Point2<f64>>) -> Result<Polygon2, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::DegenerateInput(
                "polygon needs at least 3 vertices".into(),
            ));
        }
        let n = vertices.len();
        for i in 0..n {
            let c = cross(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if c <= EPS_GEOM {
                return Err(GeomError::DegenerateInput(
                    "polygon is not strictly convex CCW".into(),
                ));
            }
        }
        Ok(Polygon2 { vertices })
    }

    /// Convex hull of a point set; errors if it degenerates below dimension 2.
    pub fn from_hull_points(points: &[Point2<f64>]) -> Polygon2 {
        let scale = points.iter().map(|p| p.coords.norm()).fold(1.0_f64, f64::max);
        let hull = convex_hull_2d(points, EPS_GEOM * scale);
        Polygon2 { vertices: hull }
    }

    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2<f64>>) -> Polygon2 {
        Polygon2 { vertices }
    }

    pub fn vertices(&self) -> &[Point2<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True when the hull collapsed to a point or segment.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let mut a = 0.0;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            a += p.x * q.y - q.x * p.y;
        }
        a / 2.0
    }

    pub fn support(&self, u: &Vector2<f64>) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.coords.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn extent(&self, u: &Vector2<f64>) -> f64 {
        self.support(u) + self.support(&-u)
    }

    /// Minimal distance between parallel supporting lines, with the
    /// achieving normal direction (edge-vertex antipodal pairs).
    pub fn width2(&self) -> (f64, Dir2) {
        width_of_points(&self.vertices)
    }

    /// Rotation angle θ whose axis-aligned bounding box of the rotated
    /// polygon fits in `a×b` (closed comparison), if any.
    pub fn fits_in_rect(&self, a: f64, b: f64) -> Option<f64> {
        fit_points_in_rect(&self.vertices, a, b, EPS_GEOM)
    }

    /// Minimal window-axis intercept over all slabs containing the polygon;
    /// coordinates are (window axis, vertical).
    pub fn min_xslab(&self) -> XSlab {
        min_xslab_points(&self.vertices)
    }

    pub fn contains(&self, p: &Point2<f64>, tol: f64) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            (b - a).perp(&(p - a)) >= -tol * (b - a).norm()
        })
    }
}

/// Minimal width of a point set with achieving direction.
pub fn width_of_points(pts: &[Point2<f64>]) -> (f64, Dir2) {
    if pts.len() < 2 {
        return (0.0, Unit::new_unchecked(Vector2::x()));
    }
    let hull = convex_hull_2d(pts, 1e-12);
    if hull.len() == 1 {
        return (0.0, Unit::new_unchecked(Vector2::x()));
    }
    if hull.len() == 2 {
        let d = hull[1] - hull[0];
        let n = Unit::new_normalize(Vector2::new(-d.y, d.x));
        return (0.0, n);
    }
    let n = hull.len();
    let mut best = f64::INFINITY;
    let mut best_dir = Unit::new_unchecked(Vector2::x());
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        if len < 1e-15 {
            continue;
        }
        let normal = Vector2::new(-e.y, e.x) / len;
        let h = hull
            .iter()
            .map(|p| normal.dot(&(p - a)))
            .fold(f64::NEG_INFINITY, f64::max);
        if h < best {
            best = h;
            best_dir = Unit::new_unchecked(normal);
        }
    }
    (best, best_dir)
}

fn support_pair(pts: &[Point2<f64>], u: &Vector2<f64>) -> Vector2<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut plo = pts[0];
    let mut phi = pts[0];
    for p in pts {
        let d = p.coords.dot(u);
        if d < lo {
            lo = d;
            plo = *p;
        }
        if d > hi {
            hi = d;
            phi = *p;
        }
    }
    phi - plo
}

/// Angles (mod π) at which an extent sinusoid can change its achieving
/// antipodal pair: hull edge normals.
fn caliper_events(pts: &[Point2<f64>]) -> Vec<f64> {
    let hull = convex_hull_2d(pts, 1e-12);
    let n = hull.len();
    let mut ev = Vec::new();
    if n >= 2 {
        for i in 0..n {
            let a = hull[i];
            let b = hull[(i + 1) % n.max(2)];
            if n == 2 && i == 1 {
                break;
            }
            let e = b - a;
            if e.norm() < 1e-15 {
                continue;
            }
            let ang = e.y.atan2(e.x).rem_euclid(PI);
            ev.push(ang);
        }
    }
    ev
}

/// Solve `R·cos(θ−φ) ≤ bound` on the circle; result is `None` for the empty
/// set, `Some(None)` for all θ, `Some(Some((lo,hi)))` for the closed arc
/// `[lo, hi]` (length < 2π, not wrapped).
type ArcSolution = Option<Option<(f64, f64)>>;

fn solve_sinusoid_leq(big_r: f64, phi: f64, bound: f64) -> ArcSolution {
    if big_r <= bound {
        return Some(None);
    }
    if bound <= -big_r {
        return None;
    }
    let delta = (bound / big_r).clamp(-1.0, 1.0).acos();
    Some(Some((phi + delta, phi + 2.0 * PI - delta)))
}

fn interval_intersect(
    intervals: &[(f64, f64)],
    arc: Option<(f64, f64)>,
) -> Vec<(f64, f64)> {
    let Some((lo, hi)) = arc else {
        return intervals.to_vec();
    };
    let mut out = Vec::new();
    for &(s, e) in intervals {
        // Shift the arc by multiples of 2π to overlap [s, e].
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

/// Feasible rotation for fitting a point set into an `a×b` rectangle: the
/// axis-aligned bounding box of the point set rotated by the returned angle
/// fits (closed comparison).
///
/// Each bounding-box dimension is a single sinusoid of θ between caliper
/// events, so the feasibility set is computed exactly per event interval.
/// Internally extents are measured along rotated axes, which corresponds to
/// rotating the points the opposite way; the sign is flipped on return.
pub fn fit_points_in_rect(pts: &[Point2<f64>], a: f64, b: f64, eps: f64) -> Option<f64> {
    if pts.is_empty() {
        return Some(0.0);
    }
    if pts.len() == 1 {
        return Some(0.0);
    }
    let mut events: Vec<f64> = caliper_events(pts)
        .into_iter()
        .flat_map(|e| [e, (e + PI / 2.0).rem_euclid(PI)])
        .collect();
    events.push(0.0);
    events.sort_by(|x, y| x.partial_cmp(y).unwrap());
    events.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    events.push(events[0] + PI);

    for w in events.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 < 1e-13 {
            continue;
        }
        let tm = (t0 + t1) / 2.0;
        let u = Vector2::new(tm.cos(), tm.sin());
        let v = Vector2::new(-tm.sin(), tm.cos());
        let dw = support_pair(pts, &u);
        let dh = support_pair(pts, &v);
        // extent along u(θ) = |dw| cos(θ − φw) on this interval.
        let (rw, pw) = (dw.norm(), dw.y.atan2(dw.x));
        let (rh, ph) = (dh.norm(), dh.y.atan2(dh.x));
        let sol_w = solve_sinusoid_leq(rw, pw, a + eps);
        let sol_h = solve_sinusoid_leq(rh, ph - PI / 2.0, b + eps);
        let (Some(aw), Some(ah)) = (sol_w, sol_h) else {
            continue;
        };
        let mut feas = vec![(t0, t1)];
        feas = interval_intersect(&feas, aw);
        feas = interval_intersect(&feas, ah);
        if let Some(&(lo, _)) = feas.first() {
            return Some((-lo).rem_euclid(PI));
        }
    }
    None
}

/// Feasible rotation for the `a×b` bounding-box fit restricted to the raw
/// angle interval `[lo, hi]`; `None` bounds are unconstrained. Returns the
/// midpoint of the widest feasible subinterval.
pub fn fit_angle_in_interval(
    pts: &[Point2<f64>],
    a: Option<f64>,
    b: Option<f64>,
    lo: f64,
    hi: f64,
    eps: f64,
) -> Option<f64> {
    if pts.len() <= 1 {
        return Some((lo + hi) / 2.0);
    }
    // Breakpoints: caliper events (π-periodic) shifted into [lo, hi].
    let mut breaks = vec![lo, hi];
    for e in caliper_events(pts)
        .into_iter()
        .flat_map(|e| [e, (e + PI / 2.0).rem_euclid(PI)])
    {
        let mut k = ((lo - e) / PI).floor();
        loop {
            let t = e + k * PI;
            if t > hi {
                break;
            }
            if t >= lo {
                breaks.push(t);
            }
            k += 1.0;
        }
    }
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-12);

    let mut best: Option<(f64, f64)> = None;
    for w in breaks.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 < 1e-13 {
            continue;
        }
        let tm = (t0 + t1) / 2.0;
        let u = Vector2::new(tm.cos(), tm.sin());
        let v = Vector2::new(-tm.sin(), tm.cos());
        let mut feas = vec![(t0, t1)];
        if let Some(a) = a {
            let dw = support_pair(pts, &u);
            let (rw, pw) = (dw.norm(), dw.y.atan2(dw.x));
            match solve_sinusoid_leq(rw, pw, a + eps) {
                None => continue,
                Some(None) => {}
                Some(Some(arc)) => feas = interval_intersect(&feas, Some(arc)),
            }
        }
        if let Some(b) = b {
            let dh = support_pair(pts, &v);
            let (rh, ph) = (dh.norm(), dh.y.atan2(dh.x));
            match solve_sinusoid_leq(rh, ph - PI / 2.0, b + eps) {
                None => continue,
                Some(None) => {}
                Some(Some(arc)) => feas = interval_intersect(&feas, Some(arc)),
            }
        }
        for (s, e) in feas {
            if best.map(|(bs, be)| e - s > be - bs).unwrap_or(true) {
                best = Some((s, e));
            }
        }
    }
    best.map(|(s, e)| (s + e) / 2.0)
}

/// Slab through the window axis: minimal axis-intercept length.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct XSlab {
    /// Length of the slab's intersection with the horizontal axis.
    pub ratio: f64,
    /// Angle of the slab boundary lines, in (0, π).
    pub theta: f64,
    /// Slab plane offsets: `⟨p, n(θ)⟩ ∈ [lo, hi]` with `n = (−sinθ, cosθ)`.
    pub lo: f64,
    pub hi: f64,
}

/// Minimize `extent(n(θ)) / sin θ` over slab angles θ ∈ (0, π).
///
/// Within a caliper interval the derivative of `cos(θ−φ)/sin θ` has constant
/// sign, so only event angles need evaluation.
pub fn min_xslab_points(pts: &[Point2<f64>]) -> XSlab {
    let mut events = caliper_events(pts);
    events.push(PI / 2.0);
    let mut best = XSlab {
        ratio: f64::INFINITY,
        theta: PI / 2.0,
        lo: 0.0,
        hi: 0.0,
    };
    for theta in events {
        if theta <= 1e-9 || theta >= PI - 1e-9 {
            continue;
        }
        let n = Vector2::new(-theta.sin(), theta.cos());
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in pts {
            let d = p.coords.dot(&n);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        let ratio = (hi - lo) / theta.sin();
        if ratio < best.ratio {
            best = XSlab {
                ratio,
                theta,
                lo,
                hi,
            };
        }
    }
    best
}
