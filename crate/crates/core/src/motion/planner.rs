//! Demonstration planner over the 2-DOF motion class: vertical translation
//! plus rotation about a vertical axis, with the in-plane shift resolved per
//! cell by centering. A grid path is a certificate of feasibility; absence
//! of one is not a proof of infeasibility.
//!
//! Each grid cell covers a whole rotation interval and is free when some
//! angle in the interval fits; the feasible set pinches to isolated angles
//! at touching depths, so point-sampled cells would always miss it. Cell
//! transitions are refined recursively until the decoupled rotate/translate
//! legs stay feasible.

use nalgebra::{Matrix2, Point2, Point3, Rotation3, Unit, Vector2, Vector3};

use crate::geom::{enclosing_disc, fit_angle_in_interval, Polytope};
use crate::tol::EPS_GEOM;

use super::{MotionPath, Stage, WindowSpec};

use std::collections::VecDeque;
use std::f64::consts::TAU;

/// Best in-plane translation for the θ-rotated section: the placement
/// minimizing the window violation, with that violation (0 when it fits).
fn best_translation(
    section: &[Point2<f64>],
    theta: f64,
    window: &WindowSpec,
) -> (Vector2<f64>, f64) {
    if section.is_empty() {
        return (Vector2::zeros(), 0.0);
    }
    let rot = nalgebra::Rotation2::new(theta);
    let pts: Vec<Point2<f64>> = section.iter().map(|p| rot * p).collect();
    let bbox = |pts: &[Point2<f64>]| {
        let mut lo = Vector2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vector2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    };
    match window {
        WindowSpec::Rect { a, b } => {
            let (lo, hi) = bbox(&pts);
            let t = Vector2::new(
                (a - (hi.x - lo.x)) / 2.0 - lo.x,
                (b - (hi.y - lo.y)) / 2.0 - lo.y,
            );
            let v = ((hi.x - lo.x - a) / 2.0).max((hi.y - lo.y - b) / 2.0).max(0.0);
            (t, v)
        }
        WindowSpec::Gate { a } => {
            let (lo, hi) = bbox(&pts);
            let t = Vector2::new((a - (hi.x - lo.x)) / 2.0 - lo.x, 0.0);
            (t, ((hi.x - lo.x - a) / 2.0).max(0.0))
        }
        WindowSpec::Circle { d } => {
            let disc = enclosing_disc(&pts);
            (-disc.center.coords, (disc.radius - d / 2.0).max(0.0))
        }
        WindowSpec::ConvexPolygon { vertices } => {
            let vs = vertices.vertices();
            let n = vs.len();
            let mut region: Vec<Point2<f64>> = {
                let (lo, hi) = bbox(vs);
                let pad = 1.0 + (hi - lo).norm();
                vec![
                    Point2::new(lo.x - pad, lo.y - pad),
                    Point2::new(hi.x + pad, lo.y - pad),
                    Point2::new(hi.x + pad, hi.y + pad),
                    Point2::new(lo.x - pad, hi.y + pad),
                ]
            };
            for i in 0..n {
                let a = vs[i];
                let b = vs[(i + 1) % n];
                let e = b - a;
                let len = e.norm();
                if len < 1e-15 {
                    continue;
                }
                let inward = Vector2::new(-e.y, e.x) / len;
                let support = pts
                    .iter()
                    .map(|p| -inward.dot(&p.coords))
                    .fold(f64::NEG_INFINITY, f64::max);
                let offset = a.coords.dot(&inward) + support;
                region = clip_halfplane(&region, &inward, offset - EPS_GEOM);
                if region.is_empty() {
                    break;
                }
            }
            if region.is_empty() {
                // No exact fit: center the section's disc on the window's.
                let wc = vs
                    .iter()
                    .fold(Vector2::zeros(), |acc, p| acc + p.coords)
                    / n as f64;
                let sc = enclosing_disc(&pts).center.coords;
                let t = wc - sc;
                let mut v: f64 = 0.0;
                for p in &pts {
                    v = v.max(window.violation(&Point2::from(p.coords + t)));
                }
                (t, v)
            } else {
                let c = region
                    .iter()
                    .fold(Vector2::zeros(), |acc, p| acc + p.coords)
                    / region.len() as f64;
                (c, 0.0)
            }
        }
    }
}

fn fit_translation(
    section: &[Point2<f64>],
    theta: f64,
    window: &WindowSpec,
) -> Option<Vector2<f64>> {
    let (t, v) = best_translation(section, theta, window);
    (v <= EPS_GEOM).then_some(t)
}

/// A feasible angle within `[lo, hi]` for the section, preferring maximal
/// angular slack.
fn fit_angle(
    section: &[Point2<f64>],
    window: &WindowSpec,
    lo: f64,
    hi: f64,
) -> Option<f64> {
    if section.is_empty() {
        return Some((lo + hi) / 2.0);
    }
    // fit_angle_in_interval works in the rotated-axes convention, the
    // mirror image of rotating the section; flip signs both ways.
    match window {
        WindowSpec::Rect { a, b } => {
            fit_angle_in_interval(section, Some(*a), Some(*b), -hi, -lo, EPS_GEOM).map(|t| -t)
        }
        WindowSpec::Gate { a } => {
            fit_angle_in_interval(section, Some(*a), None, -hi, -lo, EPS_GEOM).map(|t| -t)
        }
        WindowSpec::Circle { .. } => {
            let mid = (lo + hi) / 2.0;
            fit_translation(section, mid, window).map(|_| mid)
        }
        WindowSpec::ConvexPolygon { .. } => {
            let mid = (lo + hi) / 2.0;
            fit_translation(section, mid, window).map(|_| mid)
        }
    }
}

fn clip_halfplane(poly: &[Point2<f64>], n: &Vector2<f64>, offset: f64) -> Vec<Point2<f64>> {
    let mut out = Vec::new();
    let m = poly.len();
    for i in 0..m {
        let cur = poly[i];
        let nxt = poly[(i + 1) % m];
        let dc = cur.coords.dot(n) - offset;
        let dn = nxt.coords.dot(n) - offset;
        if dc >= 0.0 {
            out.push(cur);
        }
        if (dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0) {
            let t = dc / (dc - dn);
            out.push(cur + (nxt - cur) * t);
        }
    }
    out
}

/// Horizontal cross-section of the body at height `z`, as a point set.
fn section_at(poly: &Polytope, z: f64) -> Vec<Point2<f64>> {
    let scale = poly
        .vertices()
        .iter()
        .map(|p| p.coords.norm())
        .fold(1.0_f64, f64::max);
    let eps = EPS_GEOM * scale;
    let mut pts = Vec::new();
    for p in poly.vertices() {
        if (p.z - z).abs() <= eps {
            pts.push(Point2::new(p.x, p.y));
        }
    }
    for &(a, b) in poly.edges() {
        let pa = poly.vertices()[a];
        let pb = poly.vertices()[b];
        if (pa.z - z > eps && pb.z - z < -eps) || (pa.z - z < -eps && pb.z - z > eps) {
            let t = (pa.z - z) / (pa.z - pb.z);
            pts.push(Point2::new(
                pa.x + t * (pb.x - pa.x),
                pa.y + t * (pb.y - pa.y),
            ));
        }
    }
    pts
}

struct Stitcher<'a> {
    poly: &'a Polytope,
    window: &'a WindowSpec,
    /// Vertex heights: the only breakpoints of the piecewise-linear section
    /// support functions.
    kinks: Vec<f64>,
    /// Body size scale, bounding micro-leg spans for sampled emission.
    tiny_scale: f64,
    /// Mid-height of the body, used to aim rotations at the body-side angle
    /// when splitting inside the empty half-spaces.
    body_mid: f64,
    stages: Vec<Stage>,
}

impl<'a> Stitcher<'a> {
    fn new(poly: &'a Polytope, window: &'a WindowSpec) -> Stitcher<'a> {
        let mut kinks: Vec<f64> = poly.vertices().iter().map(|p| p.z).collect();
        kinks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        kinks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let scale = poly
            .vertices()
            .iter()
            .map(|p| p.coords.norm())
            .fold(1.0_f64, f64::max);
        let body_mid = (kinks[0] + kinks[kinks.len() - 1]) / 2.0;
        Stitcher {
            poly,
            window,
            kinks,
            tiny_scale: scale,
            body_mid,
            stages: Vec::new(),
        }
    }

    fn fits(&self, z: f64, theta: f64) -> bool {
        fit_translation(&section_at(self.poly, z), theta, self.window).is_some()
    }

    /// Configuration for (height, angle): the body is lowered so the window
    /// plane cuts it at `z`, spun by `theta`, recentered by the least-
    /// violating placement (exact fit whenever one exists).
    fn config(&self, z: f64, theta: f64) -> (Rotation3<f64>, Vector3<f64>) {
        let (t, _) = best_translation(&section_at(self.poly, z), theta, self.window);
        let rot = Rotation3::from_axis_angle(&Unit::new_unchecked(Vector3::z()), theta);
        (rot, Vector3::new(t.x, t.y, -z))
    }

    /// Worst sampled window violation over a candidate stage list.
    fn sampled_violation(&self, stages: &[Stage]) -> f64 {
        let mut worst: f64 = 0.0;
        for stage in stages {
            for k in 0..=16 {
                let placement = stage.at(k as f64 / 16.0);
                let section = self.poly.cross_section_z0(&placement);
                for p in section.points() {
                    worst = worst.max(self.window.violation(&p));
                }
            }
        }
        worst
    }

    /// Build the [rotate at z0, drop] pair and accept it when its sampled
    /// violation stays well under the validation slack.
    fn try_micro_emit(&mut self, z0: f64, th0: f64, z1: f64, th1: f64) -> bool {
        let before = self.stages.len();
        self.push_rotate(z0, th0, th1);
        self.push_drop(z0, z1, th1);
        let candidate: Vec<Stage> = self.stages.drain(before..).collect();
        if self.sampled_violation(&candidate) <= 0.5 * EPS_GEOM {
            self.stages.extend(candidate);
            true
        } else {
            false
        }
    }

    fn push_rotate(&mut self, z: f64, th0: f64, th1: f64) {
        if (th1 - th0).abs() < 1e-15 {
            return;
        }
        let (r0, t0) = self.config(z, th0);
        let (_, t1) = self.config(z, th1);
        let dth = th1 - th0;
        let r2 = nalgebra::Rotation2::new(dth);
        let m = Matrix2::identity() - r2.matrix();
        let rhs = Vector2::new(t1.x, t1.y) - r2 * Vector2::new(t0.x, t0.y);
        let q = m
            .try_inverse()
            .map(|inv| inv * rhs)
            .unwrap_or_else(Vector2::zeros);
        self.stages.push(Stage::RotateAboutAxis {
            axis_point: Point3::new(q.x, q.y, 0.0),
            axis_dir: Unit::new_unchecked(Vector3::z()),
            angle_from: 0.0,
            angle_to: dth,
            base: crate::geom::RigidPlacement::new(r0, t0),
        });
    }

    fn push_translate(&mut self, z0: f64, z1: f64, theta: f64) {
        let (r, t0) = self.config(z0, theta);
        let (_, t1) = self.config(z1, theta);
        self.stages.push(Stage::Translate {
            rotation: r,
            from: t0,
            to: t1,
        });
    }

    /// Drop split at interior vertex levels: between breakpoints the fit
    /// regions vary linearly in z, so interpolating the endpoint fits stays
    /// feasible; across a breakpoint the region can jump, so the waypoint
    /// pins the exact fit there.
    fn push_drop(&mut self, z0: f64, z1: f64, theta: f64) {
        let (lo, hi) = (z0.min(z1), z0.max(z1));
        let mut inner: Vec<f64> = self
            .kinks
            .iter()
            .copied()
            .filter(|&k| k > lo + 1e-15 && k < hi - 1e-15)
            .collect();
        if z1 < z0 {
            inner.reverse();
        }
        let mut prev = z0;
        for k in inner {
            self.push_translate(prev, k, theta);
            prev = k;
        }
        self.push_translate(prev, z1, theta);
    }

    /// Rotation at a fixed height, bisected until every emitted sweep has a
    /// verified midpoint.
    fn rotate_refined(&mut self, z: f64, th0: f64, th1: f64, depth: usize) -> Option<()> {
        if (th1 - th0).abs() < 1e-15 {
            return Some(());
        }
        if (th1 - th0).abs() <= 1e-9 {
            self.push_rotate(z, th0, th1);
            return Some(());
        }
        let thm = (th0 + th1) / 2.0;
        if !self.fits(z, thm) {
            return None;
        }
        if (th1 - th0).abs() <= 2e-2 || depth == 0 {
            self.push_rotate(z, th0, th1);
            return Some(());
        }
        self.rotate_refined(z, th0, thm, depth - 1)?;
        self.rotate_refined(z, thm, th1, depth - 1)
    }

    /// Breakpoints of the drop `[z0, z1]` all fit at angle `th`.
    fn drop_ok(&self, z0: f64, z1: f64, th: f64) -> bool {
        let (lo, hi) = (z0.min(z1), z0.max(z1));
        self.kinks
            .iter()
            .filter(|&&k| k > lo + 1e-15 && k < hi - 1e-15)
            .all(|&k| self.fits(k, th))
    }

    /// Exact feasibility of [rotate at z0 to th1, then drop to z1 at th1].
    fn leg_rotate_first(&self, z0: f64, th0: f64, z1: f64, th1: f64) -> bool {
        let thm = (th0 + th1) / 2.0;
        self.fits(z0, thm)
            && self.fits(z0, th1)
            && self.fits(z1, th1)
            && self.drop_ok(z0, z1, th1)
    }

    /// Exact feasibility of [drop to z1 at th0, then rotate to th1 at z1].
    fn leg_drop_first(&self, z0: f64, th0: f64, z1: f64, th1: f64) -> bool {
        let thm = (th0 + th1) / 2.0;
        self.fits(z1, th0)
            && self.drop_ok(z0, z1, th0)
            && self.fits(z1, thm)
            && self.fits(z1, th1)
    }

    /// Move from (z0, th0) to (z1, th1), splitting until each leg is exactly
    /// feasible or below the micro-leg scale.
    fn transition(
        &mut self,
        z0: f64,
        th0: f64,
        z1: f64,
        th1: f64,
        lo: f64,
        hi: f64,
        depth: usize,
    ) -> Option<()> {
        if self.leg_rotate_first(z0, th0, z1, th1) {
            self.rotate_refined(z0, th0, th1, 8)?;
            self.push_drop(z0, z1, th1);
            return Some(());
        }
        if self.leg_drop_first(z0, th0, z1, th1) {
            self.push_drop(z0, z1, th0);
            self.rotate_refined(z1, th0, th1, 8)?;
            return Some(());
        }
        let span_small =
            (z1 - z0).abs() <= 1e-3 * self.tiny_scale && (th1 - th0).abs() <= 1e-3;
        if span_small && self.try_micro_emit(z0, th0, z1, th1) {
            return Some(());
        }
        if depth == 0 {
            return None;
        }
        let zm = (z0 + z1) / 2.0;
        let secm = section_at(self.poly, zm);
        // In the empty half-spaces any angle is free; aim at the body-side
        // target so rotations settle well clear of the touching heights.
        let thm = if secm.is_empty() {
            if (self.body_mid - zm) * (z1 - zm) > 0.0 {
                th1
            } else {
                th0
            }
        } else {
            let Some(t) = fit_angle(&secm, self.window, lo, hi) else {
                if std::env::var("PLANNER_DEBUG").is_ok() {
                    eprintln!("no angle at zm={zm:.6e} in [{lo:.4},{hi:.4}]");
                }
                return None;
            };
            t
        };
        self.transition(z0, th0, zm, thm, lo, hi, depth - 1)?;
        self.transition(zm, thm, z1, th1, lo, hi, depth - 1)
    }
}

/// Breadth-first search over the (crossing depth, z-rotation) grid; emits a
/// stitched motion through free cells, or `None` when no grid path exists.
pub fn planner_2dof(
    poly: &Polytope,
    window: &WindowSpec,
    z_steps: usize,
    theta_steps: usize,
) -> Option<MotionPath> {
    assert!(z_steps >= 8 && theta_steps >= 8, "grid sizes must be ≥ 8");
    let (zlo, zhi) = poly.extent(&Unit::new_unchecked(Vector3::z()));
    let margin = 0.25 * (zhi - zlo).max(1.0);
    // The window plane cuts the body at height z_levels[i]; the crossing
    // starts below the body (everything above the window) and ends above it.
    let z_levels: Vec<f64> = (0..z_steps)
        .map(|i| zlo - margin + (zhi - zlo + 2.0 * margin) * i as f64 / (z_steps - 1) as f64)
        .collect();
    let theta_cells: Vec<(f64, f64)> = (0..theta_steps)
        .map(|j| {
            (
                TAU * j as f64 / theta_steps as f64,
                TAU * (j + 1) as f64 / theta_steps as f64,
            )
        })
        .collect();

    let sections: Vec<Vec<Point2<f64>>> = z_levels.iter().map(|&z| section_at(poly, z)).collect();

    // Representative feasible angle per cell, if any.
    let mut reps: Vec<Vec<Option<f64>>> = Vec::with_capacity(z_steps);
    for sec in &sections {
        reps.push(
            theta_cells
                .iter()
                .map(|&(lo, hi)| fit_angle(sec, window, lo, hi))
                .collect(),
        );
    }

    let idx = |i: usize, j: usize| i * theta_steps + j;
    let mut prev: Vec<Option<usize>> = vec![None; z_steps * theta_steps];
    let mut seen = vec![false; z_steps * theta_steps];
    let mut queue = VecDeque::new();
    for j in 0..theta_steps {
        if reps[0][j].is_some() {
            seen[idx(0, j)] = true;
            queue.push_back((0usize, j));
        }
    }
    let mut goal: Option<(usize, usize)> = None;
    while let Some((i, j)) = queue.pop_front() {
        if i == z_steps - 1 {
            goal = Some((i, j));
            break;
        }
        let mut neighbors: Vec<(usize, usize)> = Vec::with_capacity(4);
        if i + 1 < z_steps {
            neighbors.push((i + 1, j));
        }
        if i > 0 {
            neighbors.push((i - 1, j));
        }
        neighbors.push((i, (j + 1) % theta_steps));
        neighbors.push((i, (j + theta_steps - 1) % theta_steps));
        for (ni, nj) in neighbors {
            if seen[idx(ni, nj)] || reps[ni][nj].is_none() {
                continue;
            }
            seen[idx(ni, nj)] = true;
            prev[idx(ni, nj)] = Some(idx(i, j));
            queue.push_back((ni, nj));
        }
    }
    let (gi, gj) = goal?;

    let mut cells: Vec<(usize, usize)> = Vec::new();
    let mut cur = idx(gi, gj);
    loop {
        cells.push((cur / theta_steps, cur % theta_steps));
        match prev[cur] {
            Some(p) => cur = p,
            None => break,
        }
    }
    cells.reverse();

    let mut stitcher = Stitcher::new(poly, window);
    for w in cells.windows(2) {
        let (i0, j0) = w[0];
        let (i1, j1) = w[1];
        let th0 = reps[i0][j0].expect("path cell is free");
        let th1 = reps[i1][j1].expect("path cell is free");
        if i0 == i1 {
            // In-row rotation between adjacent cells, the short way around.
            let mut t1n = th1;
            while t1n - th0 > TAU / 2.0 {
                t1n -= TAU;
            }
            while t1n - th0 < -TAU / 2.0 {
                t1n += TAU;
            }
            stitcher.rotate_refined(z_levels[i0], th0, t1n, 24)?;
        } else {
            let (lo, hi) = theta_cells[j0];
            stitcher.transition(z_levels[i0], th0, z_levels[i1], th1, lo, hi, 44)?;
        }
    }
    if stitcher.stages.is_empty() {
        return None;
    }
    Some(MotionPath {
        stages: stitcher.stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::box_polytope;
    use crate::motion::{must_rotate_tetrahedron, validate_path, MUST_ROTATE_WINDOW_SIDE};

    #[test]
    fn cube_straight_path_through_loose_window() {
        let c = box_polytope(1.0, 1.0, 1.0).unwrap();
        let w = WindowSpec::Rect { a: 1.01, b: 1.01 };
        let path = planner_2dof(&c, &w, 16, 8).expect("path");
        let report = validate_path(&c, &path, &w, 64, 1e-9);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn cube_blocked_by_narrow_window() {
        let c = box_polytope(1.0, 1.0, 1.0).unwrap();
        let w = WindowSpec::Rect { a: 0.9, b: 0.9 };
        assert!(planner_2dof(&c, &w, 16, 16).is_none());
    }

    #[test]
    fn rotating_tetrahedron_path_found_and_validates() {
        let k = must_rotate_tetrahedron(2.0);
        let s = MUST_ROTATE_WINDOW_SIDE;
        let w = WindowSpec::Rect { a: s, b: s };
        let path = planner_2dof(&k, &w, 64, 64).expect("grid path exists");
        // validate at 4× the planning resolution
        let report = validate_path(&k, &path, &w, 256, 1e-9);
        assert!(report.passed(), "{report:?}");
    }
}
