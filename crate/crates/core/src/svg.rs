//! Deterministic SVG snapshots: shadows over the window, cross-section
//! frames of a motion, and a stereographic sketch of an admissible
//! direction region.

use nalgebra::{Point2, Point3, Unit, Vector3};

use crate::motion::WindowSpec;
use crate::scene::{CliError, Scene};
use crate::sliding::region::{admissible_region, sample_arcs};

use std::fmt::Write as _;

struct Canvas {
    body: String,
    min: Point2<f64>,
    max: Point2<f64>,
}

impl Canvas {
    fn new() -> Canvas {
        Canvas {
            body: String::new(),
            min: Point2::new(f64::INFINITY, f64::INFINITY),
            max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn cover(&mut self, p: &Point2<f64>) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(-p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(-p.y);
    }

    fn path_points(&mut self, pts: &[Point2<f64>]) -> String {
        let mut s = String::new();
        for p in pts {
            self.cover(p);
            let _ = write!(s, "{:.6},{:.6} ", p.x, -p.y);
        }
        s.trim_end().to_string()
    }

    fn polygon(&mut self, pts: &[Point2<f64>], style: &str) {
        let points = self.path_points(pts);
        let _ = writeln!(self.body, "  <polygon points=\"{points}\" style=\"{style}\"/>");
    }

    fn polyline(&mut self, pts: &[Point2<f64>], style: &str) {
        let points = self.path_points(pts);
        let _ = writeln!(self.body, "  <polyline points=\"{points}\" style=\"{style}\"/>");
    }

    fn circle(&mut self, c: &Point2<f64>, r: f64, style: &str) {
        self.cover(&Point2::new(c.x - r, c.y - r));
        self.cover(&Point2::new(c.x + r, c.y + r));
        let _ = writeln!(
            self.body,
            "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" style=\"{style}\"/>",
            c.x, -c.y, r
        );
    }

    fn dot(&mut self, c: &Point2<f64>, style: &str) {
        let r = (self.max.x - self.min.x).max(self.max.y - self.min.y).max(1.0) * 0.008;
        self.circle(c, r, style);
    }

    fn finish(self) -> String {
        let pad = 0.08 * (self.max.x - self.min.x).max(self.max.y - self.min.y).max(1.0);
        let (x, y) = (self.min.x - pad, self.min.y - pad);
        let w = self.max.x - self.min.x + 2.0 * pad;
        let h = self.max.y - self.min.y + 2.0 * pad;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x:.6} {y:.6} {w:.6} {h:.6}\" width=\"640\" height=\"640\">\n{}</svg>\n",
            self.body
        )
    }
}

const WINDOW_STYLE: &str = "fill:none;stroke:#1f4e79;stroke-width:0.01";
const SHAPE_STYLE: &str = "fill:#7fbf7f55;stroke:#2c7a2c;stroke-width:0.008";
const BAD_STYLE: &str = "fill:#d04040;stroke:none";
const ARC_STYLE: &str = "fill:none;stroke:#2c7a2c;stroke-width:0.01";
const POINT_STYLE: &str = "fill:#1f4e79;stroke:none";

fn draw_window(canvas: &mut Canvas, window: &WindowSpec) {
    match window {
        WindowSpec::Rect { a, b } => {
            canvas.polygon(
                &[
                    Point2::new(0.0, 0.0),
                    Point2::new(*a, 0.0),
                    Point2::new(*a, *b),
                    Point2::new(0.0, *b),
                ],
                WINDOW_STYLE,
            );
        }
        WindowSpec::Gate { a } => {
            let long = 10.0 * a;
            canvas.polyline(
                &[Point2::new(0.0, -long), Point2::new(0.0, long)],
                WINDOW_STYLE,
            );
            canvas.polyline(
                &[Point2::new(*a, -long), Point2::new(*a, long)],
                WINDOW_STYLE,
            );
        }
        WindowSpec::Circle { d } => {
            canvas.circle(&Point2::new(0.0, 0.0), d / 2.0, WINDOW_STYLE);
        }
        WindowSpec::ConvexPolygon { vertices } => {
            canvas.polygon(vertices.vertices(), WINDOW_STYLE);
        }
    }
}

fn render_shadow(scene: &Scene) -> Result<String, CliError> {
    let poly = scene
        .polytope
        .as_ref()
        .ok_or_else(|| CliError::MissingInput("polytope".into()))?;
    let window = scene
        .window
        .clone()
        .ok_or_else(|| CliError::MissingInput("window".into()))?;
    let dir = scene
        .params
        .direction
        .map(|d| Vector3::new(d[0], d[1], d[2]))
        .unwrap_or_else(Vector3::z);
    if dir.norm() < 1e-12 {
        return Err(CliError::Render("direction is zero".into()));
    }
    let oriented = poly.transformed(&crate::geom::RigidPlacement::new(
        scene.orientation,
        Vector3::zeros(),
    ));
    // Vertical shadow: drop z. Other directions use the canonical frame.
    let shadow: Vec<Point2<f64>> = if (dir.normalize() - Vector3::z()).norm() < 1e-9 {
        crate::geom::convex_hull_2d(
            &oriented
                .vertices()
                .iter()
                .map(|p| Point2::new(p.x, p.y))
                .collect::<Vec<_>>(),
            1e-12,
        )
    } else {
        oriented
            .project_shadow(&Unit::new_normalize(dir))
            .vertices()
            .to_vec()
    };
    let mut canvas = Canvas::new();
    draw_window(&mut canvas, &window);
    canvas.polygon(&shadow, SHAPE_STYLE);
    for p in &shadow {
        if window.violation(p) > scene.tol {
            canvas.dot(p, BAD_STYLE);
        }
    }
    Ok(canvas.finish())
}

fn render_sections(scene: &Scene) -> Result<String, CliError> {
    let window = scene
        .window
        .clone()
        .ok_or_else(|| CliError::MissingInput("window".into()))?;
    let frames = scene.params.frames.unwrap_or(8).max(2);
    let (poly, path) = match (&scene.params.path, scene.params.h, scene.params.d) {
        (Some(path), _, _) => {
            let poly = scene
                .polytope
                .clone()
                .ok_or_else(|| CliError::MissingInput("polytope".into()))?;
            (poly, path.clone())
        }
        (None, Some(h), _) => (
            crate::motion::must_rotate_tetrahedron(h),
            crate::motion::must_rotate_motion(h),
        ),
        (None, None, Some(d)) => (
            crate::geom::regular_tetrahedron(),
            crate::circular::five_step_motion(d)
                .map_err(|e| CliError::Render(e.to_string()))?,
        ),
        _ => {
            return Err(CliError::MissingInput(
                "params.path, params.h or params.d".into(),
            ))
        }
    };
    let mut canvas = Canvas::new();
    draw_window(&mut canvas, &window);
    let n_stages = path.stages.len();
    let total = frames.max(2);
    for k in 0..total {
        let t = k as f64 / (total - 1) as f64;
        let pos = t * (n_stages as f64 - 1e-9);
        let stage = (pos.floor() as usize).min(n_stages - 1);
        let s = pos - stage as f64;
        let config = path.config_at(stage, s.clamp(0.0, 1.0));
        let section = poly.cross_section_z0(&config.placement);
        let pts = section.points();
        if pts.len() >= 3 {
            canvas.polygon(&pts, SHAPE_STYLE);
        } else if pts.len() == 2 {
            canvas.polyline(&pts, SHAPE_STYLE);
        }
        for p in &pts {
            if window.violation(p) > scene.tol {
                canvas.dot(p, BAD_STYLE);
            }
        }
    }
    Ok(canvas.finish())
}

/// Stereographic projection from the north pole onto the equator plane.
fn stereographic(p: &Point3<f64>) -> Option<Point2<f64>> {
    if p.z > 1.0 - 1e-6 {
        return None;
    }
    Some(Point2::new(p.x / (1.0 - p.z), p.y / (1.0 - p.z)))
}

fn render_region(scene: &Scene) -> Result<String, CliError> {
    let poly = scene
        .polytope
        .as_ref()
        .ok_or_else(|| CliError::MissingInput("polytope".into()))?;
    let bound = match (scene.params.bound, &scene.window) {
        (Some(b), _) => b,
        (None, Some(WindowSpec::Rect { a, .. })) => *a,
        (None, Some(WindowSpec::Gate { a })) => *a,
        (None, Some(WindowSpec::Circle { d })) => *d,
        _ => return Err(CliError::MissingInput("params.bound or window".into())),
    };
    if bound <= 0.0 {
        return Err(CliError::Render("bound must be > 0".into()));
    }
    let region = admissible_region(poly, bound);
    let mut canvas = Canvas::new();
    // Equator image.
    canvas.circle(&Point2::new(0.0, 0.0), 1.0, WINDOW_STYLE);
    for arc in sample_arcs(&region, 64) {
        let pts: Vec<Point2<f64>> = arc.iter().filter_map(stereographic).collect();
        if pts.len() >= 2 {
            canvas.polyline(&pts, ARC_STYLE);
        }
    }
    for p in region.candidate_points() {
        if let Some(q) = stereographic(&Point3::from(p.into_inner())) {
            canvas.dot(&q, POINT_STYLE);
        }
    }
    Ok(canvas.finish())
}

fn render_cover(scene: &Scene) -> Result<String, CliError> {
    let (a, b) = match &scene.window {
        Some(WindowSpec::Rect { a, b }) => (*a, *b),
        _ => return Err(CliError::MissingInput("rectangular window".into())),
    };
    let alpha = scene.params.alpha.unwrap_or(0.6);
    let beta = scene.params.beta.unwrap_or(0.5);
    let cover = crate::geom::shadow_cover(a, b, alpha, beta)
        .map_err(|e| CliError::Render(e.to_string()))?;
    let mut canvas = Canvas::new();
    draw_window(&mut canvas, &WindowSpec::Rect { a, b });
    canvas.polygon(&cover.corners, SHAPE_STYLE);
    for p in &cover.corners {
        canvas.dot(p, POINT_STYLE);
    }
    Ok(canvas.finish())
}

/// Render the requested artifact of a scene as a standalone SVG document.
pub fn render(scene: &Scene, artifact: &str) -> Result<String, CliError> {
    match artifact {
        "shadow" => render_shadow(scene),
        "sections" => render_sections(scene),
        "region" => render_region(scene),
        "cover" => render_cover(scene),
        other => Err(CliError::Render(format!(
            "unknown artifact {other:?}; expected shadow, sections, region or cover"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_scene;

    #[test]
    fn cube_shadow_is_square_inside_square() {
        let scene = parse_scene(
            r#"{
                "polytope": [[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]],
                "window": {"kind": "rect", "a": 1.0, "b": 1.0}
            }"#,
        )
        .unwrap();
        let doc = render(&scene, "shadow").unwrap();
        assert!(doc.starts_with("<svg "));
        assert!(doc.contains("<polygon"));
        // deterministic output
        assert_eq!(doc, render(&scene, "shadow").unwrap());
    }

    #[test]
    fn must_rotate_frames_render() {
        let scene = parse_scene(
            r#"{
                "window": {"kind": "rect", "a": 2.2360679774997898, "b": 2.2360679774997898},
                "params": {"h": 2.0, "frames": 8}
            }"#,
        )
        .unwrap();
        let doc = render(&scene, "sections").unwrap();
        assert!(doc.matches("<polygon").count() >= 5);
    }

    #[test]
    fn region_sketch_renders_arcs() {
        let scene = parse_scene(
            r#"{
                "polytope": [[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]],
                "params": {"bound": 1.2}
            }"#,
        )
        .unwrap();
        let doc = render(&scene, "region").unwrap();
        assert!(doc.contains("<polyline"));
    }

    #[test]
    fn cover_artifact_renders_parallelogram_inside_rect() {
        let scene = parse_scene(
            r#"{
                "window": {"kind": "rect", "a": 2.0, "b": 1.0},
                "params": {"alpha": 0.7, "beta": 0.5}
            }"#,
        )
        .unwrap();
        let doc = render(&scene, "cover").unwrap();
        assert!(doc.matches("<polygon").count() >= 2);
    }

    #[test]
    fn unknown_artifact_is_an_error() {
        let scene = parse_scene("{}").unwrap();
        assert!(render(&scene, "movie").is_err());
    }
}
