//! JSON scene ingestion and command dispatch for the CLI.

use nalgebra::{Matrix3, Point3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::circular::{
    delta2_cached, find_delta1, find_delta2, five_step_motion, five_step_parameters,
    min_cylinder_diameter, vertex_cross_min,
};
use crate::geom::{build_polytope, regular_tetrahedron, Polytope, RigidPlacement};
use crate::motion::{
    must_rotate_motion, must_rotate_tetrahedron, planner_2dof, validate_path, MotionPath,
    WindowSpec, MUST_ROTATE_WINDOW_SIDE,
};
use crate::sliding::{slide_feasible, vertical_slide_witness};
use crate::svg;
use crate::tol::{Tolerances, EPS_GEOM};
use crate::translation::{fixed_orientation_slide, gate_feasible, projection_width_max, slide_trade};

use std::collections::BTreeMap;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("scene is missing required input: {0}")]
    MissingInput(String),
    #[error("geometry error: {0}")]
    Geometry(#[from] crate::geom::GeomError),
    #[error("render error: {0}")]
    Render(String),
}

impl CliError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "E_PARSE",
            CliError::Validation(_) => "E_VALIDATION",
            CliError::MissingInput(_) => "E_MISSING_INPUT",
            CliError::Geometry(_) => "E_GEOMETRY",
            CliError::Render(_) => "E_RENDER",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrientationDoc {
    #[serde(default)]
    pub axis: Option<[f64; 3]>,
    #[serde(default)]
    pub angle: Option<f64>,
    #[serde(default)]
    pub matrix: Option<[[f64; 3]; 3]>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsDoc {
    pub samples: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub resolution: Option<usize>,
    pub h: Option<f64>,
    pub d: Option<f64>,
    pub z_steps: Option<usize>,
    pub theta_steps: Option<usize>,
    pub frames: Option<usize>,
    pub bound: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub artifact: Option<String>,
    pub direction: Option<[f64; 3]>,
    pub path: Option<MotionPath>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDoc {
    #[serde(default)]
    pub polytope: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub orientation: Option<OrientationDoc>,
    #[serde(default)]
    pub params: ParamsDoc,
}

/// Validated scene with defaults filled from the tolerance record.
#[derive(Debug, Clone)]
pub struct Scene {
    pub polytope: Option<Polytope>,
    pub window: Option<WindowSpec>,
    pub orientation: Rotation3<f64>,
    pub samples: usize,
    pub grid: usize,
    pub tol: f64,
    pub resolution: usize,
    pub params: ParamsDoc,
}

/// Parse and validate a scene document.
pub fn parse_scene(text: &str) -> Result<Scene, CliError> {
    let doc: SceneDoc = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if let Some(w) = &doc.window {
        w.validate().map_err(CliError::Validation)?;
    }
    let polytope = match &doc.polytope {
        Some(pts) => {
            if pts.len() < 4 {
                return Err(CliError::Validation(
                    "polytope needs at least 4 points".into(),
                ));
            }
            let points: Vec<Point3<f64>> =
                pts.iter().map(|p| Point3::new(p[0], p[1], p[2])).collect();
            Some(build_polytope(&points)?)
        }
        None => None,
    };
    let orientation = match &doc.orientation {
        None => Rotation3::identity(),
        Some(o) => match (o.matrix, o.axis, o.angle) {
            (Some(rows), None, None) => {
                let m = Matrix3::new(
                    rows[0][0], rows[0][1], rows[0][2], rows[1][0], rows[1][1], rows[1][2],
                    rows[2][0], rows[2][1], rows[2][2],
                );
                let r = Rotation3::from_matrix_unchecked(m);
                let p = RigidPlacement::new(r, Vector3::zeros());
                if !p.is_valid(1e-8) {
                    return Err(CliError::Validation(
                        "orientation.matrix is not a rotation".into(),
                    ));
                }
                r
            }
            (None, Some(axis), Some(angle)) => {
                let v = Vector3::new(axis[0], axis[1], axis[2]);
                if v.norm() < 1e-12 {
                    return Err(CliError::Validation("orientation.axis is zero".into()));
                }
                Rotation3::from_axis_angle(&Unit::new_normalize(v), angle)
            }
            _ => {
                return Err(CliError::Validation(
                    "orientation needs either matrix or axis+angle".into(),
                ))
            }
        },
    };
    let defaults = Tolerances::default();
    let tol = doc.params.tol.unwrap_or(defaults.eps_geom);
    if tol <= 0.0 {
        return Err(CliError::Validation("params.tol must be > 0".into()));
    }
    Ok(Scene {
        polytope,
        window: doc.window.clone(),
        orientation,
        samples: doc.params.samples.unwrap_or(1000).max(2),
        grid: doc.params.grid.unwrap_or(64),
        tol,
        resolution: doc.params.resolution.unwrap_or(1000),
        params: doc.params,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Hull,
    Width,
    Gate,
    Slide,
    FixedSlide,
    SlideTrade,
    ProjectWidth,
    CircleThresholds,
    TetraMotion,
    MustRotate,
    Plan2Dof,
    Validate,
    Render,
}

impl Command {
    pub const ALL: [(&'static str, Command); 13] = [
        ("hull", Command::Hull),
        ("width", Command::Width),
        ("gate", Command::Gate),
        ("slide", Command::Slide),
        ("fixed-slide", Command::FixedSlide),
        ("slide-trade", Command::SlideTrade),
        ("project-width", Command::ProjectWidth),
        ("circle-thresholds", Command::CircleThresholds),
        ("tetra-motion", Command::TetraMotion),
        ("must-rotate", Command::MustRotate),
        ("plan-2dof", Command::Plan2Dof),
        ("validate", Command::Validate),
        ("render", Command::Render),
    ];

    pub fn parse(name: &str) -> Option<Command> {
        Self::ALL
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, c)| *c)
    }

    pub fn name(&self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, c)| c == self)
            .map(|(n, _)| *n)
            .expect("command registered")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    Ok,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Infeasible => 2,
            _ => 0,
        }
    }
}

/// Machine-readable result of one command invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub verdict: Verdict,
    pub witness: Value,
    pub metrics: BTreeMap<String, Value>,
    /// Wall-clock time; excluded from determinism comparisons.
    pub timing_ms: f64,
}

/// Result plus an optional rendered SVG document.
pub struct RunOutput {
    pub record: ResultRecord,
    pub svg: Option<String>,
}

/// Round to 9 significant decimal digits.
pub fn sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Recursively round every number in a JSON value to 9 significant digits.
pub fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(f) = n.as_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(sig9(f)) {
                        *v = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_numbers),
        Value::Object(o) => o.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn vec3_json(v: &Vector3<f64>) -> Value {
    serde_json::json!([v.x, v.y, v.z])
}

fn require_polytope(scene: &Scene) -> Result<&Polytope, CliError> {
    scene
        .polytope
        .as_ref()
        .ok_or_else(|| CliError::MissingInput("polytope".into()))
}

fn require_rect(scene: &Scene) -> Result<(f64, f64), CliError> {
    match &scene.window {
        Some(WindowSpec::Rect { a, b }) => Ok((*a, *b)),
        _ => Err(CliError::MissingInput("rectangular window".into())),
    }
}

fn record(
    command: Command,
    verdict: Verdict,
    witness: Value,
    metrics: BTreeMap<String, Value>,
) -> ResultRecord {
    ResultRecord {
        command: command.name().to_string(),
        verdict,
        witness,
        metrics,
        timing_ms: 0.0,
    }
}

/// Execute a command against a scene.
pub fn run(command: Command, scene: &Scene) -> Result<RunOutput, CliError> {
    let mut metrics: BTreeMap<String, Value> = BTreeMap::new();
    let out = match command {
        Command::Hull => {
            let poly = require_polytope(scene)?;
            metrics.insert("vertices".into(), poly.num_vertices().into());
            metrics.insert("edges".into(), poly.edges().len().into());
            metrics.insert("faces".into(), poly.faces().len().into());
            metrics.insert("surface_area".into(), poly.surface_area().into());
            let verts: Vec<Value> = poly
                .vertices()
                .iter()
                .map(|p| vec3_json(&p.coords))
                .collect();
            RunOutput {
                record: record(command, Verdict::Ok, Value::Array(verts), metrics),
                svg: None,
            }
        }
        Command::Width => {
            let poly = require_polytope(scene)?;
            let (w, dir) = poly.width3();
            metrics.insert("width".into(), w.into());
            RunOutput {
                record: record(command, Verdict::Ok, vec3_json(&dir), metrics),
                svg: None,
            }
        }
        Command::Gate => {
            let poly = require_polytope(scene)?;
            let a = match &scene.window {
                Some(WindowSpec::Gate { a }) => *a,
                Some(WindowSpec::Rect { a, .. }) => *a,
                _ => return Err(CliError::MissingInput("gate window".into())),
            };
            let (w, _) = poly.width3();
            metrics.insert("width".into(), w.into());
            metrics.insert("gate".into(), a.into());
            match gate_feasible(poly, a) {
                Some(wit) => {
                    metrics.insert("grazing".into(), wit.grazing.into());
                    let witness = serde_json::json!({
                        "normal": [wit.normal.x, wit.normal.y, wit.normal.z],
                        "width": wit.width,
                        "orientation": wit.orientation,
                    });
                    RunOutput {
                        record: record(command, Verdict::Feasible, witness, metrics),
                        svg: None,
                    }
                }
                None => RunOutput {
                    record: record(command, Verdict::Infeasible, Value::Null, metrics),
                    svg: None,
                },
            }
        }
        Command::Slide => {
            let poly = require_polytope(scene)?;
            let (a, b) = require_rect(scene)?;
            match slide_feasible(poly, a, b) {
                Some(wit) => {
                    let placement = vertical_slide_witness(poly, &wit, a, b)
                        .map_err(|e| CliError::Validation(e.to_string()))?;
                    metrics.insert("grazing".into(), wit.grazing.into());
                    metrics.insert("extent_x".into(), poly.extent_width(&wit.x_axis).into());
                    metrics.insert("extent_y".into(), poly.extent_width(&wit.y_axis).into());
                    // Valid-view angle of the placed shadow inside the window.
                    let shadow = poly
                        .transformed(&placement)
                        .project_shadow(&nalgebra::Unit::new_unchecked(Vector3::z()));
                    if let Some(theta) = shadow.fits_in_rect(a, b) {
                        metrics.insert("shadow_fit_theta".into(), theta.into());
                    }
                    let witness = serde_json::json!({
                        "x_axis": [wit.x_axis.x, wit.x_axis.y, wit.x_axis.z],
                        "y_axis": [wit.y_axis.x, wit.y_axis.y, wit.y_axis.z],
                        "v": [wit.v.x, wit.v.y, wit.v.z],
                        "vertical_placement": placement,
                    });
                    RunOutput {
                        record: record(command, Verdict::Feasible, witness, metrics),
                        svg: None,
                    }
                }
                None => RunOutput {
                    record: record(command, Verdict::Infeasible, Value::Null, metrics),
                    svg: None,
                },
            }
        }
        Command::FixedSlide => {
            let poly = require_polytope(scene)?;
            let (a, b) = require_rect(scene)?;
            let line = fixed_orientation_slide(poly, &scene.orientation, a, b)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            match line {
                Some(l) => {
                    metrics.insert("xz_ratio".into(), l.xz_slab.ratio.into());
                    metrics.insert("yz_ratio".into(), l.yz_slab.ratio.into());
                    let witness = serde_json::json!({
                        "point": [l.point.x, l.point.y, l.point.z],
                        "direction": [l.direction.x, l.direction.y, l.direction.z],
                        "offset": [l.offset.x, l.offset.y, l.offset.z],
                    });
                    RunOutput {
                        record: record(command, Verdict::Feasible, witness, metrics),
                        svg: None,
                    }
                }
                None => RunOutput {
                    record: record(command, Verdict::Infeasible, Value::Null, metrics),
                    svg: None,
                },
            }
        }
        Command::SlideTrade => {
            let poly = require_polytope(scene)?;
            let (a, b) = require_rect(scene)?;
            let m = a.min(b);
            let diag = a.hypot(b);
            metrics.insert("target_a".into(), m.into());
            metrics.insert("target_b".into(), diag.into());
            match slide_trade(poly, a, b) {
                Some(wit) => {
                    let witness = serde_json::json!({
                        "x_axis": [wit.x_axis.x, wit.x_axis.y, wit.x_axis.z],
                        "y_axis": [wit.y_axis.x, wit.y_axis.y, wit.y_axis.z],
                        "v": [wit.v.x, wit.v.y, wit.v.z],
                    });
                    RunOutput {
                        record: record(command, Verdict::Feasible, witness, metrics),
                        svg: None,
                    }
                }
                None => RunOutput {
                    record: record(command, Verdict::Infeasible, Value::Null, metrics),
                    svg: None,
                },
            }
        }
        Command::ProjectWidth => {
            let poly = require_polytope(scene)?;
            let value = projection_width_max(poly, scene.resolution.max(100));
            metrics.insert("projection_width_max".into(), value.into());
            metrics.insert("resolution".into(), scene.resolution.max(100).into());
            RunOutput {
                record: record(command, Verdict::Ok, Value::Null, metrics),
                svg: None,
            }
        }
        Command::CircleThresholds => {
            let d1 = find_delta1();
            let d2 = find_delta2();
            let vx = vertex_cross_min();
            let tetra = regular_tetrahedron();
            let cyl = min_cylinder_diameter(&tetra, scene.resolution.max(10_000));
            metrics.insert("delta1".into(), d1.value.into());
            metrics.insert(
                "delta1_argmin".into(),
                serde_json::json!([d1.argmin.0, d1.argmin.1]),
            );
            metrics.insert("delta2".into(), d2.value.into());
            metrics.insert(
                "delta2_argmin".into(),
                serde_json::json!([d2.argmin.0, d2.argmin.1]),
            );
            metrics.insert("vertex_cross_min".into(), vx.value.into());
            metrics.insert("cylinder_diameter".into(), cyl.into());
            metrics.insert(
                "mid_rect_diagonal".into(),
                five_step_parameters().mid_rect_diagonal.into(),
            );
            RunOutput {
                record: record(command, Verdict::Ok, Value::Null, metrics),
                svg: None,
            }
        }
        Command::TetraMotion => {
            let d2 = delta2_cached();
            let d = scene.params.d.unwrap_or(d2.value + 1e-4);
            metrics.insert("d".into(), d.into());
            metrics.insert("delta2".into(), d2.value.into());
            if d < d2.value - EPS_GEOM {
                metrics.insert("vertex_cross_min".into(), vertex_cross_min().value.into());
                return Ok(RunOutput {
                    record: record(command, Verdict::Infeasible, Value::Null, metrics),
                    svg: None,
                });
            }
            let tetra = regular_tetrahedron();
            let path = five_step_motion(d).map_err(|e| CliError::Validation(e.to_string()))?;
            let report = validate_path(
                &tetra,
                &path,
                &WindowSpec::Circle { d },
                scene.samples,
                scene.tol,
            );
            metrics.insert("validation".into(), serde_json::to_value(&report).unwrap());
            metrics.insert(
                "mid_rect_diagonal".into(),
                five_step_parameters().mid_rect_diagonal.into(),
            );
            let verdict = if report.passed() {
                Verdict::Feasible
            } else {
                Verdict::Infeasible
            };
            RunOutput {
                record: record(
                    command,
                    verdict,
                    serde_json::to_value(&path).unwrap(),
                    metrics,
                ),
                svg: None,
            }
        }
        Command::MustRotate => {
            let h = scene.params.h.unwrap_or(100.0);
            if h <= 0.0 {
                return Err(CliError::Validation("params.h must be > 0".into()));
            }
            let s = MUST_ROTATE_WINDOW_SIDE;
            let k = must_rotate_tetrahedron(h);
            let sliding = slide_feasible(&k, s, s).is_some();
            let translational = fixed_orientation_slide(&k, &Rotation3::identity(), s, s)
                .map_err(|e| CliError::Validation(e.to_string()))?
                .is_some();
            let path = must_rotate_motion(h);
            let report = validate_path(
                &k,
                &path,
                &WindowSpec::Rect { a: s, b: s },
                scene.samples,
                scene.tol,
            );
            metrics.insert("h".into(), h.into());
            metrics.insert("window_side".into(), s.into());
            metrics.insert("sliding_feasible".into(), sliding.into());
            metrics.insert("fixed_orientation_feasible".into(), translational.into());
            metrics.insert("validation".into(), serde_json::to_value(&report).unwrap());
            let verdict = if report.passed() {
                Verdict::Feasible
            } else {
                Verdict::Infeasible
            };
            RunOutput {
                record: record(
                    command,
                    verdict,
                    serde_json::to_value(&path).unwrap(),
                    metrics,
                ),
                svg: None,
            }
        }
        Command::Plan2Dof => {
            let poly = require_polytope(scene)?;
            let window = scene
                .window
                .clone()
                .ok_or_else(|| CliError::MissingInput("window".into()))?;
            let z_steps = scene.params.z_steps.unwrap_or(scene.grid).max(8);
            let theta_steps = scene.params.theta_steps.unwrap_or(scene.grid).max(8);
            metrics.insert("z_steps".into(), z_steps.into());
            metrics.insert("theta_steps".into(), theta_steps.into());
            match planner_2dof(poly, &window, z_steps, theta_steps) {
                Some(path) => {
                    let report = validate_path(poly, &path, &window, scene.samples, scene.tol);
                    metrics.insert("stages".into(), path.stages.len().into());
                    metrics.insert("validation".into(), serde_json::to_value(&report).unwrap());
                    let verdict = if report.passed() {
                        Verdict::Feasible
                    } else {
                        Verdict::Infeasible
                    };
                    RunOutput {
                        record: record(
                            command,
                            verdict,
                            serde_json::to_value(&path).unwrap(),
                            metrics,
                        ),
                        svg: None,
                    }
                }
                None => RunOutput {
                    record: record(command, Verdict::Infeasible, Value::Null, metrics),
                    svg: None,
                },
            }
        }
        Command::Validate => {
            let poly = require_polytope(scene)?;
            let window = scene
                .window
                .clone()
                .ok_or_else(|| CliError::MissingInput("window".into()))?;
            let path = scene
                .params
                .path
                .clone()
                .ok_or_else(|| CliError::MissingInput("params.path".into()))?;
            let report = validate_path(poly, &path, &window, scene.samples, scene.tol);
            metrics.insert("validation".into(), serde_json::to_value(&report).unwrap());
            let verdict = if report.passed() {
                Verdict::Feasible
            } else {
                Verdict::Infeasible
            };
            RunOutput {
                record: record(command, verdict, Value::Null, metrics),
                svg: None,
            }
        }
        Command::Render => {
            let artifact = scene
                .params
                .artifact
                .clone()
                .unwrap_or_else(|| "shadow".into());
            let svg_doc = svg::render(scene, &artifact)?;
            metrics.insert("artifact".into(), artifact.into());
            metrics.insert("bytes".into(), svg_doc.len().into());
            RunOutput {
                record: record(command, Verdict::Ok, Value::Null, metrics),
                svg: Some(svg_doc),
            }
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_scene_json() -> String {
        r#"{
            "polytope": [[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]],
            "window": {"kind": "rect", "a": 1.0, "b": 1.0}
        }"#
        .to_string()
    }

    #[test]
    fn minimal_scene_parses_with_defaults() {
        let scene = parse_scene(&cube_scene_json()).unwrap();
        assert_eq!(scene.samples, 1000);
        assert_eq!(scene.tol, EPS_GEOM);
        assert_eq!(scene.polytope.unwrap().num_vertices(), 8);
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"polytope": [[0,0,0]], "mystery": 1}"#;
        assert!(matches!(parse_scene(text), Err(CliError::Parse(_))));
    }

    #[test]
    fn negative_window_rejected() {
        let text = r#"{"window": {"kind": "rect", "a": 1.0, "b": -1.0}}"#;
        match parse_scene(text) {
            Err(CliError::Validation(msg)) => assert!(msg.contains("window.b must be > 0")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn slide_on_cube_is_feasible_with_axis_witness() {
        let scene = parse_scene(&cube_scene_json()).unwrap();
        let out = run(Command::Slide, &scene).unwrap();
        assert_eq!(out.record.verdict, Verdict::Feasible);
        assert_eq!(out.record.verdict.exit_code(), 0);
    }

    #[test]
    fn record_round_trips_through_json() {
        let scene = parse_scene(&cube_scene_json()).unwrap();
        let out = run(Command::Width, &scene).unwrap();
        let mut v = serde_json::to_value(&out.record).unwrap();
        round_numbers(&mut v);
        let text = serde_json::to_string(&v).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.command, "width");
        let again = serde_json::to_string(&{
            let mut v2 = serde_json::to_value(&back).unwrap();
            round_numbers(&mut v2);
            v2
        })
        .unwrap();
        assert_eq!(text, again);
    }

    #[test]
    fn sig9_rounds_to_nine_digits() {
        assert_eq!(sig9(0.7071067811865476), 0.707106781);
        assert_eq!(sig9(0.0), 0.0);
    }

    #[test]
    fn tetra_motion_below_threshold_is_infeasible_verdict() {
        let mut scene = parse_scene("{}").unwrap();
        scene.params.d = Some(0.89);
        scene.samples = 16;
        let out = run(Command::TetraMotion, &scene).unwrap();
        assert_eq!(out.record.verdict, Verdict::Infeasible);
        assert_eq!(out.record.verdict.exit_code(), 2);
        let vx = out.record.metrics.get("vertex_cross_min").unwrap();
        assert!(vx.as_f64().unwrap() > 0.89);
    }
}
