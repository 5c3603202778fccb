//! A rectangle covers every parallelogram obtained by contracting it toward
//! a line through its center.
//!
//! The projection of a rectangle window onto a plane at dihedral angle α is,
//! up to rigid motion, the image of the window under the linear contraction
//! by cos α toward the intersection line. This module constructs a rigid
//! placement of that parallelogram back inside the rectangle.

use nalgebra::{Point2, Rotation2, Vector2};
use serde::{Deserialize, Serialize};

use super::GeomError;
use crate::tol::EPS_GEOM;

/// In-plane rigid placement of the contracted window inside `[0,a]×[0,b]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverPlacement {
    pub rotation: Rotation2<f64>,
    pub translation: Vector2<f64>,
    /// Corners of the contracted parallelogram before placement.
    pub parallelogram: [Point2<f64>; 4],
    /// Placed corners, all inside the rectangle.
    pub corners: [Point2<f64>; 4],
    /// Which construction was used.
    pub diagonal_case: bool,
}

impl CoverPlacement {
    pub fn apply(&self, p: &Point2<f64>) -> Point2<f64> {
        self.rotation * p + self.translation
    }
}

fn angle_at(apex: &Point2<f64>, p: &Point2<f64>, q: &Point2<f64>) -> f64 {
    let u = p - apex;
    let v = q - apex;
    u.perp(&v).abs().atan2(u.dot(&v))
}

fn inside_rect(p: &Point2<f64>, a: f64, b: f64, tol: f64) -> bool {
    p.x >= -tol && p.x <= a + tol && p.y >= -tol && p.y <= b + tol
}

/// Rigid placement of the cos α contraction of the `a×b` rectangle toward
/// the line through its center at angle β, inside the rectangle itself.
pub fn shadow_cover(a: f64, b: f64, alpha: f64, beta: f64) -> Result<CoverPlacement, GeomError> {
    if a <= 0.0 || b <= 0.0 {
        return Err(GeomError::DegenerateInput("rectangle sides must be positive".into()));
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return Err(GeomError::DegenerateInput(
            "dihedral angle must lie in [0, π/2)".into(),
        ));
    }
    let center = Point2::new(a / 2.0, b / 2.0);
    let hinge = Vector2::new(beta.cos(), beta.sin());
    let normal = Vector2::new(-beta.sin(), beta.cos());
    let c = alpha.cos();
    let sigma = |p: &Point2<f64>| -> Point2<f64> {
        let d = (p - center).dot(&normal);
        p - normal * ((1.0 - c) * d)
    };

    let rect = [
        Point2::new(0.0, 0.0),
        Point2::new(a, 0.0),
        Point2::new(a, b),
        Point2::new(0.0, b),
    ];
    let image: Vec<Point2<f64>> = rect.iter().map(&sigma).collect();
    let img: [Point2<f64>; 4] = [image[0], image[1], image[2], image[3]];

    // Hinge parallel to a side (or α = 0): the contraction maps the
    // rectangle into itself directly.
    let axis_aligned = hinge.x.abs() < 1e-12 || hinge.y.abs() < 1e-12;
    if alpha == 0.0 || axis_aligned {
        return Ok(CoverPlacement {
            rotation: Rotation2::identity(),
            translation: Vector2::zeros(),
            parallelogram: img,
            corners: img,
            diagonal_case: false,
        });
    }

    // Label the rectangle corners A,B,C,D so that B,C lie on one side of the
    // hinge, A,D on the other, and the hinge meets ray B→C beyond C.
    let side = |p: &Point2<f64>| (p - center).dot(&normal);
    let mut labeling: Option<[usize; 4]> = None;
    'outer: for rev in [false, true] {
        for shift in 0..4 {
            let idx: [usize; 4] = if rev {
                [
                    (4 + shift) % 4,
                    (3 + shift) % 4,
                    (2 + shift) % 4,
                    (1 + shift) % 4,
                ]
            } else {
                [shift, (shift + 1) % 4, (shift + 2) % 4, (shift + 3) % 4]
            };
            let tol = 1e-12 * (a + b);
            if side(&rect[idx[1]]) < -tol || side(&rect[idx[2]]) < -tol {
                continue;
            }
            if side(&rect[idx[0]]) > tol || side(&rect[idx[3]]) > tol {
                continue;
            }
            // T = hinge ∩ line(BC), parameter along B→C.
            let bc = rect[idx[2]] - rect[idx[1]];
            let denom = bc.perp(&hinge);
            if denom.abs() < 1e-12 * bc.norm() {
                continue; // hinge parallel to BC, handled above
            }
            let t = (center - rect[idx[1]]).perp(&hinge) / denom;
            if t >= 1.0 - 1e-9 {
                labeling = Some(idx);
                break 'outer;
            }
        }
    }
    let idx = labeling.ok_or_else(|| {
        GeomError::DegenerateInput("no valid corner labeling for shadow cover".into())
    })?;

    let (ra, rb, rc) = (rect[idx[0]], rect[idx[1]], rect[idx[2]]);
    let (ia, ib, ic) = (image[idx[0]], image[idx[1]], image[idx[2]]);

    let diag_case = angle_at(&ia, &ic, &ib) <= angle_at(&ra, &rc, &rb);
    let tol = 1e-9 * (a + b);

    let build = |diagonal: bool| -> CoverPlacement {
        let (rotation, translation) = if diagonal {
            // Place the image diagonal A'C' on the rectangle diagonal AC,
            // centered at the rectangle center.
            let ang = (rc - ra).y.atan2((rc - ra).x) - (ic - ia).y.atan2((ic - ia).x);
            let rot = Rotation2::new(ang);
            let mid = Point2::from((ia.coords + ic.coords) / 2.0);
            (rot, center - rot * mid)
        } else {
            // Place A' at A with A'B' along AB.
            let ang = (rb - ra).y.atan2((rb - ra).x) - (ib - ia).y.atan2((ib - ia).x);
            let rot = Rotation2::new(ang);
            (rot, ra - rot * ia)
        };
        let corners = [
            rot_apply(&rotation, &translation, &img[0]),
            rot_apply(&rotation, &translation, &img[1]),
            rot_apply(&rotation, &translation, &img[2]),
            rot_apply(&rotation, &translation, &img[3]),
        ];
        CoverPlacement {
            rotation,
            translation,
            parallelogram: img,
            corners,
            diagonal_case: diagonal,
        }
    };

    for diagonal in [diag_case, !diag_case] {
        let placement = build(diagonal);
        if placement
            .corners
            .iter()
            .all(|p| inside_rect(p, a, b, tol.max(EPS_GEOM)))
        {
            return Ok(placement);
        }
    }
    Err(GeomError::DegenerateInput(
        "shadow cover construction failed to contain all corners".into(),
    ))
}

fn rot_apply(r: &Rotation2<f64>, t: &Vector2<f64>, p: &Point2<f64>) -> Point2<f64> {
    r * p + *t
}
