//! Smallest enclosing disc, randomized incremental.

use nalgebra::Point2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Point2<f64>,
    pub radius: f64,
}

impl Disc {
    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    pub fn contains(&self, p: &Point2<f64>, tol: f64) -> bool {
        (p - self.center).norm() <= self.radius + tol
    }
}

fn disc_from_two(a: &Point2<f64>, b: &Point2<f64>) -> Disc {
    let center = Point2::from((a.coords + b.coords) / 2.0);
    Disc {
        center,
        radius: (a - center).norm(),
    }
}

fn disc_from_three(a: &Point2<f64>, b: &Point2<f64>, c: &Point2<f64>) -> Option<Disc> {
    let bx = b.x - a.x;
    let by = b.y - a.y;
    let cx = c.x - a.x;
    let cy = c.y - a.y;
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-14 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point2::new(a.x + ux, a.y + uy);
    Some(Disc {
        center,
        radius: (a - center).norm(),
    })
}

const CONTAIN_SLACK: f64 = 1e-12;

fn circle_two_points(pts: &[Point2<f64>], p: &Point2<f64>, q: &Point2<f64>) -> Disc {
    let base = disc_from_two(p, q);
    let mut left: Option<Disc> = None;
    let mut right: Option<Disc> = None;
    let pq = q - p;
    for r in pts {
        if base.contains(r, CONTAIN_SLACK * (1.0 + base.radius)) {
            continue;
        }
        let side = pq.perp(&(r - p));
        if let Some(c) = disc_from_three(p, q, r) {
            let cside = pq.perp(&(c.center - p));
            if side > 0.0 && (left.is_none() || cside > pq.perp(&(left.unwrap().center - p))) {
                left = Some(c);
            } else if side < 0.0
                && (right.is_none() || cside < pq.perp(&(right.unwrap().center - p)))
            {
                right = Some(c);
            }
        }
    }
    match (left, right) {
        (None, None) => base,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

fn circle_one_point(pts: &[Point2<f64>], p: &Point2<f64>) -> Disc {
    let mut c = Disc {
        center: *p,
        radius: 0.0,
    };
    for (i, q) in pts.iter().enumerate() {
        if !c.contains(q, CONTAIN_SLACK * (1.0 + c.radius)) {
            c = if c.radius == 0.0 {
                disc_from_two(p, q)
            } else {
                circle_two_points(&pts[..=i], p, q)
            };
        }
    }
    c
}

/// Smallest disc containing all points. Expected linear time after a seeded
/// deterministic shuffle.
pub fn enclosing_disc(points: &[Point2<f64>]) -> Disc {
    assert!(!points.is_empty(), "enclosing_disc needs at least one point");
    let mut pts = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5347_2d44);
    pts.shuffle(&mut rng);
    let mut c = Disc {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        let p = pts[i];
        if !c.contains(&p, CONTAIN_SLACK * (1.0 + c.radius)) {
            c = circle_one_point(&pts[..i], &p);
        }
    }
    c
}

/// Diameter of the smallest enclosing disc of a triangle given its squared
/// side lengths: circumdiameter for acute triangles, longest side otherwise.
pub fn triangle_enclosing_diameter(sides_sq: [f64; 3]) -> Result<f64, super::GeomError> {
    let [a2, b2, c2] = sides_sq;
    if a2 < 0.0 || b2 < 0.0 || c2 < 0.0 {
        return Err(super::GeomError::DegenerateTriangle);
    }
    let (a, b, c) = (a2.sqrt(), b2.sqrt(), c2.sqrt());
    let max = a.max(b).max(c);
    let sum = a + b + c;
    if 2.0 * max > sum + 1e-9 * (1.0 + sum) {
        return Err(super::GeomError::DegenerateTriangle);
    }
    let max2 = a2.max(b2).max(c2);
    let rest = a2 + b2 + c2 - max2;
    if max2 >= rest {
        // right or obtuse: half the longest edge rule
        return Ok(max);
    }
    let den = 2.0 * (a2 * b2 + a2 * c2 + b2 * c2) - a2 * a2 - b2 * b2 - c2 * c2;
    Ok(2.0 * (a2 * b2 * c2 / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn equilateral_triangle_circumdiameter() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3.0_f64.sqrt() / 2.0),
        ];
        let d = enclosing_disc(&pts);
        assert_relative_eq!(d.diameter(), 2.0 / 3.0_f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(
            triangle_enclosing_diameter([1.0, 1.0, 1.0]).unwrap(),
            2.0 / 3.0_f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn obtuse_triangle_uses_longest_edge() {
        // sides 1, 1, 1.9
        let d = triangle_enclosing_diameter([1.0, 1.0, 1.9 * 1.9]).unwrap();
        assert_relative_eq!(d, 1.9, epsilon = 1e-12);
    }

    #[test]
    fn right_triangle_hypotenuse() {
        let d = triangle_enclosing_diameter([1.0, 1.0, 2.0]).unwrap();
        assert_relative_eq!(d, 2.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn triangle_formula_matches_generic_disc() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let pts = [
                Point2::new(rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0),
                Point2::new(rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0),
                Point2::new(rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0),
            ];
            let s01 = (pts[0] - pts[1]).norm_squared();
            let s02 = (pts[0] - pts[2]).norm_squared();
            let s12 = (pts[1] - pts[2]).norm_squared();
            let Ok(from_formula) = triangle_enclosing_diameter([s01, s02, s12]) else {
                continue;
            };
            let generic = enclosing_disc(&pts).diameter();
            assert_relative_eq!(from_formula, generic, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn all_points_inside_and_supports_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let pts: Vec<Point2<f64>> = (0..20)
                .map(|_| Point2::new(rng.random::<f64>() * 4.0, rng.random::<f64>() * 3.0))
                .collect();
            let d = enclosing_disc(&pts);
            for p in &pts {
                assert!(d.contains(p, 1e-9));
            }
            // Removing any support point strictly shrinks the disc.
            let supports: Vec<usize> = (0..pts.len())
                .filter(|&i| ((pts[i] - d.center).norm() - d.radius).abs() <= 1e-9)
                .collect();
            assert!(supports.len() >= 2 && supports.len() <= 3);
            for &s in &supports {
                let rest: Vec<Point2<f64>> = pts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != s)
                    .map(|(_, p)| *p)
                    .collect();
                let smaller = enclosing_disc(&rest);
                assert!(smaller.radius < d.radius - 1e-12);
            }
        }
    }
}
