//! Rigid placements and direction helpers.

use nalgebra::{Matrix3, Point3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::tol::EPS_UNIT;

/// Unit 3D direction.
pub type Dir3 = Unit<Vector3<f64>>;
/// Unit 2D direction.
pub type Dir2 = Unit<nalgebra::Vector2<f64>>;

/// A rigid placement of a body: rotation followed by translation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidPlacement {
    pub rotation: Rotation3<f64>,
    pub translation: Vector3<f64>,
}

impl RigidPlacement {
    pub fn identity() -> Self {
        RigidPlacement {
            rotation: Rotation3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Rotation3<f64>, translation: Vector3<f64>) -> Self {
        RigidPlacement {
            rotation,
            translation,
        }
    }

    pub fn apply(&self, p: &Point3<f64>) -> Point3<f64> {
        self.rotation * p + self.translation
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &RigidPlacement) -> RigidPlacement {
        RigidPlacement {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidPlacement {
        let rinv = self.rotation.inverse();
        RigidPlacement {
            rotation: rinv,
            translation: -(rinv * self.translation),
        }
    }

    /// Orthonormality check: RᵀR = I within `tol`, det = +1.
    pub fn is_valid(&self, tol: f64) -> bool {
        let m = self.rotation.matrix();
        let gram = m.transpose() * m;
        let dev = (gram - Matrix3::identity()).abs().max();
        dev <= tol && (m.determinant() - 1.0).abs() <= 10.0 * tol
    }
}

/// Rotation mapping the orthonormal right-handed frame `(a, b, a×b)` onto
/// `(ta, tb, ta×tb)`.
pub fn rotation_between_frames(a: &Dir3, b: &Dir3, ta: &Dir3, tb: &Dir3) -> Rotation3<f64> {
    let c = a.cross(b);
    let tc = ta.cross(tb);
    let src = Matrix3::from_columns(&[a.into_inner(), b.into_inner(), c]);
    let dst = Matrix3::from_columns(&[ta.into_inner(), tb.into_inner(), tc]);
    Rotation3::from_matrix_unchecked(dst * src.transpose())
}

/// Deterministic orthonormal pair spanning the plane perpendicular to `n`.
pub fn orthonormal_pair(n: &Dir3) -> (Dir3, Dir3) {
    // Pick the coordinate axis least aligned with n, then Gram-Schmidt.
    let ax = n.x.abs();
    let ay = n.y.abs();
    let az = n.z.abs();
    let seed = if ax <= ay && ax <= az {
        Vector3::x()
    } else if ay <= az {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let p = Unit::new_normalize(seed - n.into_inner() * seed.dot(n));
    let q = Unit::new_normalize(n.cross(&p));
    (p, q)
}

/// Signed angle rotating `from` onto `to` about `axis`; both must be
/// perpendicular to `axis`.
pub fn signed_angle_about(axis: &Dir3, from: &Dir3, to: &Dir3) -> f64 {
    let s = axis.dot(&from.cross(to));
    let c = from.dot(to);
    s.atan2(c)
}

/// Lexicographic comparison of vectors, used for deterministic tie-breaks.
pub fn lex_less(a: &Vector3<f64>, b: &Vector3<f64>) -> bool {
    if a.x != b.x {
        return a.x < b.x;
    }
    if a.y != b.y {
        return a.y < b.y;
    }
    a.z < b.z
}

/// Canonical sign for a unit vector: first coordinate with magnitude above
/// `EPS_UNIT` is made positive.
pub fn lex_canonical_sign(v: &Dir3) -> Dir3 {
    for c in [v.x, v.y, v.z] {
        if c > EPS_UNIT {
            return *v;
        }
        if c < -EPS_UNIT {
            return Unit::new_unchecked(-v.into_inner());
        }
    }
    *v
}
