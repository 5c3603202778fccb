//! Numeric tolerances shared by the geometric kernel and the decision
//! procedures.
//!
//! All comparisons against window dimensions are closed (non-strict):
//! touching contact counts as feasible, with a slack of [`EPS_GEOM`].

use serde::{Deserialize, Serialize};

/// Containment slack for geometric predicates.
pub const EPS_GEOM: f64 = 1e-9;
/// Unit-vector normalization tolerance.
pub const EPS_UNIT: f64 = 1e-12;
/// Stopping step for parameter-space optimizers (grid refinement).
pub const OPT_TOL: f64 = 1e-6;

/// Tolerance record used to fill scene defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eps_geom: f64,
    pub eps_unit: f64,
    pub opt_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_geom: EPS_GEOM,
            eps_unit: EPS_UNIT,
            opt_tol: OPT_TOL,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> bool {
        self.eps_geom > 0.0 && self.eps_unit > 0.0 && self.opt_tol > 0.0
    }
}
