//! C ABI for the window-passage decision procedures.
//!
//! Opaque polytope handles, status-code returns, caller-owned output
//! buffers. The matching header lives at `include/sofa_window.h`; it is
//! maintained by hand (the build environment has no cbindgen) and a test
//! keeps it in sync with the exported symbol list.

use libc::{c_char, size_t};
use nalgebra::{Matrix3, Point3, Rotation3, Vector3};

use sofa_window::circular::{find_delta1, find_delta2, five_step_motion, min_cylinder_diameter};
use sofa_window::geom::{build_polytope, regular_tetrahedron, Polytope, RigidPlacement};
use sofa_window::motion::{validate_path, WindowSpec};
use sofa_window::sliding::slide_feasible;
use sofa_window::translation::{fixed_orientation_slide, gate_feasible, projection_width_max};

use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes shared with the C header.
pub const SOFA_OK: i32 = 0;
pub const SOFA_INVALID_ARGUMENT: i32 = 1;
pub const SOFA_DEGENERATE_INPUT: i32 = 2;
/// A verdict, not an error: the query is well-posed and the answer is no.
pub const SOFA_INFEASIBLE: i32 = 3;
pub const SOFA_ERROR: i32 = 4;

/// Opaque handle around a validated polytope.
pub struct SofaPolytope {
    inner: Polytope,
}

fn guard<F: FnOnce() -> i32>(f: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => SOFA_ERROR,
    }
}

unsafe fn write3(dst: *mut f64, v: &Vector3<f64>) {
    if !dst.is_null() {
        *dst.add(0) = v.x;
        *dst.add(1) = v.y;
        *dst.add(2) = v.z;
    }
}

/// Build the convex hull of `n_points` xyz triples (row-major, 3·n doubles).
///
/// # Safety
/// `xyz` must point to `3 * n_points` readable doubles and `out` to a
/// writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn sofa_polytope_create(
    xyz: *const f64,
    n_points: size_t,
    out: *mut *mut SofaPolytope,
) -> i32 {
    if xyz.is_null() || out.is_null() || n_points < 4 {
        return SOFA_INVALID_ARGUMENT;
    }
    let pts: Vec<Point3<f64>> = (0..n_points)
        .map(|i| Point3::new(*xyz.add(3 * i), *xyz.add(3 * i + 1), *xyz.add(3 * i + 2)))
        .collect();
    guard(|| match build_polytope(&pts) {
        Ok(poly) => {
            *out = Box::into_raw(Box::new(SofaPolytope { inner: poly }));
            SOFA_OK
        }
        Err(_) => SOFA_DEGENERATE_INPUT,
    })
}

/// Unit-edge regular tetrahedron.
///
/// # Safety
/// `out` must be a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn sofa_polytope_regular_tetrahedron(out: *mut *mut SofaPolytope) -> i32 {
    if out.is_null() {
        return SOFA_INVALID_ARGUMENT;
    }
    guard(|| {
        *out = Box::into_raw(Box::new(SofaPolytope {
            inner: regular_tetrahedron(),
        }));
        SOFA_OK
    })
}

/// Release a handle created by this library. Null is ignored.
///
/// # Safety
/// `poly` must come from a creation function of this library at most once.
#[no_mangle]
pub unsafe extern "C" fn sofa_polytope_free(poly: *mut SofaPolytope) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Hull counts: vertices, edges, faces.
///
/// # Safety
/// `poly` must be a live handle; output pointers may be null to skip.
#[no_mangle]
pub unsafe extern "C" fn sofa_polytope_counts(
    poly: *const SofaPolytope,
    vertices: *mut size_t,
    edges: *mut size_t,
    faces: *mut size_t,
) -> i32 {
    let Some(p) = poly.as_ref() else {
        return SOFA_INVALID_ARGUMENT;
    };
    if !vertices.is_null() {
        *vertices = p.inner.num_vertices();
    }
    if !edges.is_null() {
        *edges = p.inner.edges().len();
    }
    if !faces.is_null() {
        *faces = p.inner.faces().len();
    }
    SOFA_OK
}

/// Minimal width and an achieving direction.
///
/// # Safety
/// `poly` must be a live handle; `direction` must hold 3 doubles if set.
#[no_mangle]
pub unsafe extern "C" fn sofa_width3(
    poly: *const SofaPolytope,
    width: *mut f64,
    direction: *mut f64,
) -> i32 {
    let Some(p) = poly.as_ref() else {
        return SOFA_INVALID_ARGUMENT;
    };
    guard(|| {
        let (w, dir) = p.inner.width3();
        if !width.is_null() {
            *width = w;
        }
        write3(direction, &dir);
        SOFA_OK
    })
}

/// Gate feasibility: SOFA_OK with the slab normal and width when the body
/// passes a gate of width `a`, SOFA_INFEASIBLE otherwise.
///
/// # Safety
/// `poly` live handle; `normal` 3 doubles and `width` 1 double if set.
#[no_mangle]
pub unsafe extern "C" fn sofa_gate_feasible(
    poly: *const SofaPolytope,
    a: f64,
    normal: *mut f64,
    width: *mut f64,
) -> i32 {
    let Some(p) = poly.as_ref() else {
        return SOFA_INVALID_ARGUMENT;
    };
    if !(a > 0.0) {
        return SOFA_INVALID_ARGUMENT;
    }
    guard(|| match gate_feasible(&p.inner, a) {
        Some(w) => {
            write3(normal, &w.normal);
            if !width.is_null() {
                *width = w.width;
            }
            SOFA_OK
        }
        None => SOFA_INFEASIBLE,
    })
}

/// Sliding feasibility through the a×b window; on success the witness axes
/// and sliding direction are written.
///
/// # Safety
/// `poly` live handle; each output holds 3 doubles if set.
#[no_mangle]
pub unsafe extern "C" fn sofa_slide_feasible(
    poly: *const SofaPolytope,
    a: f64,
    b: f64,
    x_axis: *mut f64,
    y_axis: *mut f64,
    v: *mut f64,
) -> i32 {
    let Some(p) = poly.as_ref() else {
        return SOFA_INVALID_ARGUMENT;
    };
    if !(a > 0.0 && b > 0.0) {
        return SOFA_INVALID_ARGUMENT;
    }
    guard(|| match slide_feasible(&p.inner, a, b) {
        Some(w) => {
            write3(x_axis, &w.x_axis);
            write3(y_axis, &w.y_axis);
            write3(v, &w.v);
            SOFA_OK
        }
        None => SOFA_INFEASIBLE,
    })
}

/// Fixed-orientation translational feasibility. `rotation` is a row-major
/// 3×3 rotation matrix; outputs are the sliding line.
///
/// # Safety
/// `poly` live handle; `rotation` 9 readable doubles; outputs 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn sofa_fixed_orientation_slide(
    poly: *const SofaPolytope,
    rotation: *const f64,
    a: f64,
    b: f64,
    point: *mut f64,
    direction: *mut f64,
) -> i32 {
    let Some(p) = poly.as_ref() else {
        return SOFA_INVALID_ARGUMENT;
    };
    if rotation.is_null() || !(a > 0.0 && b > 0.0) {
        return SOFA_INVALID_ARGUMENT;
    }
    let m = Matrix3::new(
        *rotation.add(0),
        *rotation.add(1),
        *rotation.add(2),
        *rotation.add(3),
        *rotation.add(4),
        *rotation.add(5),
        *rotation.add(6),
        *rotation.add(7),
        *rotation.add(8),
    );
    let rot = Rotation3::from_matrix_unchecked(m);
    if !RigidPlacement::new(rot, Vector3::zeros()).is_valid(1e-8) {
        return SOFA_INVALID_ARGUMENT;
    }
    guard(|| match fixed_orientation_slide(&p.inner, &rot, a, b) {
        Ok(Some(line)) => {
            write3(point, &line.point.coords);
            write3(direction, &line.direction);
            SOFA_OK
        }
        Ok(None) => SOFA_INFEASIBLE,
        Err(_) => SOFA_ERROR,
    })
}

/// Maximal shadow width over sampled projection directions (diagnostic).
///
/// # Safety
/// `poly` live handle; `value` one writable double.
#[no_mangle]
pub unsafe extern "C" fn sofa_projection_width_max(
    poly: *const SofaPolytope,
    resolution: size_t,
    value: *mut f64,
) -> i32 {
    let Some(p) = poly.as_ref() else {
        return SOFA_INVALID_ARGUMENT;
    };
    if resolution < 100 || value.is_null() {
        return SOFA_INVALID_ARGUMENT;
    }
    guard(|| {
        *value = projection_width_max(&p.inner, resolution);
        SOFA_OK
    })
}

/// Minimal enclosing-cylinder diameter over sampled axes.
///
/// # Safety
/// `poly` live handle; `value` one writable double.
#[no_mangle]
pub unsafe extern "C" fn sofa_min_cylinder_diameter(
    poly: *const SofaPolytope,
    resolution: size_t,
    value: *mut f64,
) -> i32 {
    let Some(p) = poly.as_ref() else {
        return SOFA_INVALID_ARGUMENT;
    };
    if resolution < 10_000 || value.is_null() {
        return SOFA_INVALID_ARGUMENT;
    }
    guard(|| {
        *value = min_cylinder_diameter(&p.inner, resolution);
        SOFA_OK
    })
}

/// Circular-window thresholds of the unit regular tetrahedron.
///
/// # Safety
/// Non-null outputs: `delta1`, `delta2` one double; argmins two doubles.
#[no_mangle]
pub unsafe extern "C" fn sofa_circle_thresholds(
    delta1: *mut f64,
    delta2: *mut f64,
    argmin1: *mut f64,
    argmin2: *mut f64,
) -> i32 {
    guard(|| {
        let d1 = find_delta1();
        let d2 = find_delta2();
        if !delta1.is_null() {
            *delta1 = d1.value;
        }
        if !delta2.is_null() {
            *delta2 = d2.value;
        }
        if !argmin1.is_null() {
            *argmin1.add(0) = d1.argmin.0;
            *argmin1.add(1) = d1.argmin.1;
        }
        if !argmin2.is_null() {
            *argmin2.add(0) = d2.argmin.0;
            *argmin2.add(1) = d2.argmin.1;
        }
        SOFA_OK
    })
}

/// Build the tetrahedron crossing motion for a circle of diameter `d` and
/// validate it; SOFA_INFEASIBLE below the general-motion threshold.
///
/// # Safety
/// `max_violation`, if set, must be one writable double.
#[no_mangle]
pub unsafe extern "C" fn sofa_five_step_validates(
    d: f64,
    samples: size_t,
    max_violation: *mut f64,
) -> i32 {
    if !(d > 0.0) || samples < 2 {
        return SOFA_INVALID_ARGUMENT;
    }
    guard(|| match five_step_motion(d) {
        Ok(path) => {
            let tetra = regular_tetrahedron();
            let report = validate_path(&tetra, &path, &WindowSpec::Circle { d }, samples, 1e-9);
            if !max_violation.is_null() {
                *max_violation = report.max_violation;
            }
            if report.passed() {
                SOFA_OK
            } else {
                SOFA_ERROR
            }
        }
        Err(_) => SOFA_INFEASIBLE,
    })
}

const VERSION: &[u8] = concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes();

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sofa_version() -> *const c_char {
    VERSION.as_ptr() as *const c_char
}

/// Exported symbol list, mirrored by the header (checked by a test).
pub const EXPORTS: [&str; 12] = [
    "sofa_polytope_create",
    "sofa_polytope_regular_tetrahedron",
    "sofa_polytope_free",
    "sofa_polytope_counts",
    "sofa_width3",
    "sofa_gate_feasible",
    "sofa_slide_feasible",
    "sofa_fixed_orientation_slide",
    "sofa_projection_width_max",
    "sofa_min_cylinder_diameter",
    "sofa_circle_thresholds",
    "sofa_five_step_validates",
];
