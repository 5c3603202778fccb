/* C ABI for the sofa-window library: convex-polytope window-passage
 * decisions. Handles are opaque; every decision function returns a
 * SofaStatus. SOFA_INFEASIBLE is a verdict, not an error. */

#ifndef SOFA_WINDOW_H
#define SOFA_WINDOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum SofaStatus {
  SOFA_OK = 0,
  SOFA_INVALID_ARGUMENT = 1,
  SOFA_DEGENERATE_INPUT = 2,
  SOFA_INFEASIBLE = 3,
  SOFA_ERROR = 4
} SofaStatus;

typedef struct SofaPolytope SofaPolytope;

/* Convex hull of n_points xyz triples (3*n_points doubles, row-major). */
int sofa_polytope_create(const double *xyz, size_t n_points,
                         SofaPolytope **out);

/* Unit-edge regular tetrahedron. */
int sofa_polytope_regular_tetrahedron(SofaPolytope **out);

void sofa_polytope_free(SofaPolytope *poly);

int sofa_polytope_counts(const SofaPolytope *poly, size_t *vertices,
                         size_t *edges, size_t *faces);

/* Minimal width over all directions; direction holds 3 doubles. */
int sofa_width3(const SofaPolytope *poly, double *width, double *direction);

/* Gate (infinite slab) of width a. */
int sofa_gate_feasible(const SofaPolytope *poly, double a, double *normal,
                       double *width);

/* Sliding through the a-by-b rectangular window; witness axes and the
 * sliding direction are written on success (3 doubles each). */
int sofa_slide_feasible(const SofaPolytope *poly, double a, double b,
                        double *x_axis, double *y_axis, double *v);

/* Fixed-orientation translational motion; rotation is a row-major 3x3
 * rotation matrix; outputs describe the sliding line. */
int sofa_fixed_orientation_slide(const SofaPolytope *poly,
                                 const double *rotation, double a, double b,
                                 double *point, double *direction);

/* Maximal shadow width over sampled projection directions (resolution of
 * at least 100 samples). */
int sofa_projection_width_max(const SofaPolytope *poly, size_t resolution,
                              double *value);

/* Minimal enclosing-cylinder diameter (resolution of at least 10000). */
int sofa_min_cylinder_diameter(const SofaPolytope *poly, size_t resolution,
                               double *value);

/* Circular-window thresholds of the unit regular tetrahedron; argmins hold
 * 2 doubles each. */
int sofa_circle_thresholds(double *delta1, double *delta2, double *argmin1,
                           double *argmin2);

/* Build and validate the tetrahedron crossing motion for a circle of
 * diameter d; SOFA_INFEASIBLE below the general-motion threshold. */
int sofa_five_step_validates(double d, size_t samples, double *max_violation);

/* Static NUL-terminated version string. */
const char *sofa_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SOFA_WINDOW_H */
