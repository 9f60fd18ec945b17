#pragma once

#include "iga/patch.hpp"

namespace iga {

/// A univariate B-spline curve in the plane.
struct Curve {
    KnotVector kv;
    Eigen::MatrixXd controls;  // basis_count x dim
};

/// 1D identity patch on [a, b]: control values are the Greville abscissae, so
/// F(xi) = xi exactly.
Patch segment_patch(double a, double b, int degree, int elements);

/// Axis-aligned rectangle with straight edges. distortion > 0 perturbs the
/// interior control points by a deterministic pattern scaled by the element
/// size, keeping the boundary and domain exact while making F non-affine.
Patch rectangle_patch(double x0, double x1, double y0, double y1, int degree, int nx, int ny,
                      double distortion = 0.0);

/// Axis-aligned box (identity-style geometry).
Patch box_patch(double x0, double x1, double y0, double y1, double z0, double z1, int degree,
                int nx, int ny, int nz);

/// Curve through the given points at the Greville abscissae of the knot vector
/// (Schoenberg-Whitney collocation; nonsingular by total positivity).
Curve interpolating_curve(const KnotVector& kv, const Eigen::MatrixXd& points);

/// B-spline approximation of the circular arc radius*(cos t, sin t),
/// t in [theta0, theta1], parameter domain [0, 1].
Curve arc_curve(double radius, double theta0, double theta1, int degree, int elements);

/// Max radial deviation of the curve from the circle over dense samples.
double arc_fit_error(const Curve& curve, double radius);

/// Smallest dyadic element count whose arc fit error is within tol (absolute,
/// physical units). Throws if 512 elements are not enough.
Curve arc_curve_within(double radius, double theta0, double theta1, int degree, double tol);

/// Ruled patch r(xi) * C(eta)/radius between two radii of the arc: direction 0
/// is radial (exactly linear), direction 1 follows the arc curve. r_in = 0
/// yields the collapsed-vertex sector used for corner zooming.
/// radial_breakpoints are interior breakpoints of the radial knot vector in
/// (0, 1); empty means uniform with `radial_elements`.
Patch radial_arc_patch(const Curve& arc, double radius, double r_in, double r_out,
                       int radial_degree, int radial_elements,
                       const std::vector<double>& radial_breakpoints = {});

/// Geometrically graded interior breakpoints accumulating at 0:
/// ratio^(levels-1), ..., ratio^2, ratio.
std::vector<double> graded_breakpoints(double ratio, int levels);

}  // namespace iga
