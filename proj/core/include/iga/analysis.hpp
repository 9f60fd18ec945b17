#pragma once

#include "iga/patch.hpp"

namespace iga {

/// (mesh size, error) pairs with h strictly decreasing and errors positive.
struct ConvergenceSeries {
    std::vector<double> h;
    std::vector<double> error;
};

/// L2 norm of (sum alpha_j phi_j - u_exact) over the patch image, element-wise
/// Gauss quadrature.
double l2_error(const Patch& patch, const Eigen::VectorXd& coeffs, const ScalarField& u_exact,
                const std::vector<ElementRule>& rules);

/// L2 norm of the discrete field itself (u_exact = 0 case, successive-iterate
/// differences).
double l2_norm(const Patch& patch, const Eigen::VectorXd& coeffs,
               const std::vector<ElementRule>& rules);

/// H1 seminorm of the error: L2 norm of (physical gradient of u_h - grad_exact).
double h1_seminorm_error(const Patch& patch, const Eigen::VectorXd& coeffs,
                         const VectorField& grad_exact, const std::vector<ElementRule>& rules);

/// Least-squares line through (log h, log error): returns (slope, intercept).
std::pair<double, double> fit_order(const ConvergenceSeries& series);

/// Largest element diameter of the patch image (mesh size h for convergence
/// plots); measured by mapping element box corners.
double mesh_size(const Patch& patch);

/// Exponent of |df/drho| ~ rho^s along the ray corner + rho*direction: central
/// finite differences with step 1e-4*rho, then the log-log slope over `radii`.
double radial_exponent(const ScalarField& field, const Vec3& corner, const Vec3& direction,
                       const std::vector<double>& radii);

}  // namespace iga
