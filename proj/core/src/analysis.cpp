#include "iga/analysis.hpp"

#include <cmath>

namespace iga {

namespace {

double quadrature_l2(const Patch& patch, const std::vector<ElementRule>& rules,
                     const std::function<double(const Vec3&)>& squared_param_integrand) {
    double sum = 0.0;
    for (const ElementRule& rule : rules)
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            sum += rule.weights[q] * squared_param_integrand(rule.nodes[q]) *
                   patch.measure(rule.nodes[q]);
    return std::sqrt(std::max(0.0, sum));
}

}  // namespace

double l2_error(const Patch& patch, const Eigen::VectorXd& coeffs, const ScalarField& u_exact,
                const std::vector<ElementRule>& rules) {
    return quadrature_l2(patch, rules, [&](const Vec3& xi) {
        const double diff = field_value(patch.space(), coeffs, xi) - u_exact(patch.map(xi));
        return diff * diff;
    });
}

double l2_norm(const Patch& patch, const Eigen::VectorXd& coeffs,
               const std::vector<ElementRule>& rules) {
    return l2_error(patch, coeffs, constant_field(0.0), rules);
}

double h1_seminorm_error(const Patch& patch, const Eigen::VectorXd& coeffs,
                         const VectorField& grad_exact, const std::vector<ElementRule>& rules) {
    return quadrature_l2(patch, rules, [&](const Vec3& xi) {
        const Vec3 diff = field_gradient_physical(patch, coeffs, xi) - grad_exact(patch.map(xi));
        return diff.squaredNorm();
    });
}

std::pair<double, double> fit_order(const ConvergenceSeries& series) {
    const int n = static_cast<int>(series.h.size());
    if (n < 3) throw Error("fit_order: need at least 3 points");
    if (series.error.size() != series.h.size()) throw Error("fit_order: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        if (!(series.h[i] > 0.0) || !(series.error[i] > 0.0))
            throw Error("fit_order: h and errors must be positive");
        if (i > 0 && !(series.h[i] < series.h[i - 1]))
            throw Error("fit_order: h must be strictly decreasing");
        const double x = std::log(series.h[i]);
        const double y = std::log(series.error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

double mesh_size(const Patch& patch) {
    double h = 0.0;
    const int dim = patch.dim_param();
    for (const ElementBox& box : patch.space().element_boxes()) {
        Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
        for (int corner = 0; corner < (1 << dim); ++corner) {
            Vec3 xi = box.lo;
            for (int d = 0; d < dim; ++d)
                if (corner & (1 << d)) xi[d] = box.hi[d];
            const Vec3 x = patch.map(xi);
            lo = lo.cwiseMin(x);
            hi = hi.cwiseMax(x);
        }
        h = std::max(h, (hi - lo).norm());
    }
    return h;
}

double radial_exponent(const ScalarField& field, const Vec3& corner, const Vec3& direction,
                       const std::vector<double>& radii) {
    if (radii.size() < 2) throw Error("radial_exponent: need at least 2 radii");
    const Vec3 dir = direction.normalized();
    ConvergenceSeries series;
    for (auto it = radii.rbegin(); it != radii.rend(); ++it) {  // store with rho decreasing
        const double rho = *it;
        const double step = 1e-4 * rho;
        const double fp = field(corner + (rho + step) * dir);
        const double fm = field(corner + (rho - step) * dir);
        const double deriv = std::abs((fp - fm) / (2.0 * step));
        if (!(deriv > 0.0)) throw Error("radial_exponent: vanishing radial derivative sample");
        series.h.push_back(rho);
        series.error.push_back(deriv);
    }
    // log-log slope of |du/drho| against rho; reuse the line fit.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(series.h.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log(series.h[i]);
        const double y = std::log(series.error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace iga
