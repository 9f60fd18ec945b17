#include "iga/case_geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <cmath>

namespace iga {

Patch segment_patch(double a, double b, int degree, int elements) {
    KnotVector kv = KnotVector::uniform(a, b, elements, degree);
    const auto greville = kv.greville_abscissae();
    Eigen::MatrixXd controls(kv.basis_count(), 1);
    for (int i = 0; i < kv.basis_count(); ++i) controls(i, 0) = greville[i];
    return Patch(TensorSpace({std::move(kv)}), std::move(controls));
}

Patch rectangle_patch(double x0, double x1, double y0, double y1, int degree, int nx, int ny,
                      double distortion) {
    KnotVector kvx = KnotVector::uniform(x0, x1, nx, degree);
    KnotVector kvy = KnotVector::uniform(y0, y1, ny, degree);
    const auto gx = kvx.greville_abscissae();
    const auto gy = kvy.greville_abscissae();
    const int cx = kvx.basis_count();
    const int cy = kvy.basis_count();
    TensorSpace space({kvx, kvy});

    const double hx = (x1 - x0) / nx;
    const double hy = (y1 - y0) / ny;
    Eigen::MatrixXd controls(space.total_count(), 2);
    for (int j = 0; j < cy; ++j) {
        for (int i = 0; i < cx; ++i) {
            const int flat = space.flatten({i, j, 0});
            double px = gx[i];
            double py = gy[j];
            if (distortion > 0.0 && i > 0 && i < cx - 1 && j > 0 && j < cy - 1) {
                px += distortion * hx * std::sin(7.3 * i + 3.1 * j);
                py += distortion * hy * std::cos(4.7 * i - 2.9 * j);
            }
            controls(flat, 0) = px;
            controls(flat, 1) = py;
        }
    }
    return Patch(std::move(space), std::move(controls));
}

Patch box_patch(double x0, double x1, double y0, double y1, double z0, double z1, int degree,
                int nx, int ny, int nz) {
    KnotVector kvx = KnotVector::uniform(x0, x1, nx, degree);
    KnotVector kvy = KnotVector::uniform(y0, y1, ny, degree);
    KnotVector kvz = KnotVector::uniform(z0, z1, nz, degree);
    const auto gx = kvx.greville_abscissae();
    const auto gy = kvy.greville_abscissae();
    const auto gz = kvz.greville_abscissae();
    TensorSpace space({kvx, kvy, kvz});
    Eigen::MatrixXd controls(space.total_count(), 3);
    for (int flat = 0; flat < space.total_count(); ++flat) {
        const auto multi = space.unflatten(flat);
        controls(flat, 0) = gx[multi[0]];
        controls(flat, 1) = gy[multi[1]];
        controls(flat, 2) = gz[multi[2]];
    }
    return Patch(std::move(space), std::move(controls));
}

Curve interpolating_curve(const KnotVector& kv, const Eigen::MatrixXd& points) {
    const int n = kv.basis_count();
    if (points.rows() != n) throw Error("interpolating_curve: need one point per basis function");
    const auto abscissae = kv.greville_abscissae();

    std::vector<Eigen::Triplet<double>> triplets;
    for (int row = 0; row < n; ++row) {
        const BasisSpan span = kv.eval_basis(abscissae[row]);
        for (std::size_t j = 0; j < span.values.size(); ++j)
            triplets.emplace_back(row, span.first_index + static_cast<int>(j), span.values[j]);
    }
    SparseMat collocation(n, n);
    collocation.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SparseLU<SparseMat> solver;
    solver.analyzePattern(collocation);
    solver.factorize(collocation);
    if (solver.info() != Eigen::Success) throw Error("interpolating_curve: singular collocation");

    Curve curve{kv, Eigen::MatrixXd(n, points.cols())};
    for (Eigen::Index c = 0; c < points.cols(); ++c)
        curve.controls.col(c) = solver.solve(points.col(c));
    return curve;
}

Curve arc_curve(double radius, double theta0, double theta1, int degree, int elements) {
    KnotVector kv = KnotVector::uniform(0.0, 1.0, elements, degree);
    const auto abscissae = kv.greville_abscissae();
    Eigen::MatrixXd points(kv.basis_count(), 2);
    for (int i = 0; i < kv.basis_count(); ++i) {
        const double theta = theta0 + (theta1 - theta0) * abscissae[i];
        points(i, 0) = radius * std::cos(theta);
        points(i, 1) = radius * std::sin(theta);
    }
    return interpolating_curve(kv, points);
}

double arc_fit_error(const Curve& curve, double radius) {
    const int samples = 40 * curve.kv.element_count();
    double worst = 0.0;
    for (int s = 0; s <= samples; ++s) {
        const double t = static_cast<double>(s) / samples;
        const BasisSpan span = curve.kv.eval_basis(t);
        double x = 0.0, y = 0.0;
        for (std::size_t j = 0; j < span.values.size(); ++j) {
            x += span.values[j] * curve.controls(span.first_index + j, 0);
            y += span.values[j] * curve.controls(span.first_index + j, 1);
        }
        worst = std::max(worst, std::abs(std::hypot(x, y) - radius));
    }
    return worst;
}

Curve arc_curve_within(double radius, double theta0, double theta1, int degree, double tol) {
    for (int elements = 4; elements <= 512; elements *= 2) {
        Curve curve = arc_curve(radius, theta0, theta1, degree, elements);
        if (arc_fit_error(curve, radius) <= tol) return curve;
    }
    throw Error("arc_curve_within: tolerance unreachable with 512 elements");
}

Patch radial_arc_patch(const Curve& arc, double radius, double r_in, double r_out,
                       int radial_degree, int radial_elements,
                       const std::vector<double>& radial_breakpoints) {
    KnotVector radial_kv =
        radial_breakpoints.empty()
            ? KnotVector::uniform(0.0, 1.0, radial_elements, radial_degree)
            : KnotVector::with_breakpoints(0.0, 1.0, radial_breakpoints, radial_degree);
    const auto greville = radial_kv.greville_abscissae();
    const int nr = radial_kv.basis_count();
    const int na = arc.kv.basis_count();

    TensorSpace space({radial_kv, arc.kv});
    Eigen::MatrixXd controls(space.total_count(), 2);
    for (int j = 0; j < na; ++j) {
        for (int i = 0; i < nr; ++i) {
            const double r = r_in + (r_out - r_in) * greville[i];
            const int flat = space.flatten({i, j, 0});
            controls(flat, 0) = (r / radius) * arc.controls(j, 0);
            controls(flat, 1) = (r / radius) * arc.controls(j, 1);
        }
    }
    // The collapsed-vertex sector (r_in = 0) has a degenerate edge; the
    // Jacobian keeps one sign at the interior quadrature points either way.
    return Patch(std::move(space), std::move(controls));
}

std::vector<double> graded_breakpoints(double ratio, int levels) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error("graded_breakpoints: ratio must be in (0,1)");
    std::vector<double> breaks;
    for (int k = levels - 1; k >= 1; --k) breaks.push_back(std::pow(ratio, k));
    return breaks;
}

}  // namespace iga
