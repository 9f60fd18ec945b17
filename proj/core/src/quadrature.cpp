#include "iga/quadrature.hpp"

#include "iga/patch.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace iga {

GaussRule gauss_legendre(int n) {
    if (n < 1 || n > 30) throw Error("gauss_legendre: n must be in [1, 30]");

    // Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes, weights are
    // 2 * (first eigenvector component)^2.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = eig.eigenvalues()(i);
        const double v0 = eig.eigenvectors()(0, i);
        rule.weights[i] = 2.0 * v0 * v0;
    }
    // Enforce the exact symmetry of the rule.
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::vector<ElementRule> element_rules(const TensorSpace& space, int points_per_direction) {
    if (points_per_direction < 1) throw Error("element_rules: need at least one point");
    const GaussRule gauss = gauss_legendre(points_per_direction);
    const int dim = space.dim();
    const int q = points_per_direction;

    std::vector<ElementRule> rules;
    for (const ElementBox& box : space.element_boxes()) {
        ElementRule rule;
        rule.element = box;
        if (dim == 0) {
            rule.nodes.push_back(Vec3::Zero());
            rule.weights.push_back(1.0);
            rules.push_back(std::move(rule));
            continue;
        }
        int total = 1;
        for (int d = 0; d < dim; ++d) total *= q;
        rule.nodes.reserve(total);
        rule.weights.reserve(total);
        for (int flat = 0; flat < total; ++flat) {
            Vec3 node = Vec3::Zero();
            double weight = 1.0;
            int rest = flat;
            for (int d = 0; d < dim; ++d) {
                const int i = rest % q;
                rest /= q;
                const double half = 0.5 * (box.hi[d] - box.lo[d]);
                node[d] = box.lo[d] + half * (gauss.nodes[i] + 1.0);
                weight *= half * gauss.weights[i];
            }
            rule.nodes.push_back(node);
            rule.weights.push_back(weight);
        }
        rules.push_back(std::move(rule));
    }
    return rules;
}

double integrate_physical(const Patch& patch, const std::vector<ElementRule>& rules,
                          const ScalarField& integrand) {
    double total = 0.0;
    for (const ElementRule& rule : rules) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const Vec3& node = rule.nodes[i];
            const double jac = patch.measure(node);
            if (!(jac > 0.0))
                throw Error("integrate_physical: singular Jacobian at a quadrature node");
            total += rule.weights[i] * integrand(patch.map(node)) * jac;
        }
    }
    return total;
}

}  // namespace iga
