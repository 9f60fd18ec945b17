#pragma once

#include "iga/tensor_space.hpp"

namespace iga {

class Patch;

/// Gauss-Legendre rule on [-1, 1]: exact for polynomials of degree <= 2n-1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes and weights on one parametric element box. Weights are positive and
/// sum to the element's parametric volume.
struct ElementRule {
    ElementBox element;
    std::vector<Vec3> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights on [-1,1] via the Golub-Welsch eigenvalue
/// method, symmetrized. Valid for 1 <= n <= 30.
GaussRule gauss_legendre(int n);

/// One tensor Gauss rule per non-empty knot-span box of the space. Element
/// boxes tile the parametric domain exactly; spans of zero width (repeated
/// knots) produce no element. A 0-dimensional space yields a single
/// point-evaluation rule of weight 1.
std::vector<ElementRule> element_rules(const TensorSpace& space, int points_per_direction);

/// Integral over the physical patch image of a scalar integrand:
/// sum of w * f(F(node)) * |det DF(node)|. Throws on a singular Jacobian node.
double integrate_physical(const Patch& patch, const std::vector<ElementRule>& rules,
                          const ScalarField& integrand);

}  // namespace iga
