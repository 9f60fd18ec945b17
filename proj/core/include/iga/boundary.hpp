#pragma once

#include "iga/assembly.hpp"

namespace iga {

/// Dirichlet lifting: coefficients for the boundary dofs of one or more faces.
/// The lifted field is R_g = sum_i values[i] * phi_{dofs[i]}.
struct DirichletLift {
    std::vector<int> dofs;       // volume dof indices
    std::vector<double> values;  // matching coefficients

    /// Merge `other` on top: where dofs collide, other's value wins.
    void overwrite_with(const DirichletLift& other);
};

/// L2 projection of g onto the face span: solves M q = (int g phi_k dGamma)_k.
/// Degenerate (zero-measure) faces collapse to direct assignment of g at the
/// face image point.
DirichletLift lift_least_squares(const FaceDescriptor& face, const ScalarField& g,
                                 int points_per_direction);

/// Collocation of g at the face space's quasi-interpolation abscissae
/// (span midpoints for degree 0, Greville abscissae otherwise); the resulting
/// square system is nonsingular by total positivity.
DirichletLift lift_quasi_interpolation(const FaceDescriptor& face, const ScalarField& g);

/// Quasi-interpolation abscissae of one knot vector (see lift_quasi_interpolation).
std::vector<double> quasi_interpolation_abscissae(const KnotVector& kv);

/// Replace boundary rows by identity rows carrying the lift values and move
/// the coupling A(I,B) q to the interior right-hand side. Solving the result
/// yields coefficients whose boundary dofs equal the lift exactly.
SparseSystem homogenize(const SparseSystem& system, const DirichletLift& lift);

/// A donor field for trace operators: an immutable snapshot of one subdomain's
/// patch and coefficient vector.
struct DonorField {
    const Patch* patch = nullptr;
    Eigen::VectorXd coeffs;
};

/// Exact trace: value = sum_k alpha_k phi_k(F^{-1}(x)) in the donor space.
/// Throws Error naming the point index if inversion fails for some point.
std::vector<double> trace_exact(const DonorField& donor, const std::vector<Vec3>& points);

/// Donor solution sampled on the image of a structured parametric lattice
/// (each knot span split into `resolution` equal parts per direction), queried
/// by simplex-based linear interpolation. In 1D with resolution 1 this is
/// exactly the knot-span convex combination of the exact traces.
class LatticeInterpolant {
public:
    LatticeInterpolant(const DonorField& donor, int resolution);

    /// Linear-interpolation value at physical point x; throws if x is outside
    /// the sampled cloud hull.
    double query(const Vec3& x) const;
    bool contains(const Vec3& x) const;

    /// Largest physical cell edge, the spacing the interpolation error scales with.
    double spacing() const { return spacing_; }

private:
    int dim_ = 0;
    std::array<std::vector<double>, 3> ticks_;  // per-direction lattice parameters
    std::array<int, 3> counts_{1, 1, 1};
    std::vector<Vec3> points_;
    std::vector<double> values_;
    std::vector<std::pair<Vec3, Vec3>> cell_boxes_;  // physical AABB per cell
    double spacing_ = 0.0;

    int point_index(int i, int j, int k) const;
    int cell_count() const;
    bool query_cell(int cell, const Vec3& x, double& out) const;
};

std::vector<double> trace_interpolated(const DonorField& donor, const std::vector<Vec3>& points,
                                       int resolution);

}  // namespace iga
