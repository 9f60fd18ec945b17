#pragma once

#include "iga/types.hpp"

#include <vector>

namespace iga {

/// Values and derivatives of the degree+1 basis functions non-zero on one span.
/// Row k holds the k-th derivatives of functions first_index .. first_index+degree.
struct BasisDerivatives {
    int first_index = 0;
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major, rows x cols

    double operator()(int order, int j) const { return data[order * cols + j]; }
};

/// Values of the non-zero basis functions at one parameter.
struct BasisSpan {
    int first_index = 0;
    std::vector<double> values;
};

/// Open, non-decreasing knot sequence with a degree.
///
/// Invariants enforced at construction:
///  - knots non-decreasing,
///  - first and last knot have multiplicity exactly degree+1 (open/clamped),
///  - no interior knot multiplicity exceeds degree+1,
///  - basis count n = knot count - degree - 1 >= 1.
/// Knots closer than 1e-14 are snapped equal at construction; all later
/// comparisons are exact on the stored values.
class KnotVector {
public:
    KnotVector(std::vector<double> knots, int degree);

    /// Uniform open knot vector on [a, b] with the given number of elements.
    static KnotVector uniform(double a, double b, int elements, int degree);

    /// Open knot vector on [a, b] whose interior knots are the given strictly
    /// increasing breakpoints (each inserted once).
    static KnotVector with_breakpoints(double a, double b, const std::vector<double>& interior,
                                       int degree);

    int degree() const { return degree_; }
    const std::vector<double>& knots() const { return knots_; }
    int knot_count() const { return static_cast<int>(knots_.size()); }
    int basis_count() const { return knot_count() - degree_ - 1; }

    double domain_min() const { return knots_.front(); }
    double domain_max() const { return knots_.back(); }

    int multiplicity(double value) const;

    /// Index i of the non-empty span with knots[i] <= xi < knots[i+1];
    /// xi == domain_max() returns the last non-empty span.
    /// Throws for xi outside [domain_min, domain_max].
    int find_span(double xi) const;

    /// The degree+1 basis values non-zero at xi (Cox-de Boor, NURBS Book A2.2).
    /// Values are non-negative and sum to 1.
    BasisSpan eval_basis(double xi) const;

    /// Basis values and derivatives up to max_order (NURBS Book A2.3).
    /// Row 0 equals eval_basis; row 1 follows the degree-p derivative recurrence.
    BasisDerivatives eval_basis_derivatives(double xi, int max_order) const;

    /// Single basis function N_{i,p}(xi); zero outside its support. Mainly for tests
    /// and local-support checks; prefer eval_basis in loops.
    double eval_one(int i, double xi) const;

    /// Midpoints of the non-empty knot spans, in order.
    std::vector<double> span_midpoints() const;

    /// Non-empty spans as (lo, hi) pairs.
    std::vector<std::pair<double, double>> elements() const;
    int element_count() const { return static_cast<int>(elements().size()); }

    /// Greville abscissae (inner averages of degree consecutive knots), one per
    /// basis function. For degree 0 these are the span midpoints.
    std::vector<double> greville_abscissae() const;

    /// Knot vector after inserting xi once (no control-point update).
    KnotVector inserted(double xi) const;

    friend bool operator==(const KnotVector&, const KnotVector&) = default;

private:
    std::vector<double> knots_;
    int degree_ = 0;
};

/// Single knot insertion for a curve: returns the refined knot vector and the
/// updated control rows (controls: basis_count x d). The curve as a function of
/// the parameter is unchanged. Throws if xi is not strictly interior or the
/// resulting multiplicity would exceed the degree.
std::pair<KnotVector, Eigen::MatrixXd> insert_knot(const KnotVector& kv,
                                                   const Eigen::MatrixXd& controls, double xi);

}  // namespace iga
