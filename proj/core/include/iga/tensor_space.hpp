#pragma once

#include "iga/knot_vector.hpp"

#include <array>
#include <vector>

namespace iga {

/// One knot-span box of the parametric domain (per-direction non-empty span).
struct ElementBox {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Zero();

    double volume(int dim) const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= hi[d] - lo[d];
        return v;
    }
};

/// Tensor product of 1 to 3 univariate B-spline spaces. A 0-direction space is
/// the degenerate single-constant space used for point faces of 1D patches.
///
/// Flat basis indices run with the FIRST direction fastest:
///   flat = i0 + n0 * (i1 + n1 * i2).
class TensorSpace {
public:
    explicit TensorSpace(std::vector<KnotVector> directions);

    int dim() const { return static_cast<int>(directions_.size()); }
    const KnotVector& direction(int d) const { return directions_.at(d); }
    const std::vector<KnotVector>& directions() const { return directions_; }

    int count(int d) const { return directions_[d].basis_count(); }
    int total_count() const;

    int flatten(const std::array<int, 3>& multi) const;
    std::array<int, 3> unflatten(int flat) const;

    /// Parametric bounding box of the space.
    Vec3 domain_min() const;
    Vec3 domain_max() const;
    bool contains(const Vec3& xi, double tol = 0.0) const;

    /// Support box of one basis function: [xi_i, xi_{i+p+1}] per direction.
    std::pair<Vec3, Vec3> support(int flat) const;

    /// Per-direction basis values/derivatives at xi; combine with
    /// local_value/local_gradient below.
    std::vector<BasisDerivatives> eval_directions(const Vec3& xi, int max_order) const;

    /// Number of basis functions non-zero on one element: prod(degree_d + 1).
    int local_count() const;

    /// Flat global index of local function `loc` given the per-direction tables.
    int global_index(const std::vector<BasisDerivatives>& tables, int loc) const;

    /// Value of local function `loc` (product of per-direction row-0 entries).
    double local_value(const std::vector<BasisDerivatives>& tables, int loc) const;

    /// Parametric gradient of local function `loc`.
    Vec3 local_gradient(const std::vector<BasisDerivatives>& tables, int loc) const;

    /// All non-empty knot-span boxes, lexicographic with direction 0 fastest.
    std::vector<ElementBox> element_boxes() const;

    /// Space with direction d refined by one knot insertion at xi (geometry-level
    /// control updates live in Patch::refined).
    TensorSpace with_direction(int d, KnotVector kv) const;

    friend bool operator==(const TensorSpace&, const TensorSpace&) = default;

private:
    std::vector<KnotVector> directions_;
};

}  // namespace iga
