#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <stdexcept>
#include <string>

namespace iga {

/// Physical or parametric point. Components beyond the active dimension are zero.
using Vec3 = Eigen::Vector3d;

using SparseMat = Eigen::SparseMatrix<double>;

/// Scalar field on physical points (PDE data, boundary data, exact solutions).
using ScalarField = std::function<double(const Vec3&)>;

/// Vector field on physical points (exact gradients).
using VectorField = std::function<Vec3(const Vec3&)>;

/// Identifies one face of a tensor-product patch: fixed direction and side (0 = low, 1 = high).
struct FaceId {
    int direction = 0;
    int side = 0;

    friend bool operator==(const FaceId&, const FaceId&) = default;
};

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline ScalarField constant_field(double c) {
    return [c](const Vec3&) { return c; };
}

}  // namespace iga
