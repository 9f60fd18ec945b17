#pragma once

#include "iga/quadrature.hpp"
#include "iga/tensor_space.hpp"

#include <memory>

namespace iga {

/// Outcome of Newton inversion of the geometry map.
struct InvertResult {
    Vec3 xi = Vec3::Zero();
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool outside = false;  // residual stagnated with the iterate pinned to the box boundary
};

class Patch;

/// Restriction of a patch to one parametric face: a patch of one lower
/// parametric dimension whose control grid is the corresponding slice of the
/// volume grid, plus the slice's volume dof indices.
struct FaceDescriptor {
    FaceId id;
    Patch* patch() const { return face_patch.get(); }
    std::shared_ptr<Patch> face_patch;
    std::vector<int> volume_dofs;    // volume index of face dof k (face flat order)
    double fixed_value = 0.0;        // parameter value of the fixed direction
    int volume_dim = 0;

    /// Volume parametric point corresponding to face parametric point s.
    Vec3 embed(const Vec3& s) const;
};

/// Tensor-product B-spline geometry: the isogeometric map F from the parametric
/// box onto the physical patch, plus the discrete space living on it.
///
/// Immutable after construction; evaluation members are const and reentrant.
class Patch {
public:
    /// controls: total_count x dim_phys, rows in flat (first-direction-fastest) order.
    /// When check_jacobian is set (square maps only) the Jacobian determinant is
    /// required to keep one sign at the default quadrature points.
    Patch(TensorSpace space, Eigen::MatrixXd controls, bool check_jacobian = true);

    /// Placeholder 0-dimensional patch (a single point at the origin).
    Patch() : Patch(TensorSpace({}), Eigen::MatrixXd::Zero(1, 1), false) {}

    const TensorSpace& space() const { return space_; }
    const Eigen::MatrixXd& controls() const { return controls_; }
    int dim_param() const { return space_.dim(); }
    int dim_phys() const { return static_cast<int>(controls_.cols()); }

    /// F(xi): sum of non-zero basis values times control points.
    Vec3 map(const Vec3& xi) const;

    /// Jacobian DF(xi), zero-padded to 3x3; the top-left dim_phys x dim_param
    /// block is meaningful.
    Eigen::Matrix3d jacobian(const Vec3& xi) const;

    /// |det DF| for square maps, sqrt(det(DF^T DF)) for embedded faces, and 1
    /// for a 0-dimensional (point) patch.
    double measure(const Vec3& xi) const;

    /// Newton inversion of F, clamped to the parametric box, with coarse
    /// multi-start restarts when the first path stalls. Initial guess defaults
    /// to the box center. Converges when the residual drops below 1e-12 times
    /// the patch diameter; `outside` is set when the iterate stays pinned to
    /// the box boundary with a stagnating residual.
    InvertResult invert_map(const Vec3& x) const;
    InvertResult invert_map(const Vec3& x, const Vec3& guess) const;

    /// invert_map that throws on failure.
    Vec3 invert_map_checked(const Vec3& x) const;

    /// Face extraction; the face patch maps the parametric face onto the
    /// physical boundary portion.
    FaceDescriptor face(const FaceId& id) const;
    FaceDescriptor face(int direction, int side) const { return face({direction, side}); }

    /// Patch with one knot inserted in the given direction; geometry and its
    /// parameterization are unchanged.
    Patch refined(int direction, double xi) const;

    /// Dyadic refinement: every non-empty span of every direction is split in
    /// half `times` times. Geometry unchanged.
    Patch refined_dyadic(int times) const;

    /// Diagonal of the control-grid bounding box (scale for tolerances).
    double diameter() const { return diameter_; }

    Vec3 param_center() const;

private:
    TensorSpace space_;
    Eigen::MatrixXd controls_;
    double diameter_ = 0.0;

    InvertResult newton_invert(const Vec3& x, const Vec3& guess) const;
};

/// Value of the discrete field sum_j coeffs[j] * basis_j at parametric xi.
double field_value(const TensorSpace& space, const Eigen::VectorXd& coeffs, const Vec3& xi);

/// Parametric gradient of the discrete field at xi.
Vec3 field_gradient_param(const TensorSpace& space, const Eigen::VectorXd& coeffs, const Vec3& xi);

/// Physical gradient DF^{-T} grad_param at xi (square maps).
Vec3 field_gradient_physical(const Patch& patch, const Eigen::VectorXd& coeffs, const Vec3& xi);

}  // namespace iga
