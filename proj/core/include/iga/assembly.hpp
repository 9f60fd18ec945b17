#pragma once

#include "iga/patch.hpp"

namespace iga {

/// Index partition into interior dofs (basis functions whose trace vanishes on
/// every Dirichlet face) and boundary dofs (the rest).
struct DofPartition {
    std::vector<int> interior;
    std::vector<int> boundary;
    std::vector<char> is_boundary;  // size total_count

    int total() const { return static_cast<int>(is_boundary.size()); }
};

/// Partition for the given set of Dirichlet faces. A basis function is a
/// boundary dof iff its face-trace is not identically zero, i.e. its index in
/// the fixed direction is the extreme layer.
DofPartition make_partition(const TensorSpace& space, const std::vector<FaceId>& dirichlet_faces);

/// Assembled Galerkin system over all dofs of one patch.
struct SparseSystem {
    SparseMat matrix;
    Eigen::VectorXd rhs;
    DofPartition partition;
};

/// Stiffness matrix A_ij = int k grad(phi_j) . grad(phi_i) dx over the full dof
/// set, via pushed-forward Gauss quadrature. Symmetric; annihilates constants.
SparseMat assemble_stiffness(const Patch& patch, const ScalarField& k,
                             const std::vector<ElementRule>& rules);

/// Load vector f_i = int f phi_i dx.
Eigen::VectorXd assemble_load(const Patch& patch, const ScalarField& f,
                              const std::vector<ElementRule>& rules);

/// Neumann boundary term h_i = int_face h phi_i dGamma, scattered into a
/// volume-sized vector (only face-layer dofs receive contributions).
/// face_rules are rules on the face's own space.
Eigen::VectorXd assemble_neumann(const FaceDescriptor& face, int volume_dof_count,
                                 const ScalarField& h,
                                 const std::vector<ElementRule>& face_rules);

/// Face mass (Gram) matrix M_kl = int_face phi_k phi_l dGamma in face-local
/// numbering. Symmetric positive definite; throws on a zero-measure face.
SparseMat assemble_boundary_mass(const FaceDescriptor& face,
                                 const std::vector<ElementRule>& face_rules);

/// Direct sparse solve with residual check |Ax-b| <= 1e-10 |b|.
Eigen::VectorXd solve_sparse(const SparseMat& matrix, const Eigen::VectorXd& rhs);

/// Matrix export in coordinate text format, one "row col value" per line.
void write_matrix_coordinate(const SparseMat& matrix, const std::string& path);

}  // namespace iga
