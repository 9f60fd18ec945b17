#include "iga/assembly.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <fstream>

namespace iga {

DofPartition make_partition(const TensorSpace& space, const std::vector<FaceId>& dirichlet_faces) {
    DofPartition part;
    part.is_boundary.assign(space.total_count(), 0);
    for (const FaceId& id : dirichlet_faces) {
        const int layer = id.side == 0 ? 0 : space.direction(id.direction).basis_count() - 1;
        for (int flat = 0; flat < space.total_count(); ++flat)
            if (space.unflatten(flat)[id.direction] == layer) part.is_boundary[flat] = 1;
    }
    for (int flat = 0; flat < space.total_count(); ++flat)
        (part.is_boundary[flat] ? part.boundary : part.interior).push_back(flat);
    return part;
}

namespace {

// Element loop shared by the stiffness and load assemblers. `emit` receives the
// node's basis tables plus physical data.
template <typename Emit>
void for_each_node(const Patch& patch, const std::vector<ElementRule>& rules, int order,
                   Emit&& emit) {
    const TensorSpace& space = patch.space();
    for (const ElementRule& rule : rules) {
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const Vec3& node = rule.nodes[q];
            const auto tables = space.eval_directions(node, order);
            emit(node, rule.weights[q], tables);
        }
    }
}

}  // namespace

SparseMat assemble_stiffness(const Patch& patch, const ScalarField& k,
                             const std::vector<ElementRule>& rules) {
    const TensorSpace& space = patch.space();
    const int dim = patch.dim_param();
    const int nloc = space.local_count();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(rules.size() * nloc * nloc);

    std::vector<int> global(nloc);
    std::vector<Vec3> grad_phys(nloc);

    for_each_node(patch, rules, 1,
                  [&](const Vec3& node, double weight, const std::vector<BasisDerivatives>& tab) {
                      const Eigen::Matrix3d jac = patch.jacobian(node);
                      const Eigen::MatrixXd block = jac.topLeftCorner(dim, dim);
                      const double det = block.determinant();
                      if (det == 0.0) throw Error("assemble_stiffness: singular Jacobian");
                      const Eigen::MatrixXd jt_inv = block.transpose().fullPivLu().inverse();

                      for (int loc = 0; loc < nloc; ++loc) {
                          global[loc] = space.global_index(tab, loc);
                          const Vec3 gp = space.local_gradient(tab, loc);
                          Eigen::VectorXd g = jt_inv * gp.head(dim);
                          grad_phys[loc] = Vec3::Zero();
                          grad_phys[loc].head(dim) = g;
                      }
                      const double factor = k(patch.map(node)) * weight * std::abs(det);
                      for (int a = 0; a < nloc; ++a)
                          for (int b = 0; b < nloc; ++b)
                              triplets.emplace_back(global[a], global[b],
                                                    factor * grad_phys[a].dot(grad_phys[b]));
                  });

    SparseMat matrix(space.total_count(), space.total_count());
    matrix.setFromTriplets(triplets.begin(), triplets.end());
    return matrix;
}

Eigen::VectorXd assemble_load(const Patch& patch, const ScalarField& f,
                              const std::vector<ElementRule>& rules) {
    const TensorSpace& space = patch.space();
    Eigen::VectorXd load = Eigen::VectorXd::Zero(space.total_count());
    const int nloc = space.local_count();
    for_each_node(patch, rules, 0,
                  [&](const Vec3& node, double weight, const std::vector<BasisDerivatives>& tab) {
                      const double factor = f(patch.map(node)) * weight * patch.measure(node);
                      for (int loc = 0; loc < nloc; ++loc)
                          load[space.global_index(tab, loc)] +=
                              factor * space.local_value(tab, loc);
                  });
    return load;
}

Eigen::VectorXd assemble_neumann(const FaceDescriptor& face, int volume_dof_count,
                                 const ScalarField& h,
                                 const std::vector<ElementRule>& face_rules) {
    const Patch& fp = *face.face_patch;
    const TensorSpace& space = fp.space();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(volume_dof_count);
    const int nloc = space.local_count();
    for_each_node(fp, face_rules, 0,
                  [&](const Vec3& node, double weight, const std::vector<BasisDerivatives>& tab) {
                      const double factor = h(fp.map(node)) * weight * fp.measure(node);
                      for (int loc = 0; loc < nloc; ++loc)
                          out[face.volume_dofs[space.global_index(tab, loc)]] +=
                              factor * space.local_value(tab, loc);
                  });
    return out;
}

SparseMat assemble_boundary_mass(const FaceDescriptor& face,
                                 const std::vector<ElementRule>& face_rules) {
    const Patch& fp = *face.face_patch;
    const TensorSpace& space = fp.space();
    const int nloc = space.local_count();

    double total_measure = 0.0;
    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<int> global(nloc);
    std::vector<double> values(nloc);
    for_each_node(fp, face_rules, 0,
                  [&](const Vec3& node, double weight, const std::vector<BasisDerivatives>& tab) {
                      const double factor = weight * fp.measure(node);
                      total_measure += factor;
                      for (int loc = 0; loc < nloc; ++loc) {
                          global[loc] = space.global_index(tab, loc);
                          values[loc] = space.local_value(tab, loc);
                      }
                      for (int a = 0; a < nloc; ++a)
                          for (int b = 0; b < nloc; ++b)
                              triplets.emplace_back(global[a], global[b],
                                                    factor * values[a] * values[b]);
                  });
    if (!(total_measure > 0.0)) throw Error("assemble_boundary_mass: degenerate face");

    SparseMat mass(space.total_count(), space.total_count());
    mass.setFromTriplets(triplets.begin(), triplets.end());
    return mass;
}

Eigen::VectorXd solve_sparse(const SparseMat& matrix, const Eigen::VectorXd& rhs) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
        throw Error("solve_sparse: shape mismatch");
    Eigen::SparseLU<SparseMat> solver;
    solver.analyzePattern(matrix);
    solver.factorize(matrix);
    if (solver.info() != Eigen::Success) throw Error("solve_sparse: singular factorization");
    Eigen::VectorXd x = solver.solve(rhs);
    const double residual = (matrix * x - rhs).norm();
    if (residual > 1e-10 * std::max(1.0, rhs.norm()))
        throw Error("solve_sparse: residual " + std::to_string(residual) + " above tolerance");
    return x;
}

void write_matrix_coordinate(const SparseMat& matrix, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out.precision(17);
    for (int k = 0; k < matrix.outerSize(); ++k)
        for (SparseMat::InnerIterator it(matrix, k); it; ++it)
            out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace iga
