#include "iga/boundary.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace iga {

void DirichletLift::overwrite_with(const DirichletLift& other) {
    for (std::size_t k = 0; k < other.dofs.size(); ++k) {
        const auto it = std::find(dofs.begin(), dofs.end(), other.dofs[k]);
        if (it == dofs.end()) {
            dofs.push_back(other.dofs[k]);
            values.push_back(other.values[k]);
        } else {
            values[static_cast<std::size_t>(it - dofs.begin())] = other.values[k];
        }
    }
}

namespace {

DirichletLift direct_assignment(const FaceDescriptor& face, const ScalarField& g) {
    const Vec3 point = face.face_patch->map(face.face_patch->param_center());
    DirichletLift lift;
    lift.dofs = face.volume_dofs;
    lift.values.assign(face.volume_dofs.size(), g(point));
    return lift;
}

double face_measure(const FaceDescriptor& face, const std::vector<ElementRule>& rules) {
    double measure = 0.0;
    for (const ElementRule& rule : rules)
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            measure += rule.weights[q] * face.face_patch->measure(rule.nodes[q]);
    return measure;
}

}  // namespace

DirichletLift lift_least_squares(const FaceDescriptor& face, const ScalarField& g,
                                 int points_per_direction) {
    const Patch& fp = *face.face_patch;
    const TensorSpace& space = fp.space();
    const auto rules = element_rules(space, points_per_direction);

    if (space.dim() > 0 && !(face_measure(face, rules) > 0.0))
        return direct_assignment(face, g);  // collapsed face: single image point

    const SparseMat mass = assemble_boundary_mass(face, rules);

    Eigen::VectorXd moments = Eigen::VectorXd::Zero(space.total_count());
    const int nloc = space.local_count();
    for (const ElementRule& rule : rules) {
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const Vec3& node = rule.nodes[q];
            const auto tables = space.eval_directions(node, 0);
            const double factor = g(fp.map(node)) * rule.weights[q] * fp.measure(node);
            for (int loc = 0; loc < nloc; ++loc)
                moments[space.global_index(tables, loc)] += factor * space.local_value(tables, loc);
        }
    }

    Eigen::SimplicialLDLT<SparseMat> solver(mass);
    if (solver.info() != Eigen::Success)
        throw Error("lift_least_squares: mass matrix factorization failed");
    const Eigen::VectorXd q = solver.solve(moments);

    DirichletLift lift;
    lift.dofs = face.volume_dofs;
    lift.values.assign(q.data(), q.data() + q.size());
    return lift;
}

std::vector<double> quasi_interpolation_abscissae(const KnotVector& kv) {
    return kv.degree() == 0 ? kv.span_midpoints() : kv.greville_abscissae();
}

DirichletLift lift_quasi_interpolation(const FaceDescriptor& face, const ScalarField& g) {
    const Patch& fp = *face.face_patch;
    const TensorSpace& space = fp.space();

    if (space.dim() == 0) return direct_assignment(face, g);

    std::array<std::vector<double>, 3> abscissae;
    for (int d = 0; d < space.dim(); ++d)
        abscissae[d] = quasi_interpolation_abscissae(space.direction(d));

    const int n = space.total_count();
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs(n);
    for (int row = 0; row < n; ++row) {
        const auto multi = space.unflatten(row);
        Vec3 t = Vec3::Zero();
        for (int d = 0; d < space.dim(); ++d) t[d] = abscissae[d][multi[d]];
        const auto tables = space.eval_directions(t, 0);
        for (int loc = 0; loc < space.local_count(); ++loc)
            triplets.emplace_back(row, space.global_index(tables, loc),
                                  space.local_value(tables, loc));
        rhs[row] = g(fp.map(t));
    }
    SparseMat collocation(n, n);
    collocation.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::SparseLU<SparseMat> solver;
    solver.analyzePattern(collocation);
    solver.factorize(collocation);
    if (solver.info() != Eigen::Success)
        throw Error("lift_quasi_interpolation: singular collocation matrix");
    const Eigen::VectorXd q = solver.solve(rhs);

    DirichletLift lift;
    lift.dofs = face.volume_dofs;
    lift.values.assign(q.data(), q.data() + q.size());
    return lift;
}

SparseSystem homogenize(const SparseSystem& system, const DirichletLift& lift) {
    const int n = static_cast<int>(system.matrix.rows());
    std::vector<char> pinned(n, 0);
    std::vector<double> value(n, 0.0);
    for (std::size_t k = 0; k < lift.dofs.size(); ++k) {
        const int dof = lift.dofs[k];
        if (!system.partition.is_boundary[dof])
            throw Error("homogenize: lift dof " + std::to_string(dof) + " is not a boundary dof");
        pinned[dof] = 1;
        value[dof] = lift.values[k];
    }

    SparseSystem out;
    out.partition = system.partition;
    out.rhs = system.rhs;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(system.matrix.nonZeros() + lift.dofs.size());
    for (int col = 0; col < system.matrix.outerSize(); ++col) {
        for (SparseMat::InnerIterator it(system.matrix, col); it; ++it) {
            if (pinned[it.row()]) continue;
            if (pinned[it.col()]) {
                out.rhs[it.row()] -= it.value() * value[it.col()];
                continue;
            }
            triplets.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int dof = 0; dof < n; ++dof) {
        if (pinned[dof]) {
            triplets.emplace_back(dof, dof, 1.0);
            out.rhs[dof] = value[dof];
        }
    }
    out.matrix.resize(n, n);
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

std::vector<double> trace_exact(const DonorField& donor, const std::vector<Vec3>& points) {
    std::vector<double> values;
    values.reserve(points.size());
    Vec3 guess = donor.patch->param_center();
    for (std::size_t i = 0; i < points.size(); ++i) {
        InvertResult inv = donor.patch->invert_map(points[i], guess);
        if (!inv.converged) inv = donor.patch->invert_map(points[i]);  // retry from center
        if (!inv.converged)
            throw Error("trace_exact: inversion failed at point " + std::to_string(i) +
                        " (residual " + std::to_string(inv.residual) + ")");
        guess = inv.xi;
        values.push_back(field_value(donor.patch->space(), donor.coeffs, inv.xi));
    }
    return values;
}

LatticeInterpolant::LatticeInterpolant(const DonorField& donor, int resolution) {
    if (resolution < 1) throw Error("trace_interpolated: resolution must be >= 1");
    const Patch& patch = *donor.patch;
    dim_ = patch.dim_param();
    if (dim_ < 1) throw Error("trace_interpolated: needs a 1-3 dimensional donor");

    for (int d = 0; d < dim_; ++d) {
        std::vector<double>& ticks = ticks_[d];
        for (const auto& [lo, hi] : patch.space().direction(d).elements()) {
            if (ticks.empty()) ticks.push_back(lo);
            for (int r = 1; r < resolution; ++r)
                ticks.push_back(lo + (hi - lo) * static_cast<double>(r) / resolution);
            ticks.push_back(hi);  // exact span end, never an ulp past the domain
        }
        counts_[d] = static_cast<int>(ticks.size());
    }

    int total = 1;
    for (int d = 0; d < dim_; ++d) total *= counts_[d];
    points_.resize(total);
    values_.resize(total);
    for (int flat = 0; flat < total; ++flat) {
        int rest = flat;
        Vec3 xi = Vec3::Zero();
        for (int d = 0; d < dim_; ++d) {
            xi[d] = ticks_[d][rest % counts_[d]];
            rest /= counts_[d];
        }
        points_[flat] = patch.map(xi);
        values_[flat] = field_value(patch.space(), donor.coeffs, xi);
    }

    cell_boxes_.resize(cell_count());
    for (int cell = 0; cell < cell_count(); ++cell) {
        int rest = cell;
        std::array<int, 3> ci{0, 0, 0};
        for (int d = 0; d < dim_; ++d) {
            ci[d] = rest % (counts_[d] - 1);
            rest /= (counts_[d] - 1);
        }
        Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
        for (int corner = 0; corner < (1 << dim_); ++corner) {
            std::array<int, 3> idx = ci;
            for (int d = 0; d < dim_; ++d)
                if (corner & (1 << d)) ++idx[d];
            const Vec3& p = points_[point_index(idx[0], idx[1], idx[2])];
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
            spacing_ = std::max(spacing_, (p - points_[point_index(ci[0], ci[1], ci[2])]).norm());
        }
        cell_boxes_[cell] = {lo, hi};
    }
}

int LatticeInterpolant::point_index(int i, int j, int k) const {
    return i + counts_[0] * (j + counts_[1] * k);
}

int LatticeInterpolant::cell_count() const {
    int n = 1;
    for (int d = 0; d < dim_; ++d) n *= counts_[d] - 1;
    return n;
}

namespace {

constexpr double kBaryTol = 1e-10;

// Barycentric evaluation inside the simplex (p0..p_dim); returns false if x is outside.
bool simplex_value(const Vec3* pts, const double* vals, int dim, const Vec3& x, double& out) {
    Eigen::Matrix3d basis = Eigen::Matrix3d::Identity();
    for (int c = 0; c < dim; ++c) basis.col(c).head(3) = pts[c + 1] - pts[0];
    Eigen::Vector3d rhs = x - pts[0];
    const Eigen::MatrixXd block = basis.topLeftCorner(dim, dim);
    const Eigen::VectorXd lambda = block.fullPivLu().solve(rhs.head(dim));
    double l0 = 1.0;
    for (int c = 0; c < dim; ++c) {
        if (lambda[c] < -kBaryTol) return false;
        l0 -= lambda[c];
    }
    if (l0 < -kBaryTol) return false;
    out = l0 * vals[0];
    for (int c = 0; c < dim; ++c) out += lambda[c] * vals[c + 1];
    return true;
}

// Kuhn simplices of the unit cell: each is a monotone corner path 0 -> all-ones
// along the (low,low)-(high,high) main diagonal.
const int kTri2d[2][3] = {{0b00, 0b01, 0b11}, {0b00, 0b10, 0b11}};
const int kTet3d[6][4] = {{0, 0b001, 0b011, 0b111}, {0, 0b001, 0b101, 0b111},
                          {0, 0b010, 0b011, 0b111}, {0, 0b010, 0b110, 0b111},
                          {0, 0b100, 0b101, 0b111}, {0, 0b100, 0b110, 0b111}};

}  // namespace

bool LatticeInterpolant::query_cell(int cell, const Vec3& x, double& out) const {
    const auto& box = cell_boxes_[cell];
    const double slack = kBaryTol * (1.0 + spacing_);
    for (int d = 0; d < dim_; ++d)
        if (x[d] < box.first[d] - slack || x[d] > box.second[d] + slack) return false;

    int rest = cell;
    std::array<int, 3> ci{0, 0, 0};
    for (int d = 0; d < dim_; ++d) {
        ci[d] = rest % (counts_[d] - 1);
        rest /= (counts_[d] - 1);
    }
    Vec3 corner_pts[8];
    double corner_vals[8];
    for (int corner = 0; corner < (1 << dim_); ++corner) {
        std::array<int, 3> idx = ci;
        for (int d = 0; d < dim_; ++d)
            if (corner & (1 << d)) ++idx[d];
        const int pi = point_index(idx[0], idx[1], idx[2]);
        corner_pts[corner] = points_[pi];
        corner_vals[corner] = values_[pi];
    }

    if (dim_ == 1) {
        const Vec3 pts[2] = {corner_pts[0], corner_pts[1]};
        const double vals[2] = {corner_vals[0], corner_vals[1]};
        return simplex_value(pts, vals, 1, x, out);
    }
    if (dim_ == 2) {
        for (const auto& tri : kTri2d) {
            const Vec3 pts[3] = {corner_pts[tri[0]], corner_pts[tri[1]], corner_pts[tri[2]]};
            const double vals[3] = {corner_vals[tri[0]], corner_vals[tri[1]], corner_vals[tri[2]]};
            if (simplex_value(pts, vals, 2, x, out)) return true;
        }
        return false;
    }
    for (const auto& tet : kTet3d) {
        const Vec3 pts[4] = {corner_pts[tet[0]], corner_pts[tet[1]], corner_pts[tet[2]],
                             corner_pts[tet[3]]};
        const double vals[4] = {corner_vals[tet[0]], corner_vals[tet[1]], corner_vals[tet[2]],
                                corner_vals[tet[3]]};
        if (simplex_value(pts, vals, 3, x, out)) return true;
    }
    return false;
}

double LatticeInterpolant::query(const Vec3& x) const {
    double out = 0.0;
    for (int cell = 0; cell < cell_count(); ++cell)
        if (query_cell(cell, x, out)) return out;
    throw Error("trace_interpolated: query point outside the sampled cloud hull");
}

bool LatticeInterpolant::contains(const Vec3& x) const {
    double out = 0.0;
    for (int cell = 0; cell < cell_count(); ++cell)
        if (query_cell(cell, x, out)) return true;
    return false;
}

std::vector<double> trace_interpolated(const DonorField& donor, const std::vector<Vec3>& points,
                                       int resolution) {
    const LatticeInterpolant interp(donor, resolution);
    std::vector<double> values;
    values.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        try {
            values.push_back(interp.query(points[i]));
        } catch (const Error&) {
            throw Error("trace_interpolated: point " + std::to_string(i) +
                        " outside the sampled cloud hull");
        }
    }
    return values;
}

}  // namespace iga
