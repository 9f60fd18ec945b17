#include "iga/patch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>

namespace iga {

Vec3 FaceDescriptor::embed(const Vec3& s) const {
    Vec3 xi = Vec3::Zero();
    int k = 0;
    for (int d = 0; d < volume_dim; ++d) xi[d] = (d == id.direction) ? fixed_value : s[k++];
    return xi;
}

Patch::Patch(TensorSpace space, Eigen::MatrixXd controls, bool check_jacobian)
    : space_(std::move(space)), controls_(std::move(controls)) {
    if (controls_.rows() != space_.total_count())
        throw Error("patch: control grid shape does not match basis counts");
    if (controls_.cols() < 1 || controls_.cols() > 3)
        throw Error("patch: physical dimension must be 1..3");
    if (dim_phys() < dim_param())
        throw Error("patch: physical dimension below parametric dimension");

    Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
    for (int c = 0; c < controls_.cols(); ++c) {
        lo[c] = controls_.col(c).minCoeff();
        hi[c] = controls_.col(c).maxCoeff();
    }
    diameter_ = (hi - lo).norm();
    if (check_jacobian && !(diameter_ > 0.0) && space_.dim() > 0)
        throw Error("patch: degenerate control grid");
    if (space_.dim() == 0) diameter_ = std::max(diameter_, 1.0);

    if (check_jacobian && dim_param() >= 1 && dim_param() == dim_phys()) {
        int max_deg = 0;
        for (int d = 0; d < dim_param(); ++d)
            max_deg = std::max(max_deg, space_.direction(d).degree());
        double sign = 0.0;
        for (const ElementRule& rule : element_rules(space_, max_deg + 1)) {
            for (const Vec3& node : rule.nodes) {
                const Eigen::Matrix3d jac = jacobian(node);
                const double det =
                    jac.topLeftCorner(dim_param(), dim_param()).determinant();
                if (det == 0.0)
                    throw Error("patch: singular Jacobian at a quadrature point");
                if (sign == 0.0)
                    sign = det > 0 ? 1.0 : -1.0;
                else if (det * sign < 0)
                    throw Error("patch: Jacobian determinant changes sign");
            }
        }
    }
}

Vec3 Patch::map(const Vec3& xi) const {
    const auto tables = space_.eval_directions(xi, 0);
    Vec3 x = Vec3::Zero();
    const int nloc = space_.local_count();
    for (int loc = 0; loc < nloc; ++loc) {
        const double v = space_.local_value(tables, loc);
        const int g = space_.global_index(tables, loc);
        for (int c = 0; c < dim_phys(); ++c) x[c] += v * controls_(g, c);
    }
    return x;
}

Eigen::Matrix3d Patch::jacobian(const Vec3& xi) const {
    const auto tables = space_.eval_directions(xi, 1);
    Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
    const int nloc = space_.local_count();
    for (int loc = 0; loc < nloc; ++loc) {
        const Vec3 grad = space_.local_gradient(tables, loc);
        const int g = space_.global_index(tables, loc);
        for (int c = 0; c < dim_phys(); ++c)
            for (int d = 0; d < dim_param(); ++d) jac(c, d) += grad[d] * controls_(g, c);
    }
    return jac;
}

double Patch::measure(const Vec3& xi) const {
    if (dim_param() == 0) return 1.0;
    const Eigen::Matrix3d jac = jacobian(xi);
    if (dim_param() == dim_phys())
        return std::abs(jac.topLeftCorner(dim_param(), dim_param()).determinant());
    const auto block = jac.topLeftCorner(dim_phys(), dim_param());
    return std::sqrt((block.transpose() * block).determinant());
}

InvertResult Patch::invert_map(const Vec3& x) const { return invert_map(x, param_center()); }

InvertResult Patch::newton_invert(const Vec3& x, const Vec3& guess) const {
    const int dim = dim_param();
    const Vec3 lo = space_.domain_min();
    const Vec3 hi = space_.domain_max();
    const auto clamp_box = [&](Vec3 p) {
        for (int d = 0; d < dim; ++d) p[d] = std::min(hi[d], std::max(lo[d], p[d]));
        return p;
    };

    const double tol = 1e-12 * diameter_;
    constexpr int kMaxIters = 50;

    InvertResult result;
    Vec3 xi = clamp_box(guess);
    double res = (map(xi) - x).norm();
    int pinned_streak = 0;

    for (int it = 0; it < kMaxIters; ++it) {
        result.iterations = it;
        if (res <= tol) {
            result.converged = true;
            break;
        }
        const Eigen::Matrix3d jac = jacobian(xi);
        Eigen::MatrixXd block = jac.topLeftCorner(dim, dim);
        Eigen::VectorXd rhs(dim);
        const Vec3 r = map(xi) - x;
        for (int d = 0; d < dim; ++d) rhs[d] = -r[d];
        Eigen::VectorXd delta = block.fullPivLu().solve(rhs);
        const double step_cap = 2.0 * (hi - lo).norm();
        if (delta.norm() > step_cap) delta *= step_cap / delta.norm();

        // Damp by halving while the residual grows.
        Vec3 next = xi;
        double next_res = res;
        double scale = 1.0;
        for (int h = 0; h < 30; ++h) {
            Vec3 cand = xi;
            for (int d = 0; d < dim; ++d) cand[d] += scale * delta[d];
            cand = clamp_box(cand);
            const double cand_res = (map(cand) - x).norm();
            if (cand_res < res || h == 29) {
                next = cand;
                next_res = cand_res;
                break;
            }
            scale *= 0.5;
        }

        bool pinned = false;
        for (int d = 0; d < dim; ++d)
            if (next[d] == lo[d] || next[d] == hi[d]) pinned = true;
        const bool stalled = (next - xi).norm() <= 1e-15 * (1.0 + xi.norm());
        pinned_streak = (pinned && (stalled || next_res >= res)) ? pinned_streak + 1 : 0;
        xi = next;
        res = next_res;
        if (pinned_streak >= 5) {
            result.outside = true;
            break;
        }
    }
    if (res <= tol) {
        result.converged = true;
        result.outside = false;
    }
    result.xi = xi;
    result.residual = res;
    return result;
}

InvertResult Patch::invert_map(const Vec3& x, const Vec3& guess) const {
    if (dim_param() != dim_phys())
        throw Error("invert_map: requires equal parametric and physical dimensions");
    InvertResult best = newton_invert(x, guess);
    if (best.converged) return best;

    // Multi-start fallback: the single Newton path can stall on strongly
    // curved or vertex-degenerate patches. Probe a coarse parametric lattice
    // and restart from the closest points.
    const int dim = dim_param();
    const Vec3 lo = space_.domain_min();
    const Vec3 hi = space_.domain_max();
    constexpr double kFractions[5] = {0.02, 0.25, 0.5, 0.75, 0.98};
    std::vector<std::pair<double, Vec3>> starts;
    int total = 1;
    for (int d = 0; d < dim; ++d) total *= 5;
    for (int flat = 0; flat < total; ++flat) {
        Vec3 s = Vec3::Zero();
        int rest = flat;
        for (int d = 0; d < dim; ++d) {
            s[d] = lo[d] + (hi[d] - lo[d]) * kFractions[rest % 5];
            rest /= 5;
        }
        starts.emplace_back((map(s) - x).norm(), s);
    }
    std::sort(starts.begin(), starts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    for (std::size_t k = 0; k < std::min<std::size_t>(3, starts.size()); ++k) {
        const InvertResult attempt = newton_invert(x, starts[k].second);
        if (attempt.residual < best.residual) best = attempt;
        if (best.converged) return best;
    }
    return best;
}

Vec3 Patch::invert_map_checked(const Vec3& x) const {
    const InvertResult r = invert_map(x);
    if (!r.converged) {
        throw Error(std::string("invert_map: ") + (r.outside ? "point outside patch image" : "no convergence") +
                    ", best residual " + std::to_string(r.residual));
    }
    return r.xi;
}

FaceDescriptor Patch::face(const FaceId& id) const {
    if (id.direction < 0 || id.direction >= dim_param() || (id.side != 0 && id.side != 1))
        throw Error("face: invalid direction or side");

    const KnotVector& fixed_kv = space_.direction(id.direction);
    const int layer = id.side == 0 ? 0 : fixed_kv.basis_count() - 1;

    std::vector<KnotVector> face_dirs;
    for (int d = 0; d < dim_param(); ++d)
        if (d != id.direction) face_dirs.push_back(space_.direction(d));
    TensorSpace face_space(std::move(face_dirs));

    Eigen::MatrixXd face_controls(face_space.total_count(), dim_phys());
    std::vector<int> volume_dofs(face_space.total_count());
    for (int f = 0; f < face_space.total_count(); ++f) {
        const auto fmulti = face_space.unflatten(f);
        std::array<int, 3> vmulti{0, 0, 0};
        int k = 0;
        for (int d = 0; d < dim_param(); ++d)
            vmulti[d] = (d == id.direction) ? layer : fmulti[k++];
        const int v = space_.flatten(vmulti);
        face_controls.row(f) = controls_.row(v);
        volume_dofs[f] = v;
    }

    FaceDescriptor face;
    face.id = id;
    face.face_patch =
        std::make_shared<Patch>(std::move(face_space), std::move(face_controls), false);
    face.volume_dofs = std::move(volume_dofs);
    face.fixed_value = id.side == 0 ? fixed_kv.domain_min() : fixed_kv.domain_max();
    face.volume_dim = dim_param();
    return face;
}

Patch Patch::refined(int direction, double xi) const {
    const KnotVector& kv = space_.direction(direction);
    const int n_old = kv.basis_count();
    const int n_new = n_old + 1;

    // Apply the 1D insertion rule to every control fiber along `direction`.
    int fiber_count = 1;
    for (int d = 0; d < dim_param(); ++d)
        if (d != direction) fiber_count *= space_.count(d);

    TensorSpace new_space = space_.with_direction(direction, kv.inserted(xi));
    Eigen::MatrixXd new_controls(new_space.total_count(), dim_phys());

    for (int fiber = 0; fiber < fiber_count; ++fiber) {
        // Decode the fixed multi-index of this fiber.
        std::array<int, 3> multi{0, 0, 0};
        int rest = fiber;
        for (int d = 0; d < dim_param(); ++d) {
            if (d == direction) continue;
            multi[d] = rest % space_.count(d);
            rest /= space_.count(d);
        }
        Eigen::MatrixXd fiber_controls(n_old, dim_phys());
        for (int i = 0; i < n_old; ++i) {
            multi[direction] = i;
            fiber_controls.row(i) = controls_.row(space_.flatten(multi));
        }
        auto [kv2, refined] = insert_knot(kv, fiber_controls, xi);
        (void)kv2;
        for (int i = 0; i < n_new; ++i) {
            multi[direction] = i;
            new_controls.row(new_space.flatten(multi)) = refined.row(i);
        }
    }
    return Patch(std::move(new_space), std::move(new_controls), false);
}

Patch Patch::refined_dyadic(int times) const {
    Patch patch = *this;
    for (int t = 0; t < times; ++t) {
        for (int d = 0; d < patch.dim_param(); ++d) {
            for (const auto& [lo, hi] : patch.space().direction(d).elements())
                patch = patch.refined(d, 0.5 * (lo + hi));
        }
    }
    return patch;
}

Vec3 Patch::param_center() const {
    return 0.5 * (space_.domain_min() + space_.domain_max());
}

double field_value(const TensorSpace& space, const Eigen::VectorXd& coeffs, const Vec3& xi) {
    const auto tables = space.eval_directions(xi, 0);
    double value = 0.0;
    for (int loc = 0; loc < space.local_count(); ++loc)
        value += space.local_value(tables, loc) * coeffs[space.global_index(tables, loc)];
    return value;
}

Vec3 field_gradient_param(const TensorSpace& space, const Eigen::VectorXd& coeffs, const Vec3& xi) {
    const auto tables = space.eval_directions(xi, 1);
    Vec3 grad = Vec3::Zero();
    for (int loc = 0; loc < space.local_count(); ++loc)
        grad += space.local_gradient(tables, loc) * coeffs[space.global_index(tables, loc)];
    return grad;
}

Vec3 field_gradient_physical(const Patch& patch, const Eigen::VectorXd& coeffs, const Vec3& xi) {
    const int dim = patch.dim_param();
    const Vec3 gp = field_gradient_param(patch.space(), coeffs, xi);
    const Eigen::Matrix3d jac = patch.jacobian(xi);
    Eigen::MatrixXd jt = jac.topLeftCorner(dim, dim).transpose();
    Eigen::VectorXd rhs(dim);
    for (int d = 0; d < dim; ++d) rhs[d] = gp[d];
    Eigen::VectorXd g = jt.fullPivLu().solve(rhs);
    Vec3 out = Vec3::Zero();
    for (int d = 0; d < dim; ++d) out[d] = g[d];
    return out;
}

}  // namespace iga
