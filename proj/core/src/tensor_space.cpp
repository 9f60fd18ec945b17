#include "iga/tensor_space.hpp"

namespace iga {

TensorSpace::TensorSpace(std::vector<KnotVector> directions) : directions_(std::move(directions)) {
    if (directions_.size() > 3) throw Error("tensor space supports at most 3 directions");
}

int TensorSpace::total_count() const {
    int total = 1;
    for (const auto& kv : directions_) total *= kv.basis_count();
    return total;
}

int TensorSpace::flatten(const std::array<int, 3>& multi) const {
    int flat = 0;
    for (int d = dim() - 1; d >= 0; --d) flat = flat * count(d) + multi[d];
    return flat;
}

std::array<int, 3> TensorSpace::unflatten(int flat) const {
    std::array<int, 3> multi{0, 0, 0};
    for (int d = 0; d < dim(); ++d) {
        multi[d] = flat % count(d);
        flat /= count(d);
    }
    return multi;
}

Vec3 TensorSpace::domain_min() const {
    Vec3 lo = Vec3::Zero();
    for (int d = 0; d < dim(); ++d) lo[d] = directions_[d].domain_min();
    return lo;
}

Vec3 TensorSpace::domain_max() const {
    Vec3 hi = Vec3::Zero();
    for (int d = 0; d < dim(); ++d) hi[d] = directions_[d].domain_max();
    return hi;
}

bool TensorSpace::contains(const Vec3& xi, double tol) const {
    for (int d = 0; d < dim(); ++d)
        if (xi[d] < directions_[d].domain_min() - tol || xi[d] > directions_[d].domain_max() + tol)
            return false;
    return true;
}

std::pair<Vec3, Vec3> TensorSpace::support(int flat) const {
    const auto multi = unflatten(flat);
    Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
    for (int d = 0; d < dim(); ++d) {
        const auto& knots = directions_[d].knots();
        lo[d] = knots[multi[d]];
        hi[d] = knots[multi[d] + directions_[d].degree() + 1];
    }
    return {lo, hi};
}

std::vector<BasisDerivatives> TensorSpace::eval_directions(const Vec3& xi, int max_order) const {
    std::vector<BasisDerivatives> tables;
    tables.reserve(dim());
    for (int d = 0; d < dim(); ++d)
        tables.push_back(directions_[d].eval_basis_derivatives(xi[d], max_order));
    return tables;
}

int TensorSpace::local_count() const {
    int n = 1;
    for (const auto& kv : directions_) n *= kv.degree() + 1;
    return n;
}

int TensorSpace::global_index(const std::vector<BasisDerivatives>& tables, int loc) const {
    std::array<int, 3> multi{0, 0, 0};
    for (int d = 0; d < dim(); ++d) {
        const int w = directions_[d].degree() + 1;
        multi[d] = tables[d].first_index + loc % w;
        loc /= w;
    }
    return flatten(multi);
}

double TensorSpace::local_value(const std::vector<BasisDerivatives>& tables, int loc) const {
    double v = 1.0;
    for (int d = 0; d < dim(); ++d) {
        const int w = directions_[d].degree() + 1;
        v *= tables[d](0, loc % w);
        loc /= w;
    }
    return v;
}

Vec3 TensorSpace::local_gradient(const std::vector<BasisDerivatives>& tables, int loc) const {
    std::array<int, 3> offs{0, 0, 0};
    int rest = loc;
    for (int d = 0; d < dim(); ++d) {
        const int w = directions_[d].degree() + 1;
        offs[d] = rest % w;
        rest /= w;
    }
    Vec3 grad = Vec3::Zero();
    for (int g = 0; g < dim(); ++g) {
        double v = 1.0;
        for (int d = 0; d < dim(); ++d) v *= tables[d](d == g ? 1 : 0, offs[d]);
        grad[g] = v;
    }
    return grad;
}

std::vector<ElementBox> TensorSpace::element_boxes() const {
    std::vector<std::vector<std::pair<double, double>>> spans;
    for (const auto& kv : directions_) spans.push_back(kv.elements());

    std::vector<ElementBox> boxes;
    if (dim() == 0) {
        boxes.push_back(ElementBox{});  // point face: single zero-volume element
        return boxes;
    }
    std::array<std::size_t, 3> idx{0, 0, 0};
    const int d_ = dim();
    while (true) {
        ElementBox box;
        for (int d = 0; d < d_; ++d) {
            box.lo[d] = spans[d][idx[d]].first;
            box.hi[d] = spans[d][idx[d]].second;
        }
        boxes.push_back(box);
        int d = 0;
        while (d < d_) {
            if (++idx[d] < spans[d].size()) break;
            idx[d] = 0;
            ++d;
        }
        if (d == d_) break;
    }
    return boxes;
}

TensorSpace TensorSpace::with_direction(int d, KnotVector kv) const {
    std::vector<KnotVector> dirs = directions_;
    dirs.at(d) = std::move(kv);
    return TensorSpace(std::move(dirs));
}

}  // namespace iga
