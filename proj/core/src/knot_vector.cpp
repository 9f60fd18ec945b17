#include "iga/knot_vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace iga {

namespace {

constexpr double kSnapTol = 1e-14;

std::string describe(const std::vector<double>& knots, int degree) {
    std::ostringstream os;
    os << "degree " << degree << ", knots [";
    for (std::size_t i = 0; i < knots.size(); ++i) os << (i ? ", " : "") << knots[i];
    os << "]";
    return os.str();
}

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
    if (degree_ < 0) throw Error("knot vector: degree must be non-negative");
    if (static_cast<int>(knots_.size()) < 2 * (degree_ + 1))
        throw Error("knot vector: too few knots for " + describe(knots_, degree_));
    // Snap near-equal knots so later comparisons can be exact.
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (knots_[i] < knots_[i - 1]) {
            if (knots_[i - 1] - knots_[i] > kSnapTol)
                throw Error("knot vector: knots must be non-decreasing, " +
                            describe(knots_, degree_));
            knots_[i] = knots_[i - 1];
        } else if (knots_[i] - knots_[i - 1] <= kSnapTol) {
            knots_[i] = knots_[i - 1];
        }
    }
    if (knots_.front() == knots_.back())
        throw Error("knot vector: empty parametric domain");
    if (multiplicity(knots_.front()) != degree_ + 1 || multiplicity(knots_.back()) != degree_ + 1)
        throw Error("knot vector: not open (end multiplicity must be degree+1), " +
                    describe(knots_, degree_));
    double value = knots_[degree_ + 1];
    int mult = 0;
    for (int i = degree_ + 1; i < knot_count() - degree_ - 1; ++i) {
        mult = (knots_[i] == value) ? mult + 1 : 1;
        value = knots_[i];
        if (mult > degree_ + 1)
            throw Error("knot vector: interior multiplicity exceeds degree+1, " +
                        describe(knots_, degree_));
    }
}

KnotVector KnotVector::uniform(double a, double b, int elements, int degree) {
    if (elements < 1) throw Error("knot vector: need at least one element");
    if (!(a < b)) throw Error("knot vector: empty interval");
    std::vector<double> knots;
    knots.reserve(elements + 1 + 2 * degree);
    for (int i = 0; i <= degree; ++i) knots.push_back(a);
    for (int i = 1; i < elements; ++i)
        knots.push_back(a + (b - a) * static_cast<double>(i) / elements);
    for (int i = 0; i <= degree; ++i) knots.push_back(b);
    return KnotVector(std::move(knots), degree);
}

KnotVector KnotVector::with_breakpoints(double a, double b, const std::vector<double>& interior,
                                        int degree) {
    std::vector<double> knots;
    for (int i = 0; i <= degree; ++i) knots.push_back(a);
    for (double t : interior) knots.push_back(t);
    for (int i = 0; i <= degree; ++i) knots.push_back(b);
    return KnotVector(std::move(knots), degree);
}

int KnotVector::multiplicity(double value) const {
    return static_cast<int>(std::count(knots_.begin(), knots_.end(), value));
}

int KnotVector::find_span(double xi) const {
    if (xi < domain_min() || xi > domain_max())
        throw Error("parameter " + std::to_string(xi) + " outside knot range [" +
                    std::to_string(domain_min()) + ", " + std::to_string(domain_max()) + "]");
    const int n = basis_count();
    if (xi >= knots_[n]) return n - 1;  // closed-right convention at the domain end
    // Binary search, NURBS Book A2.1.
    int low = degree_;
    int high = n;
    int mid = (low + high) / 2;
    while (xi < knots_[mid] || xi >= knots_[mid + 1]) {
        if (xi < knots_[mid])
            high = mid;
        else
            low = mid;
        mid = (low + high) / 2;
    }
    return mid;
}

BasisSpan KnotVector::eval_basis(double xi) const {
    const int span = find_span(xi);
    const int p = degree_;
    BasisSpan out;
    out.first_index = span - p;
    out.values.assign(p + 1, 0.0);
    // NURBS Book A2.2; the left/right formulation never divides by zero.
    std::vector<double> left(p + 1), right(p + 1);
    out.values[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = xi - knots_[span + 1 - j];
        right[j] = knots_[span + j] - xi;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tmp = out.values[r] / (right[r + 1] + left[j - r]);
            out.values[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out.values[j] = saved;
    }
    return out;
}

BasisDerivatives KnotVector::eval_basis_derivatives(double xi, int max_order) const {
    if (max_order < 0) throw Error("max_order must be >= 0");
    const int span = find_span(xi);
    const int p = degree_;
    const int nd = std::min(max_order, p);  // derivatives beyond p vanish

    BasisDerivatives out;
    out.first_index = span - p;
    out.rows = max_order + 1;
    out.cols = p + 1;
    out.data.assign(static_cast<std::size_t>(out.rows) * out.cols, 0.0);

    // NURBS Book A2.3.
    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = xi - knots_[span + 1 - j];
        right[j] = knots_[span + j] - xi;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            const double tmp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu(j, j) = saved;
    }
    for (int j = 0; j <= p; ++j) out.data[j] = ndu(j, p);

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= nd; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            out.data[static_cast<std::size_t>(k) * out.cols + r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= nd; ++k) {
        for (int j = 0; j <= p; ++j)
            out.data[static_cast<std::size_t>(k) * out.cols + j] *= factor;
        factor *= p - k;
    }
    return out;
}

double KnotVector::eval_one(int i, double xi) const {
    if (i < 0 || i >= basis_count()) throw Error("basis index out of range");
    if (xi < domain_min() || xi > domain_max()) return 0.0;
    const BasisSpan span = eval_basis(xi);
    const int j = i - span.first_index;
    if (j < 0 || j > degree_) return 0.0;
    return span.values[j];
}

std::vector<double> KnotVector::span_midpoints() const {
    std::vector<double> mids;
    for (const auto& [lo, hi] : elements()) mids.push_back(0.5 * (lo + hi));
    return mids;
}

std::vector<std::pair<double, double>> KnotVector::elements() const {
    std::vector<std::pair<double, double>> spans;
    for (int i = degree_; i < basis_count(); ++i)
        if (knots_[i] != knots_[i + 1]) spans.emplace_back(knots_[i], knots_[i + 1]);
    return spans;
}

std::vector<double> KnotVector::greville_abscissae() const {
    if (degree_ == 0) return span_midpoints();
    std::vector<double> pts(basis_count());
    for (int i = 0; i < basis_count(); ++i) {
        double sum = 0.0;
        for (int j = 1; j <= degree_; ++j) sum += knots_[i + j];
        // The averaged end abscissae can land one ulp outside the domain.
        pts[i] = std::clamp(sum / degree_, domain_min(), domain_max());
    }
    return pts;
}

KnotVector KnotVector::inserted(double xi) const {
    std::vector<double> knots = knots_;
    knots.insert(std::upper_bound(knots.begin(), knots.end(), xi), xi);
    return KnotVector(std::move(knots), degree_);
}

std::pair<KnotVector, Eigen::MatrixXd> insert_knot(const KnotVector& kv,
                                                   const Eigen::MatrixXd& controls, double xi) {
    if (controls.rows() != kv.basis_count())
        throw Error("insert_knot: control count does not match basis count");
    if (!(xi > kv.domain_min() && xi < kv.domain_max()))
        throw Error("insert_knot: new knot must be strictly interior");
    const int p = kv.degree();
    if (kv.multiplicity(xi) + 1 > p)
        throw Error("insert_knot: multiplicity would exceed degree");

    const int k = kv.find_span(xi);
    const auto& knots = kv.knots();

    // Boehm's rule (NURBS Book A5.1, single insertion).
    Eigen::MatrixXd refined(controls.rows() + 1, controls.cols());
    for (int i = 0; i <= k - p; ++i) refined.row(i) = controls.row(i);
    for (int i = k - p + 1; i <= k; ++i) {
        const double denom = knots[i + p] - knots[i];
        const double a = (xi - knots[i]) / denom;
        refined.row(i) = (1.0 - a) * controls.row(i - 1) + a * controls.row(i);
    }
    for (int i = k + 1; i <= controls.rows(); ++i) refined.row(i) = controls.row(i - 1);

    return {kv.inserted(xi), std::move(refined)};
}

}  // namespace iga
