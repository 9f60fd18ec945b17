#include "iga/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

namespace iga {

namespace {

// Sample points used to verify that an interface face lies inside its donors:
// quasi-interpolation abscissae plus the parametric endpoints, per direction.
std::vector<Vec3> face_sample_points(const FaceDescriptor& face) {
    const Patch& fp = *face.face_patch;
    const TensorSpace& space = fp.space();
    if (space.dim() == 0) return {fp.map(Vec3::Zero())};

    std::array<std::vector<double>, 3> ticks;
    for (int d = 0; d < space.dim(); ++d) {
        ticks[d] = quasi_interpolation_abscissae(space.direction(d));
        ticks[d].insert(ticks[d].begin(), space.direction(d).domain_min());
        ticks[d].push_back(space.direction(d).domain_max());
    }
    std::vector<Vec3> points;
    std::array<std::size_t, 3> idx{0, 0, 0};
    while (true) {
        Vec3 xi = Vec3::Zero();
        for (int d = 0; d < space.dim(); ++d) xi[d] = ticks[d][idx[d]];
        points.push_back(fp.map(xi));
        int d = 0;
        while (d < space.dim()) {
            if (++idx[d] < ticks[d].size()) break;
            idx[d] = 0;
            ++d;
        }
        if (d == space.dim()) break;
    }
    return points;
}

}  // namespace

// Per-sweep donor evaluation context: exact traces keep warm-start guesses,
// interpolated traces build one lattice per donor. Thread-confined to the
// subdomain task that owns it.
struct SchwarzSolver::Sweep {
    const SchwarzSolver& solver;
    const std::vector<Eigen::VectorXd>& snapshot;
    TraceKind trace;
    std::map<int, Vec3> guesses;
    std::map<int, std::unique_ptr<LatticeInterpolant>> lattices;

    double donor_value(int donor, const Vec3& x, bool& found) {
        const Subdomain& sub = solver.subdomain(donor);
        const DonorField field{&sub.patch, snapshot[donor]};
        if (trace == TraceKind::Interpolated) {
            auto& lattice = lattices[donor];
            if (!lattice)
                lattice = std::make_unique<LatticeInterpolant>(
                    field, solver.options().trace_resolution);
            if (lattice->contains(x)) {
                found = true;
                return lattice->query(x);
            }
            // fall through: boundary-touching samples can miss the piecewise
            // linear hull of a curved donor; resolve them by exact trace
        }
        auto it = guesses.find(donor);
        const Vec3 guess = it == guesses.end() ? sub.patch.param_center() : it->second;
        const InvertResult inv = sub.patch.invert_map(x, guess);
        if (!inv.converged && inv.residual > solver.options().containment_slack) {
            found = false;
            return 0.0;
        }
        guesses[donor] = inv.xi;
        found = true;
        return field_value(sub.patch.space(), snapshot[donor], inv.xi);
    }

    double value(const InterfaceSpec& spec, int owner, const Vec3& x) {
        for (int donor : spec.donors) {
            bool found = false;
            const double v = donor_value(donor, x, found);
            if (found) return v;
        }
        std::ostringstream os;
        os << "interface of subdomain " << owner << " (face dir " << spec.face.direction
           << " side " << spec.face.side << "): point (" << x.transpose()
           << ") not covered by donors";
        throw Error(os.str());
    }
};

SchwarzSolver::SchwarzSolver(std::vector<SubdomainSpec> specs, SchwarzOptions options)
    : options_(std::move(options)) {
    if (specs.empty()) throw Error("schwarz: need at least one subdomain");
    subdomains_.reserve(specs.size());

    for (std::size_t s = 0; s < specs.size(); ++s) {
        SubdomainSpec& spec = specs[s];
        Subdomain sub;
        sub.name = spec.name.empty() ? "subdomain " + std::to_string(s) : spec.name;
        sub.patch = std::move(spec.patch);
        sub.interfaces = spec.interfaces;

        int max_deg = 0;
        for (int d = 0; d < sub.patch.dim_param(); ++d)
            max_deg = std::max(max_deg, sub.patch.space().direction(d).degree());
        const int qpts =
            options_.quadrature_points > 0 ? options_.quadrature_points : max_deg + 1;
        sub.rules = element_rules(sub.patch.space(), qpts);

        std::vector<FaceId> dirichlet_faces;
        for (const auto& [id, g] : spec.dirichlet) dirichlet_faces.push_back(id);
        for (const InterfaceSpec& ispec : spec.interfaces) {
            dirichlet_faces.push_back(ispec.face);
            sub.interface_faces.push_back(sub.patch.face(ispec.face));
        }
        sub.partition = make_partition(sub.patch.space(), dirichlet_faces);

        sub.stiffness = assemble_stiffness(sub.patch, spec.diffusion, sub.rules);
        sub.load = assemble_load(sub.patch, spec.forcing, sub.rules);
        for (const auto& [id, h] : spec.neumann) {
            const FaceDescriptor face = sub.patch.face(id);
            const auto face_rules = element_rules(face.face_patch->space(), qpts);
            sub.load += assemble_neumann(face, sub.patch.space().total_count(), h, face_rules);
        }

        for (const auto& [id, g] : spec.dirichlet) {
            const FaceDescriptor face = sub.patch.face(id);
            const DirichletLift lift = options_.lift == LiftKind::QuasiInterpolation
                                           ? lift_quasi_interpolation(face, g)
                                           : lift_least_squares(face, g, qpts);
            sub.outer_lift.overwrite_with(lift);
        }

        // Every boundary dof must be covered by the outer lift or an interface
        // face, otherwise the homogenized rows would pin garbage.
        std::vector<char> covered(sub.partition.total(), 0);
        for (int dof : sub.outer_lift.dofs) covered[dof] = 1;
        for (const FaceDescriptor& face : sub.interface_faces)
            for (int dof : face.volume_dofs) covered[dof] = 1;
        for (int dof : sub.partition.boundary)
            if (!covered[dof])
                throw Error(sub.name + ": boundary dof " + std::to_string(dof) +
                            " has no Dirichlet data source");

        // The homogenized matrix does not depend on the boundary values, so it
        // is factorized once and reused every iteration.
        DirichletLift zero_lift;
        zero_lift.dofs = sub.partition.boundary;
        zero_lift.values.assign(sub.partition.boundary.size(), 0.0);
        SparseSystem system{sub.stiffness, sub.load, sub.partition};
        const SparseSystem pinned = homogenize(system, zero_lift);
        sub.factorization = std::make_shared<Eigen::SparseLU<SparseMat>>();
        sub.factorization->analyzePattern(pinned.matrix);
        sub.factorization->factorize(pinned.matrix);
        if (sub.factorization->info() != Eigen::Success)
            throw Error(sub.name + ": singular homogenized system");

        subdomains_.push_back(std::move(sub));
    }

    for (const Subdomain& sub : subdomains_)
        for (const InterfaceSpec& spec : sub.interfaces)
            for (int donor : spec.donors)
                if (donor < 0 || donor >= subdomain_count())
                    throw Error(sub.name + ": interface names unknown donor subdomain " +
                                std::to_string(donor));
}

SchwarzState SchwarzSolver::init_state(const InitialGuess& guess) const {
    // Setup-time containment sweep: every interface sample point must be
    // covered by at least one donor.
    for (int s = 0; s < subdomain_count(); ++s) {
        const Subdomain& sub = subdomains_[s];
        for (std::size_t f = 0; f < sub.interfaces.size(); ++f) {
            for (const Vec3& x : face_sample_points(sub.interface_faces[f])) {
                bool inside = false;
                for (int donor : sub.interfaces[f].donors) {
                    const InvertResult inv = subdomains_[donor].patch.invert_map(x);
                    if (inv.converged || inv.residual <= options_.containment_slack) {
                        inside = true;
                        break;
                    }
                }
                if (!inside) {
                    std::ostringstream os;
                    os << "interface containment violation: " << sub.name << " face (dir "
                       << sub.interfaces[f].face.direction << ", side "
                       << sub.interfaces[f].face.side << ") has sample point ("
                       << x.transpose() << ") outside donors {";
                    for (int donor : sub.interfaces[f].donors)
                        os << " " << subdomains_[donor].name;
                    os << " }";
                    throw Error(os.str());
                }
            }
        }
    }

    SchwarzState state;
    state.coefficients.resize(subdomain_count());
    state.error_history.assign(subdomain_count(), {});
    for (int s = 0; s < subdomain_count(); ++s) {
        const Subdomain& sub = subdomains_[s];
        Eigen::VectorXd alpha = Eigen::VectorXd::Zero(sub.patch.space().total_count());
        if (guess.interface_values) {
            for (const FaceDescriptor& face : sub.interface_faces) {
                const DirichletLift lift =
                    options_.lift == LiftKind::QuasiInterpolation
                        ? lift_quasi_interpolation(face, guess.interface_values)
                        : lift_least_squares(face, guess.interface_values,
                                             quadrature_points_per_direction(sub.patch));
                for (std::size_t k = 0; k < lift.dofs.size(); ++k)
                    alpha[lift.dofs[k]] = lift.values[k];
            }
        }
        for (std::size_t k = 0; k < sub.outer_lift.dofs.size(); ++k)
            alpha[sub.outer_lift.dofs[k]] = sub.outer_lift.values[k];
        state.coefficients[s] = std::move(alpha);
    }
    return state;
}

int SchwarzSolver::quadrature_points_per_direction(const Patch& patch) const {
    if (options_.quadrature_points > 0) return options_.quadrature_points;
    int max_deg = 0;
    for (int d = 0; d < patch.dim_param(); ++d)
        max_deg = std::max(max_deg, patch.space().direction(d).degree());
    return max_deg + 1;
}

Eigen::VectorXd SchwarzSolver::solve_subdomain(int i,
                                               const std::vector<Eigen::VectorXd>& snapshot,
                                               TraceKind trace) const {
    const Subdomain& sub = subdomains_[i];
    Sweep sweep{*this, snapshot, trace, {}, {}};

    // Interface lifts first, outer Dirichlet data last: at shared corner dofs
    // the outer value wins.
    DirichletLift combined;
    for (std::size_t f = 0; f < sub.interfaces.size(); ++f) {
        const ScalarField g = [&, f](const Vec3& x) {
            return sweep.value(sub.interfaces[f], i, x);
        };
        const FaceDescriptor& face = sub.interface_faces[f];
        const DirichletLift lift =
            options_.lift == LiftKind::QuasiInterpolation
                ? lift_quasi_interpolation(face, g)
                : lift_least_squares(face, g, quadrature_points_per_direction(sub.patch));
        combined.overwrite_with(lift);
    }
    combined.overwrite_with(sub.outer_lift);

    Eigen::VectorXd values = Eigen::VectorXd::Zero(sub.partition.total());
    for (std::size_t k = 0; k < combined.dofs.size(); ++k)
        values[combined.dofs[k]] = combined.values[k];

    Eigen::VectorXd rhs = sub.load;
    for (int dof : sub.partition.boundary) {
        const double q = values[dof];
        if (q != 0.0)
            for (SparseMat::InnerIterator it(sub.stiffness, dof); it; ++it)
                if (!sub.partition.is_boundary[it.row()]) rhs[it.row()] -= it.value() * q;
    }
    for (int dof : sub.partition.boundary) rhs[dof] = values[dof];

    return sub.factorization->solve(rhs);
}

void SchwarzSolver::sweep(SchwarzState& state, TraceKind trace, int workers,
                          const std::vector<int>& order, ErrorMode mode) const {
    const int n = subdomain_count();
    if (static_cast<int>(state.coefficients.size()) != n)
        throw Error("schwarz: state does not match solver");
    const std::vector<Eigen::VectorXd> snapshot = state.coefficients;

    std::vector<Eigen::VectorXd> next(n);
    std::vector<std::string> failures(n);

    auto task = [&](int sub_index) {
        try {
            next[sub_index] = solve_subdomain(sub_index, snapshot, trace);
        } catch (const std::exception& e) {
            failures[sub_index] = e.what();
        }
    };

    if (workers <= 1) {
        for (int pos = 0; pos < n; ++pos) task(order[pos]);
    } else {
        // Static round-robin assignment; the join is the iteration barrier that
        // publishes the new snapshots.
        const int used = std::min(workers, n);
        std::vector<std::thread> pool;
        pool.reserve(used);
        for (int w = 0; w < used; ++w)
            pool.emplace_back([&, w] {
                for (int pos = w; pos < n; pos += used) task(order[pos]);
            });
        for (std::thread& t : pool) t.join();
    }

    for (int s = 0; s < n; ++s)
        if (!failures[s].empty())
            throw Error("schwarz sweep aborted at " + subdomains_[s].name + ": " + failures[s]);

    // Error metric per subdomain for this iteration.
    for (int s = 0; s < n; ++s) {
        const Subdomain& sub = subdomains_[s];
        double err;
        if (mode == ErrorMode::ExactSolution && options_.exact_solution) {
            err = iga::l2_error(sub.patch, next[s], options_.exact_solution, sub.rules);
        } else {
            err = iga::l2_norm(sub.patch, next[s] - snapshot[s], sub.rules);
        }
        state.error_history[s].push_back(err);
    }

    state.coefficients = std::move(next);
    ++state.iteration;
}

void SchwarzSolver::iterate_once(SchwarzState& state) const {
    iterate_once(state, options_.trace);
}

void SchwarzSolver::iterate_once(SchwarzState& state, TraceKind trace) const {
    std::vector<int> order(subdomain_count());
    std::iota(order.begin(), order.end(), 0);
    sweep(state, trace, options_.workers, order, options_.error_mode);
}

void SchwarzSolver::parallel_sweep(SchwarzState& state, int workers) const {
    if (workers < 1) throw Error("parallel_sweep: workers must be >= 1");
    std::vector<int> order(subdomain_count());
    std::iota(order.begin(), order.end(), 0);
    sweep(state, options_.trace, workers, order, options_.error_mode);
}

void SchwarzSolver::iterate_once_ordered(SchwarzState& state, const std::vector<int>& order) const {
    if (static_cast<int>(order.size()) != subdomain_count())
        throw Error("iterate_once_ordered: order must be a permutation of all subdomains");
    sweep(state, options_.trace, 1, order, options_.error_mode);
}

RunReport SchwarzSolver::run(SchwarzState& state) const {
    return run(state, options_.epsilon, options_.max_iters, options_.error_mode);
}

RunReport SchwarzSolver::run(SchwarzState& state, double epsilon, int max_iters,
                             ErrorMode mode) const {
    if (!(epsilon > 0.0)) throw Error("run: epsilon must be positive");
    std::vector<int> order(subdomain_count());
    std::iota(order.begin(), order.end(), 0);

    RunReport report;
    for (int it = 0; it < max_iters; ++it) {
        sweep(state, options_.trace, options_.workers, order, mode);
        double worst = 0.0;
        for (int s = 0; s < subdomain_count(); ++s)
            worst = std::max(worst, state.error_history[s].back());
        if (worst < epsilon) {
            report.converged = true;
            break;
        }
    }
    report.iterations = state.iteration;
    report.error_history = state.error_history;
    return report;
}

double SchwarzSolver::subdomain_error(const SchwarzState& state, int i) const {
    const Subdomain& sub = subdomains_.at(i);
    if (!options_.exact_solution) throw Error("subdomain_error: no exact solution configured");
    return iga::l2_error(sub.patch, state.coefficients.at(i), options_.exact_solution, sub.rules);
}

std::vector<std::pair<int, double>> SchwarzSolver::blend_weights(const Vec3& x) const {
    // chi from the parametric distance to the interface faces: linear ramp
    // across the overlap, renormalized to sum to 1 over the covering subdomains.
    constexpr double kRamp = 0.25;
    std::vector<std::pair<int, double>> weights;
    std::vector<Vec3> params;
    for (int s = 0; s < subdomain_count(); ++s) {
        const Subdomain& sub = subdomains_[s];
        const InvertResult inv = sub.patch.invert_map(x);
        if (!inv.converged && inv.residual > options_.containment_slack) continue;
        double w = 1.0;
        for (const InterfaceSpec& spec : sub.interfaces) {
            const KnotVector& kv = sub.patch.space().direction(spec.face.direction);
            const double range = kv.domain_max() - kv.domain_min();
            const double fixed = spec.face.side == 0 ? kv.domain_min() : kv.domain_max();
            const double dist = std::abs(inv.xi[spec.face.direction] - fixed) / range;
            w = std::min(w, std::min(1.0, dist / kRamp));
        }
        weights.emplace_back(s, w);
        params.push_back(inv.xi);
    }
    if (weights.empty()) throw Error("blend: query point not covered by any subdomain");
    double total = 0.0;
    for (const auto& [s, w] : weights) total += w;
    if (total <= 0.0) {
        for (auto& [s, w] : weights) w = 1.0 / weights.size();
    } else {
        for (auto& [s, w] : weights) w /= total;
    }
    return weights;
}

std::vector<double> SchwarzSolver::blend_global(const SchwarzState& state,
                                                const std::vector<Vec3>& points) const {
    std::vector<double> values;
    values.reserve(points.size());
    for (const Vec3& x : points) {
        double value = 0.0;
        for (const auto& [s, chi] : blend_weights(x)) {
            const Subdomain& sub = subdomains_[s];
            const Vec3 xi = sub.patch.invert_map(x).xi;
            value += chi * field_value(sub.patch.space(), state.coefficients[s], xi);
        }
        values.push_back(value);
    }
    return values;
}

OperatorForm1D build_operator_form_1d(const SchwarzSolver& solver, TraceKind1D kind) {
    if (solver.subdomain_count() != 2)
        throw Error("operator form: requires exactly two subdomains");
    for (int s = 0; s < 2; ++s) {
        const Patch& patch = solver.subdomain(s).patch;
        if (patch.dim_param() != 1 || patch.dim_phys() != 1)
            throw Error("operator form: requires one-dimensional subdomains");
        const KnotVector& kv = patch.space().direction(0);
        for (int k = 0; k <= 8; ++k) {
            Vec3 xi = Vec3::Zero();
            xi[0] = kv.domain_min() + (kv.domain_max() - kv.domain_min()) * k / 8.0;
            if (std::abs(patch.map(xi)[0] - xi[0]) > 1e-10 * patch.diameter())
                throw Error("operator form: requires identity geometry");
        }
    }

    OperatorForm1D form;
    const int n1 = solver.subdomain(0).patch.space().total_count();
    const int n2 = solver.subdomain(1).patch.space().total_count();
    form.sizes = {n1, n2};
    const int n = n1 + n2;
    form.A.resize(n, n);
    form.A_dir.resize(n, n);
    form.P.resize(n, n);
    form.f = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::Triplet<double>> ta, tdir, tp;
    const int offset[2] = {0, n1};
    for (int s = 0; s < 2; ++s) {
        const Subdomain& sub = solver.subdomain(s);
        const int off = offset[s];

        for (int col = 0; col < sub.stiffness.outerSize(); ++col)
            for (SparseMat::InnerIterator it(sub.stiffness, col); it; ++it) {
                if (sub.partition.is_boundary[it.row()]) continue;
                if (sub.partition.is_boundary[it.col()])
                    tdir.emplace_back(off + it.row(), off + it.col(), -it.value());
                else
                    ta.emplace_back(off + it.row(), off + it.col(), it.value());
            }
        for (int dof : sub.partition.boundary) {
            ta.emplace_back(off + dof, off + dof, 1.0);
            tdir.emplace_back(off + dof, off + dof, 1.0);
        }
        for (int dof : sub.partition.interior) form.f[off + dof] = sub.load[dof];
        for (std::size_t k = 0; k < sub.outer_lift.dofs.size(); ++k)
            form.f[off + sub.outer_lift.dofs[k]] = sub.outer_lift.values[k];

        // Interface rows of P: donor basis values at the interface point.
        const int donor_s = 1 - s;
        const Subdomain& donor = solver.subdomain(donor_s);
        const KnotVector& donor_kv = donor.patch.space().direction(0);
        for (std::size_t f = 0; f < sub.interfaces.size(); ++f) {
            if (sub.interfaces[f].donors != std::vector<int>{donor_s})
                throw Error("operator form: interfaces must point at the other subdomain");
            const int row = off + sub.interface_faces[f].volume_dofs.at(0);
            const double point = sub.interface_faces[f].face_patch->map(Vec3::Zero())[0];
            if (kind == TraceKind1D::Exact) {
                const BasisSpan span = donor_kv.eval_basis(point);
                for (std::size_t j = 0; j < span.values.size(); ++j)
                    tp.emplace_back(row, offset[donor_s] + span.first_index + j, span.values[j]);
            } else {
                // Linear interpolation between the donor values at the ends of
                // the knot span containing the point.
                const auto& knots = donor_kv.knots();
                const int span_idx = donor_kv.find_span(point);
                const double lo = knots[span_idx], hi = knots[span_idx + 1];
                const double w_hi = (point - lo) / (hi - lo);
                const double w_lo = (hi - point) / (hi - lo);
                for (const auto& [node, w] : {std::pair{lo, w_lo}, std::pair{hi, w_hi}}) {
                    if (w == 0.0) continue;
                    const BasisSpan span = donor_kv.eval_basis(node);
                    for (std::size_t j = 0; j < span.values.size(); ++j)
                        tp.emplace_back(row, offset[donor_s] + span.first_index + j,
                                        w * span.values[j]);
                }
            }
        }
    }
    form.A.setFromTriplets(ta.begin(), ta.end());
    form.A_dir.setFromTriplets(tdir.begin(), tdir.end());
    form.P.setFromTriplets(tp.begin(), tp.end());
    return form;
}

Eigen::VectorXd iterate_operator_form(const OperatorForm1D& form, const Eigen::VectorXd& u_prev) {
    const Eigen::VectorXd rhs = form.f + form.A_dir * (form.P * u_prev);
    return solve_sparse(form.A, rhs);
}

}  // namespace iga
