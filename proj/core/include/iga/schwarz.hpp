#pragma once

#include "iga/analysis.hpp"
#include "iga/boundary.hpp"

#include <Eigen/SparseLU>

#include <memory>

namespace iga {

enum class TraceKind { Exact, Interpolated };
enum class LiftKind { LeastSquares, QuasiInterpolation };
enum class ErrorMode { ExactSolution, SuccessiveIterates };

/// One interface piece of a subdomain boundary: the owner face plus the donor
/// subdomains whose previous iterates supply its Dirichlet data. A face sample
/// point takes its value from the first listed donor containing it.
struct InterfaceSpec {
    FaceId face;
    std::vector<int> donors;
};

/// Everything defining one Schwarz subproblem before assembly.
struct SubdomainSpec {
    Patch patch;
    ScalarField diffusion = constant_field(1.0);
    ScalarField forcing = constant_field(0.0);
    std::vector<std::pair<FaceId, ScalarField>> dirichlet;  // outer Dirichlet faces
    std::vector<std::pair<FaceId, ScalarField>> neumann;    // outer Neumann faces
    std::vector<InterfaceSpec> interfaces;
    std::string name;
};

struct SchwarzOptions {
    TraceKind trace = TraceKind::Exact;
    LiftKind lift = LiftKind::LeastSquares;
    int trace_resolution = 4;  // lattice cells per knot span for interpolated traces
    double epsilon = 1e-6;
    int max_iters = 100;
    int workers = 1;
    ErrorMode error_mode = ErrorMode::ExactSolution;
    ScalarField exact_solution;   // required by ExactSolution mode
    int quadrature_points = 0;    // per direction; 0 = max degree + 1
    /// Physical tolerance for donor containment. Independently approximated
    /// neighbor boundaries (fitted arcs) can mismatch by the geometric
    /// consistency error; a sample within this distance of a donor's image is
    /// taken at the donor's nearest boundary point.
    double containment_slack = 0.0;
};

/// Zero policy by default; with a function set, interface dofs are initialized
/// to its lift (outer Dirichlet lifts always win afterwards).
struct InitialGuess {
    ScalarField interface_values;
};

/// Coefficient vectors of all subdomains plus iteration bookkeeping. Subdomains
/// advance in lockstep; error_history[i] has exactly `iteration` entries.
struct SchwarzState {
    std::vector<Eigen::VectorXd> coefficients;
    int iteration = 0;
    std::vector<std::vector<double>> error_history;
};

struct RunReport {
    bool converged = false;
    int iterations = 0;
    std::vector<std::vector<double>> error_history;  // [subdomain][iteration]
};

/// One assembled Schwarz subproblem (immutable after setup).
struct Subdomain {
    Patch patch;
    std::vector<ElementRule> rules;
    SparseMat stiffness;         // pristine Galerkin matrix over all dofs
    Eigen::VectorXd load;        // source + Neumann contributions
    DofPartition partition;      // Dirichlet = outer faces + interface faces
    DirichletLift outer_lift;    // static outer Dirichlet values
    std::vector<FaceDescriptor> interface_faces;
    std::vector<InterfaceSpec> interfaces;
    std::string name;
    std::shared_ptr<Eigen::SparseLU<SparseMat>> factorization;  // of the homogenized matrix
};

/// Additive Schwarz driver: every iteration solves all subproblems
/// independently against snapshots of iteration n-1 (block-Jacobi character),
/// then publishes the new coefficient vectors.
class SchwarzSolver {
public:
    SchwarzSolver(std::vector<SubdomainSpec> specs, SchwarzOptions options);

    int subdomain_count() const { return static_cast<int>(subdomains_.size()); }
    const Subdomain& subdomain(int i) const { return subdomains_.at(i); }
    const SchwarzOptions& options() const { return options_; }

    /// Fresh state: coefficients zero (or the guess policy's interface lift),
    /// outer Dirichlet lifts applied. Verifies that every interface face is
    /// covered by its donors; violations name the offending pair.
    SchwarzState init_state(const InitialGuess& guess = {}) const;

    /// One additive sweep with options().workers threads. Results are
    /// identical for any worker count and any processing order.
    void iterate_once(SchwarzState& state) const;
    void iterate_once(SchwarzState& state, TraceKind trace) const;

    /// One sweep with an explicit worker count (determinism/speedup studies).
    void parallel_sweep(SchwarzState& state, int workers) const;

    /// Test hook: sweep processing subdomains in the given permutation.
    void iterate_once_ordered(SchwarzState& state, const std::vector<int>& order) const;

    /// Iterate until the per-subdomain error metric drops below epsilon or
    /// max_iters is reached; the report carries the full error history.
    RunReport run(SchwarzState& state) const;
    RunReport run(SchwarzState& state, double epsilon, int max_iters, ErrorMode mode) const;

    /// Per-subdomain error of the current state (mode ExactSolution).
    double subdomain_error(const SchwarzState& state, int i) const;

    /// Blended global field chi_1 u_1 + ... at the query points; throws on a
    /// point not covered by any subdomain.
    std::vector<double> blend_global(const SchwarzState& state,
                                     const std::vector<Vec3>& points) const;

    /// Blend weights at one point as (subdomain, chi) pairs; chi sums to 1.
    std::vector<std::pair<int, double>> blend_weights(const Vec3& x) const;

private:
    struct Sweep;
    std::vector<Subdomain> subdomains_;
    SchwarzOptions options_;

    int quadrature_points_per_direction(const Patch& patch) const;
    void sweep(SchwarzState& state, TraceKind trace, int workers, const std::vector<int>& order,
               ErrorMode mode) const;
    Eigen::VectorXd solve_subdomain(int i, const std::vector<Eigen::VectorXd>& snapshot,
                                    TraceKind trace) const;
};

/// Block matrices of the one-dimensional discretized algorithm
///   A u^n = f + A_dir P u^{n-1}
/// with A = diag(pinned A_1, pinned A_2), A_dir carrying the -A(I,B) coupling,
/// and P holding the donor basis values at the interface points (exact trace)
/// or their knot-span convex combinations (linear trace).
struct OperatorForm1D {
    SparseMat A;
    SparseMat A_dir;
    SparseMat P;
    Eigen::VectorXd f;
    std::array<int, 2> sizes{0, 0};
};

enum class TraceKind1D { Exact, Linear };

/// Requires exactly two 1D subdomains with identity geometry.
OperatorForm1D build_operator_form_1d(const SchwarzSolver& solver, TraceKind1D kind);

/// One step of the matrix recurrence: solves A u = f + A_dir (P u_prev).
Eigen::VectorXd iterate_operator_form(const OperatorForm1D& form, const Eigen::VectorXd& u_prev);

}  // namespace iga
