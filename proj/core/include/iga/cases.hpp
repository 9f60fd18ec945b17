#pragma once

#include "iga/config.hpp"
#include "iga/exports.hpp"

namespace iga {

/// A fully specified registry case: subdomain specs, solver options, the exact
/// solution (all shipped cases have one), and the acceptance tolerance its
/// default run is judged against.
struct CaseSetup {
    std::vector<SubdomainSpec> specs;
    SchwarzOptions options;
    ScalarField exact;
    VectorField exact_gradient;  // may be empty
    double tolerance = 0.0;
    std::string description;
};

/// Build the geometry, PDE data and options of a registry case from a config.
/// dof_stats is table-only and cannot be built into a solver setup.
CaseSetup build_case(const CaseConfig& config);

/// Degree-of-freedom count of the 2D statistics table: a chain of four n x n
/// square patches sharing one control line per junction, n = partitions +
/// degree, so dofs = n (4n - 3).
long dof_count_2d(int degree, int partitions);

/// The published 3D statistics values (degree in {1,2}, partitions in {1,2});
/// throws outside the recorded table.
long dof_count_3d(int degree, int partitions);

/// Outcome of a full case run.
struct CaseResult {
    bool converged = false;
    bool passed = false;
    int iterations = 0;
    double final_error = 0.0;
    std::vector<std::string> artifacts;
};

/// Run a case end to end: solve, write error-history CSV, convergence CSV,
/// blended-field VTK export and a summary into config.out_dir. dof_stats
/// writes its tables instead. Returns the result; `passed` mirrors the exit
/// status of the CLI.
CaseResult run_case(const CaseConfig& config);

/// Exact solution of the corner-singularity problem: truncated series with
/// terms (rho/3)^(2n/3) sin(2n theta/3)/n^3 over odd n <= 199, scaled so the
/// arc boundary condition theta (alpha - theta) is matched.
double sector_exact_solution(double x, double y);

}  // namespace iga
