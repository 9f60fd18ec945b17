#pragma once

#include "iga/schwarz.hpp"

#include <string>

namespace iga {

/// CSV with columns (iteration, subdomain, error), one row per subdomain and
/// iteration. Schema documented in the repository README.
void write_error_history_csv(const std::string& path,
                             const std::vector<std::vector<double>>& history);

/// CSV with columns (h, error).
void write_series_csv(const std::string& path, const ConvergenceSeries& series);

/// CSV with columns (rho, abs_dudrho) for radial-derivative samples.
void write_radial_csv(const std::string& path, const std::vector<double>& rho,
                      const std::vector<double>& dudrho);

/// Table-1-shaped CSV: one column per overlap value, one row per iteration,
/// cells are the max error at that iteration (empty once a run has stopped).
/// An empty report list yields a header-only file.
void write_overlap_table_csv(const std::string& path, const std::vector<double>& overlaps,
                             const std::vector<std::vector<double>>& max_error_per_iteration);

/// Degree-of-freedom statistic tables as CSV (rows = partitions, one column
/// per degree).
void write_dof_table_csv(const std::string& path, const std::vector<int>& partitions,
                         const std::vector<int>& degrees,
                         const std::vector<std::vector<long>>& counts);

/// Legacy VTK structured-grid snapshot of one sampled point set.
struct StructuredField {
    std::array<int, 3> dims{1, 1, 1};
    std::vector<Vec3> points;   // x fastest
    std::vector<double> values;
};

void write_vtk_structured(const std::string& path, const StructuredField& field,
                          const std::string& field_name = "u");

/// Reader for the exact format written above (round-trip checks).
StructuredField read_vtk_structured(const std::string& path);

/// Sample the blended global field on each subdomain's parametric lattice
/// (resolution points per direction) and write one VTK file per subdomain:
/// <prefix>_p<k>.vtk. Returns the written paths.
std::vector<std::string> export_field(const SchwarzSolver& solver, const SchwarzState& state,
                                      int resolution, const std::string& prefix);

}  // namespace iga
