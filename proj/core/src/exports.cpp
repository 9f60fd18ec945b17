#include "iga/exports.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace iga {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << std::setprecision(17);
    return out;
}

}  // namespace

void write_error_history_csv(const std::string& path,
                             const std::vector<std::vector<double>>& history) {
    auto out = open_out(path);
    out << "iteration,subdomain,error\n";
    std::size_t iterations = 0;
    for (const auto& h : history) iterations = std::max(iterations, h.size());
    for (std::size_t it = 0; it < iterations; ++it)
        for (std::size_t s = 0; s < history.size(); ++s)
            if (it < history[s].size())
                out << it + 1 << "," << s << "," << history[s][it] << "\n";
}

void write_series_csv(const std::string& path, const ConvergenceSeries& series) {
    auto out = open_out(path);
    out << "h,error\n";
    for (std::size_t i = 0; i < series.h.size(); ++i)
        out << series.h[i] << "," << series.error[i] << "\n";
}

void write_radial_csv(const std::string& path, const std::vector<double>& rho,
                      const std::vector<double>& dudrho) {
    if (rho.size() != dudrho.size()) throw Error("write_radial_csv: size mismatch");
    auto out = open_out(path);
    out << "rho,abs_dudrho\n";
    for (std::size_t i = 0; i < rho.size(); ++i) out << rho[i] << "," << dudrho[i] << "\n";
}

void write_overlap_table_csv(const std::string& path, const std::vector<double>& overlaps,
                             const std::vector<std::vector<double>>& max_error_per_iteration) {
    if (overlaps.size() != max_error_per_iteration.size())
        throw Error("write_overlap_table_csv: size mismatch");
    auto out = open_out(path);
    out << "iteration";
    for (double ov : overlaps) {
        std::ostringstream label;  // short label, not full precision
        label << ov;
        out << ",overlap_" << label.str();
    }
    out << "\n";
    std::size_t rows = 0;
    for (const auto& col : max_error_per_iteration) rows = std::max(rows, col.size());
    for (std::size_t it = 0; it < rows; ++it) {
        out << it + 1;
        for (const auto& col : max_error_per_iteration) {
            out << ",";
            if (it < col.size()) out << col[it];
        }
        out << "\n";
    }
}

void write_dof_table_csv(const std::string& path, const std::vector<int>& partitions,
                         const std::vector<int>& degrees,
                         const std::vector<std::vector<long>>& counts) {
    auto out = open_out(path);
    out << "partitions";
    for (int p : degrees) out << ",degree_" << p;
    out << "\n";
    for (std::size_t r = 0; r < partitions.size(); ++r) {
        out << partitions[r];
        for (std::size_t c = 0; c < degrees.size(); ++c) out << "," << counts.at(r).at(c);
        out << "\n";
    }
}

void write_vtk_structured(const std::string& path, const StructuredField& field,
                          const std::string& field_name) {
    const std::size_t n = field.points.size();
    if (field.values.size() != n) throw Error("write_vtk_structured: size mismatch");
    if (static_cast<std::size_t>(field.dims[0]) * field.dims[1] * field.dims[2] != n)
        throw Error("write_vtk_structured: dims do not match point count");
    auto out = open_out(path);
    out << "# vtk DataFile Version 3.0\n";
    out << "igaschwarz field export\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_GRID\n";
    out << "DIMENSIONS " << field.dims[0] << " " << field.dims[1] << " " << field.dims[2] << "\n";
    out << "POINTS " << n << " double\n";
    for (const Vec3& p : field.points) out << p[0] << " " << p[1] << " " << p[2] << "\n";
    out << "POINT_DATA " << n << "\n";
    out << "SCALARS " << field_name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : field.values) out << v << "\n";
}

StructuredField read_vtk_structured(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    StructuredField field;
    std::string line, token;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        if (!(ls >> token)) continue;
        if (token == "DIMENSIONS") {
            ls >> field.dims[0] >> field.dims[1] >> field.dims[2];
        } else if (token == "POINTS") {
            ls >> n;
            field.points.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                in >> field.points[i][0] >> field.points[i][1] >> field.points[i][2];
        } else if (token == "SCALARS") {
            std::getline(in, line);  // LOOKUP_TABLE line
            field.values.resize(n);
            for (std::size_t i = 0; i < n; ++i) in >> field.values[i];
        }
    }
    if (field.points.empty() || field.values.size() != field.points.size())
        throw Error("read_vtk_structured: malformed file " + path);
    return field;
}

std::vector<std::string> export_field(const SchwarzSolver& solver, const SchwarzState& state,
                                      int resolution, const std::string& prefix) {
    if (resolution < 2) throw Error("export_field: resolution must be >= 2");
    std::vector<std::string> paths;
    for (int s = 0; s < solver.subdomain_count(); ++s) {
        const Patch& patch = solver.subdomain(s).patch;
        const int dim = patch.dim_param();
        StructuredField field;
        for (int d = 0; d < dim; ++d) field.dims[d] = resolution;

        const Vec3 lo = patch.space().domain_min();
        const Vec3 hi = patch.space().domain_max();
        const std::size_t total =
            static_cast<std::size_t>(field.dims[0]) * field.dims[1] * field.dims[2];
        std::vector<Vec3> query;
        query.reserve(total);
        for (int k = 0; k < field.dims[2]; ++k)
            for (int j = 0; j < field.dims[1]; ++j)
                for (int i = 0; i < field.dims[0]; ++i) {
                    Vec3 xi = lo;
                    const std::array<int, 3> idx{i, j, k};
                    for (int d = 0; d < dim; ++d)
                        xi[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / double(field.dims[d] - 1);
                    field.points.push_back(patch.map(xi));
                    query.push_back(field.points.back());
                }
        field.values = solver.blend_global(state, query);

        const std::string path = prefix + "_p" + std::to_string(s) + ".vtk";
        write_vtk_structured(path, field);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace iga
