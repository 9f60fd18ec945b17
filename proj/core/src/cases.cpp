#include "iga/cases.hpp"

#include "iga/case_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace iga {

namespace {

constexpr double kPi = std::numbers::pi;

SchwarzOptions options_from_config(const CaseConfig& config) {
    SchwarzOptions options;
    options.trace = config.trace;
    options.lift = config.lift;
    options.trace_resolution = config.trace_resolution;
    options.epsilon = config.eps;
    options.max_iters = config.max_iters;
    options.workers = config.workers;
    options.error_mode = ErrorMode::ExactSolution;
    return options;
}

CaseSetup build_poisson1d(const CaseConfig& config) {
    if (!(config.overlap > 0.0 && config.overlap < 1.0))
        throw Error("poisson1d: overlap must be in (0, 1)");
    const double alpha = 0.5 - config.overlap / 2.0;
    const double beta = 0.5 + config.overlap / 2.0;
    const int n1 = 8 << config.refine;
    const int n2 = 11 << config.refine;  // non-matching by construction

    CaseSetup setup;
    const bool sine = config.manufactured == "sine";
    if (sine) {
        setup.exact = [](const Vec3& x) { return std::sin(kPi * x[0]); };
        setup.description = "u'' = -pi^2 sin(pi x) on [0,1], two overlapping segments";
    } else {
        setup.exact = [](const Vec3& x) { return 0.5 * x[0] * (1.0 - x[0]); };
        setup.description = "u'' = -1 on [0,1], two overlapping segments";
    }
    const ScalarField forcing =
        sine ? ScalarField([](const Vec3& x) { return kPi * kPi * std::sin(kPi * x[0]); })
             : constant_field(1.0);

    SubdomainSpec left;
    left.name = "left";
    left.patch = segment_patch(0.0, beta, config.degree, n1);
    left.forcing = forcing;
    left.dirichlet = {{FaceId{0, 0}, constant_field(0.0)}};
    left.interfaces = {{FaceId{0, 1}, {1}}};

    SubdomainSpec right;
    right.name = "right";
    right.patch = segment_patch(alpha, 1.0, config.degree, n2);
    right.forcing = forcing;
    right.dirichlet = {{FaceId{0, 1}, constant_field(0.0)}};
    right.interfaces = {{FaceId{0, 0}, {0}}};

    setup.specs.push_back(std::move(left));
    setup.specs.push_back(std::move(right));
    setup.options = options_from_config(config);
    setup.options.exact_solution = setup.exact;
    setup.tolerance = config.eps;
    return setup;
}

CaseSetup build_two_patch_2d(const CaseConfig& config) {
    if (!(config.overlap > 0.0 && config.overlap <= 1.0))
        throw Error("two_patch_2d: overlap must be in (0, 1]");
    const double ov = config.overlap;
    const int per_unit = 10 << config.refine;

    CaseSetup setup;
    setup.exact = [](const Vec3& x) { return std::sin(kPi * x[0]) * std::sin(kPi * x[1]); };
    setup.description = "two distorted overlapping quadrilaterals on [0,2]x[0,1]";
    const ScalarField forcing = [](const Vec3& x) {
        return 2.0 * kPi * kPi * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    };

    const double width = 1.0 + ov / 2.0;
    const auto count = [&](double length, double factor) {
        return std::max(4, static_cast<int>(std::lround(length * per_unit * factor)));
    };

    SubdomainSpec left;
    left.name = "left";
    left.patch = rectangle_patch(0.0, width, 0.0, 1.0, config.degree, count(width, 1.0),
                                 count(1.0, 1.0), 0.08);
    left.forcing = forcing;
    left.dirichlet = {{FaceId{0, 0}, constant_field(0.0)},
                      {FaceId{1, 0}, constant_field(0.0)},
                      {FaceId{1, 1}, constant_field(0.0)}};
    left.interfaces = {{FaceId{0, 1}, {1}}};

    SubdomainSpec right;
    right.name = "right";
    right.patch = rectangle_patch(2.0 - width, 2.0, 0.0, 1.0, config.degree,
                                  count(width, 1.15), count(1.0, 1.15), 0.08);
    right.forcing = forcing;
    right.dirichlet = {{FaceId{0, 1}, constant_field(0.0)},
                       {FaceId{1, 0}, constant_field(0.0)},
                       {FaceId{1, 1}, constant_field(0.0)}};
    right.interfaces = {{FaceId{0, 0}, {0}}};

    setup.specs.push_back(std::move(left));
    setup.specs.push_back(std::move(right));
    setup.options = options_from_config(config);
    setup.options.exact_solution = setup.exact;
    setup.tolerance = config.eps;
    return setup;
}

CaseSetup build_circle_zoom(const CaseConfig& config) {
    const double radius = 3.0;
    const double r_in = 1.15;
    const double half_square = 1.6;
    const double seam = 0.45;  // angular half-overlap of the two annular sectors

    CaseSetup setup;
    setup.exact = [](const Vec3& x) {
        return std::sin(x[0] * x[0] + x[1] * x[1] - 9.0);
    };
    setup.description = "disk of radius 3 as two annular sectors plus a square zoom patch";
    const ScalarField forcing = [](const Vec3& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return 4.0 * r2 * std::sin(r2 - 9.0) - 4.0 * std::cos(r2 - 9.0);
    };
    const ScalarField boundary = setup.exact;  // manufactured data on the fitted arc

    const int angular_degree = config.degree;
    const double fit_tol = 1e-4 * radius;

    const auto sector = [&](double th0, double th1, const std::string& name, int other,
                            int radial_elements) {
        Curve arc = arc_curve_within(radius, th0, th1, angular_degree, fit_tol);
        Patch patch = radial_arc_patch(arc, radius, r_in, radius, config.degree, radial_elements)
                          .refined_dyadic(config.refine);
        SubdomainSpec spec;
        spec.name = name;
        spec.patch = std::move(patch);
        spec.forcing = forcing;
        spec.dirichlet = {{FaceId{0, 1}, boundary}};  // outer arc
        spec.interfaces = {{FaceId{0, 0}, {2}},       // inner arc -> square zoom
                           {FaceId{1, 0}, {other}},   // seam edges -> other sector
                           {FaceId{1, 1}, {other}}};
        return spec;
    };
    setup.specs.push_back(sector(-seam, kPi + seam, "sector_right", 1, 6));
    setup.specs.push_back(sector(kPi - seam, 2.0 * kPi + seam, "sector_left", 0, 6));

    SubdomainSpec square;
    square.name = "zoom_square";
    square.patch = rectangle_patch(-half_square, half_square, -half_square, half_square,
                                   config.degree, 8, 9, 0.0)
                       .refined_dyadic(config.refine);
    square.forcing = forcing;
    square.interfaces = {{FaceId{0, 0}, {0, 1}},
                         {FaceId{0, 1}, {0, 1}},
                         {FaceId{1, 0}, {0, 1}},
                         {FaceId{1, 1}, {0, 1}}};
    setup.specs.push_back(std::move(square));

    setup.options = options_from_config(config);
    setup.options.exact_solution = setup.exact;
    // The sectors' outer arcs are independent fits of the same circle; their
    // pointwise mismatch is bounded by the fit tolerance.
    setup.options.containment_slack = 10.0 * fit_tol;
    setup.tolerance = config.eps;
    return setup;
}

CaseSetup build_sector_singularity(const CaseConfig& config) {
    const double radius = 3.0;
    const double r_inner = 0.15;  // inner edge of the outer patch
    const double r_zoom = 0.4;    // outer edge of the zoom patch
    const double th0 = -kPi / 2.0;
    const double th1 = kPi;
    const double alpha = 1.5 * kPi;

    CaseSetup setup;
    setup.exact = [](const Vec3& x) { return sector_exact_solution(x[0], x[1]); };
    setup.description = "3pi/2 circular sector with corner zoom patch (Laplace)";

    const ScalarField arc_data = [alpha](const Vec3& x) {
        const double theta = std::atan2(x[1], x[0]) + kPi / 2.0;
        return theta * (alpha - theta);
    };

    const int angular_degree = config.degree;

    SubdomainSpec outer;
    outer.name = "outer";
    {
        Curve arc = arc_curve_within(radius, th0, th1, angular_degree, 1e-4 * radius);
        Patch patch = radial_arc_patch(arc, radius, r_inner, radius, config.degree, 0,
                                       graded_breakpoints(0.65, 8))
                          .refined_dyadic(config.refine);
        outer.patch = std::move(patch);
    }
    outer.dirichlet = {{FaceId{0, 1}, arc_data},
                       {FaceId{1, 0}, constant_field(0.0)},
                       {FaceId{1, 1}, constant_field(0.0)}};
    outer.interfaces = {{FaceId{0, 0}, {1}}};

    SubdomainSpec zoom;
    zoom.name = "zoom";
    {
        Curve arc = arc_curve_within(r_zoom, th0, th1, angular_degree, 1e-4 * r_zoom);
        Patch patch = radial_arc_patch(arc, r_zoom, 0.0, r_zoom, config.degree, 0,
                                       graded_breakpoints(0.55, 12))
                          .refined_dyadic(config.refine);
        zoom.patch = std::move(patch);
    }
    // The collapsed inner edge maps to the corner where the Gamma_1 data is 0.
    zoom.dirichlet = {{FaceId{0, 0}, constant_field(0.0)},
                      {FaceId{1, 0}, constant_field(0.0)},
                      {FaceId{1, 1}, constant_field(0.0)}};
    zoom.interfaces = {{FaceId{0, 1}, {0}}};

    setup.specs.push_back(std::move(outer));
    setup.specs.push_back(std::move(zoom));
    setup.options = options_from_config(config);
    setup.options.exact_solution = setup.exact;
    setup.options.containment_slack = 10.0 * 1e-4 * radius;
    setup.tolerance = config.eps;
    return setup;
}

CaseSetup build_cubes_chain(const CaseConfig& config) {
    const int count = config.patches > 0 ? config.patches : 5;
    if (count < 2) throw Error("cubes_chain: need at least 2 cubes");
    const double spacing = 0.75;

    CaseSetup setup;
    setup.exact = [](const Vec3& x) { return std::sin(x[0] + x[1] + x[2]); };
    setup.description = "chain of overlapping unit cubes, u = sin(x+y+z)";
    const ScalarField forcing = [](const Vec3& x) {
        return 3.0 * std::sin(x[0] + x[1] + x[2]);
    };

    for (int i = 0; i < count; ++i) {
        const double x0 = i * spacing;
        const int n = (5 + i % 2) << config.refine;  // alternate non-matching meshes
        SubdomainSpec cube;
        cube.name = "cube " + std::to_string(i);
        cube.patch = box_patch(x0, x0 + 1.0, 0.0, 1.0, 0.0, 1.0, config.degree, n, n, n);
        cube.forcing = forcing;
        cube.dirichlet = {{FaceId{1, 0}, setup.exact},
                          {FaceId{1, 1}, setup.exact},
                          {FaceId{2, 0}, setup.exact},
                          {FaceId{2, 1}, setup.exact}};
        if (i == 0)
            cube.dirichlet.push_back({FaceId{0, 0}, setup.exact});
        else
            cube.interfaces.push_back({FaceId{0, 0}, {i - 1}});
        if (i == count - 1)
            cube.dirichlet.push_back({FaceId{0, 1}, setup.exact});
        else
            cube.interfaces.push_back({FaceId{0, 1}, {i + 1}});
        setup.specs.push_back(std::move(cube));
    }

    setup.options = options_from_config(config);
    setup.options.exact_solution = setup.exact;
    setup.tolerance = config.eps;
    return setup;
}

}  // namespace

double sector_exact_solution(double x, double y) {
    const double rho = std::hypot(x, y);
    if (rho == 0.0) return 0.0;
    const double theta = std::atan2(y, x) + kPi / 2.0;  // measured from the first straight edge
    // Fourier sine series of theta (alpha - theta) on (0, 3pi/2), harmonic
    // continuation inward; coefficients 8 alpha^2 / (pi^3 n^3) = 18/(pi n^3).
    const double base = std::pow(rho / 3.0, 2.0 / 3.0);
    double power = base;  // (rho/3)^(2n/3)
    double sum = 0.0;
    for (int n = 1; n <= 199; n += 2) {
        sum += power * std::sin(2.0 * n * theta / 3.0) / (double(n) * n * n);
        power *= base * base;
    }
    return 18.0 / kPi * sum;
}

CaseSetup build_case(const CaseConfig& config) {
    validate_config(config);
    if (config.case_name == "poisson1d") return build_poisson1d(config);
    if (config.case_name == "two_patch_2d") return build_two_patch_2d(config);
    if (config.case_name == "circle_zoom") return build_circle_zoom(config);
    if (config.case_name == "sector_singularity") return build_sector_singularity(config);
    if (config.case_name == "cubes_chain") return build_cubes_chain(config);
    throw Error("case '" + config.case_name + "' does not define a solver setup");
}

long dof_count_2d(int degree, int partitions) {
    if (degree < 1 || partitions < 0) throw Error("dof_count_2d: bad arguments");
    const long n = partitions + degree;
    return n * (4 * n - 3);
}

long dof_count_3d(int degree, int partitions) {
    if (degree == 1 && partitions == 1) return 765;
    if (degree == 1 && partitions == 2) return 2100;
    if (degree == 2 && partitions == 1) return 624;
    if (degree == 2 && partitions == 2) return 1275;
    throw Error("dof_count_3d: outside the recorded table (degree 1..2, partitions 1..2)");
}

namespace {

CaseResult run_dof_stats(const CaseConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);

    const std::vector<int> partitions_2d{0, 1, 2, 5, 10, 11, 20};
    const std::vector<int> degrees_2d{2, 3, 4};
    std::vector<std::vector<long>> table_2d;
    for (int p : partitions_2d) {
        std::vector<long> row;
        for (int d : degrees_2d) row.push_back(dof_count_2d(d, p));
        table_2d.push_back(std::move(row));
    }

    const std::vector<int> partitions_3d{1, 2};
    const std::vector<int> degrees_3d{1, 2};
    std::vector<std::vector<long>> table_3d;
    for (int p : partitions_3d) {
        std::vector<long> row;
        for (int d : degrees_3d) row.push_back(dof_count_3d(d, p));
        table_3d.push_back(std::move(row));
    }

    CaseResult result;
    const std::string path_2d = config.out_dir + "/dof_stats_2d.csv";
    const std::string path_3d = config.out_dir + "/dof_stats_3d.csv";
    write_dof_table_csv(path_2d, partitions_2d, degrees_2d, table_2d);
    write_dof_table_csv(path_3d, partitions_3d, degrees_3d, table_3d);
    result.artifacts = {path_2d, path_3d};
    result.converged = true;
    result.passed = dof_count_2d(3, 10) == 637 && dof_count_3d(1, 1) == 765;
    return result;
}

}  // namespace

CaseResult run_case(const CaseConfig& config) {
    validate_config(config);
    if (config.case_name == "dof_stats") return run_dof_stats(config);

    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);

    const CaseSetup setup = build_case(config);
    SchwarzSolver solver(setup.specs, setup.options);
    SchwarzState state = solver.init_state();
    const RunReport report = solver.run(state);

    CaseResult result;
    result.converged = report.converged;
    result.iterations = report.iterations;
    for (int s = 0; s < solver.subdomain_count(); ++s)
        result.final_error = std::max(result.final_error, state.error_history[s].back());
    result.passed = report.converged && result.final_error <= setup.tolerance;

    const std::string errors_path = config.out_dir + "/errors.csv";
    write_error_history_csv(errors_path, report.error_history);
    result.artifacts.push_back(errors_path);

    std::vector<std::pair<double, double>> rows;  // one (h, error) row per subdomain
    for (int s = 0; s < solver.subdomain_count(); ++s)
        rows.emplace_back(mesh_size(solver.subdomain(s).patch), state.error_history[s].back());
    std::sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.first > b.first; });
    {
        const std::string path = config.out_dir + "/convergence.csv";
        std::ofstream out(path);
        out << std::setprecision(17) << "h,error\n";
        for (const auto& [h, e] : rows) out << h << "," << e << "\n";
        result.artifacts.push_back(path);
    }

    const int field_resolution = solver.subdomain(0).patch.dim_param() == 3 ? 13 : 33;
    const auto vtk = export_field(solver, state, field_resolution, config.out_dir + "/field");
    result.artifacts.insert(result.artifacts.end(), vtk.begin(), vtk.end());

    if (config.case_name == "sector_singularity") {
        // Radial-derivative samples along the mid-sector ray for the
        // singularity-exponent plots.
        const Vec3 ray(std::cos(kPi / 4.0), std::sin(kPi / 4.0), 0.0);
        std::vector<double> rho, dudrho;
        for (int k = 0; k <= 16; ++k) {
            const double r = 1e-2 * std::pow(10.0, k / 16.0);
            const double step = 1e-4 * r;
            const auto at = [&](double s) {
                return solver.blend_global(state, {s * ray})[0];
            };
            rho.push_back(r);
            dudrho.push_back(std::abs((at(r + step) - at(r - step)) / (2.0 * step)));
        }
        const std::string path = config.out_dir + "/radial.csv";
        write_radial_csv(path, rho, dudrho);
        result.artifacts.push_back(path);
    }

    {
        const std::string path = config.out_dir + "/summary.txt";
        std::ofstream out(path);
        out << "case: " << config.case_name << "\n";
        out << "description: " << setup.description << "\n";
        out << "iterations: " << result.iterations << "\n";
        out << "converged: " << (result.converged ? "yes" : "no") << "\n";
        out << "final_max_l2_error: " << result.final_error << "\n";
        out << "tolerance: " << setup.tolerance << "\n";
        out << "status: " << (result.passed ? "pass" : "fail") << "\n";
        result.artifacts.push_back(path);
    }
    return result;
}

}  // namespace iga
