#include "iga/cases.hpp"
#include "iga/patch_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

int run_solve(const iga::CaseConfig& config) {
    const iga::CaseResult result = iga::run_case(config);
    if (config.case_name != "dof_stats") {
        std::cout << "case " << config.case_name << ": "
                  << (result.converged ? "converged" : "did NOT converge") << " after "
                  << result.iterations << " iterations, final max L2 error "
                  << result.final_error << "\n";
    }
    std::cout << "artifacts:\n";
    for (const auto& path : result.artifacts) std::cout << "  " << path << "\n";
    std::cout << (result.passed ? "PASS" : "FAIL") << "\n";
    return result.passed ? 0 : 1;
}

int dump_geometry(const iga::CaseConfig& config) {
    const iga::CaseSetup setup = iga::build_case(config);
    std::filesystem::create_directories(config.out_dir);
    for (std::size_t s = 0; s < setup.specs.size(); ++s) {
        const std::string path =
            config.out_dir + "/" + config.case_name + "_patch" + std::to_string(s) + ".geo";
        iga::write_patch_file(path, setup.specs[s].patch);
        std::cout << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isogeometric Poisson solver on overlapping B-spline patches "
                 "(additive Schwarz domain decomposition)"};
    app.require_subcommand(1);

    std::string case_name, config_path, out_dir, trace, lift, manufactured;
    double overlap = -1.0, eps = -1.0;
    int degree = -1, refine = -1, workers = -1, max_iters = -1, resolution = -1, patches = -1;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("case", case_name, "registry case name")->required();
        cmd->add_option("--config", config_path, "key=value config file");
        cmd->add_option("--overlap", overlap, "overlap width (cases with an overlap knob)");
        cmd->add_option("--degree", degree, "B-spline degree (1..4)");
        cmd->add_option("--refine", refine, "dyadic refinement level (0..6)");
        cmd->add_option("--trace", trace, "trace operator: exact|interp");
        cmd->add_option("--lift", lift, "Dirichlet lift: ls|qi");
        cmd->add_option("--eps", eps, "convergence threshold");
        cmd->add_option("--max-iters", max_iters, "iteration cap");
        cmd->add_option("--workers", workers, "worker threads (1..64)");
        cmd->add_option("--resolution", resolution, "interpolated-trace lattice resolution");
        cmd->add_option("--manufactured", manufactured, "poisson1d variant: one|sine");
        cmd->add_option("--patches", patches, "cubes_chain length");
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* solve = app.add_subcommand("solve", "run a registry case and write its artifacts");
    add_common(solve);
    CLI::App* geometry =
        app.add_subcommand("geometry", "write a case's patch geometry files and exit");
    add_common(geometry);
    CLI::App* cases = app.add_subcommand("cases", "list registry cases");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cases->parsed()) {
            for (const auto& name : iga::registry_case_names()) std::cout << name << "\n";
            return 0;
        }

        iga::CaseConfig config = iga::default_config(case_name);
        if (!config_path.empty()) config = iga::load_config(config_path, config);
        if (overlap >= 0.0) config.overlap = overlap;
        if (degree >= 0) config.degree = degree;
        if (refine >= 0) config.refine = refine;
        if (!trace.empty()) config.trace = iga::trace_from_string(trace);
        if (!lift.empty()) config.lift = iga::lift_from_string(lift);
        if (eps > 0.0) config.eps = eps;
        if (max_iters > 0) config.max_iters = max_iters;
        if (workers > 0) config.workers = workers;
        if (resolution > 0) config.trace_resolution = resolution;
        if (!manufactured.empty()) config.manufactured = manufactured;
        if (patches > 0) config.patches = patches;
        if (!out_dir.empty()) config.out_dir = out_dir;
        iga::validate_config(config);

        if (geometry->parsed()) return dump_geometry(config);
        return run_solve(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
