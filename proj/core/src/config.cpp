#include "iga/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace iga {

std::string to_string(TraceKind kind) {
    return kind == TraceKind::Exact ? "exact" : "interp";
}

std::string to_string(LiftKind kind) {
    return kind == LiftKind::LeastSquares ? "ls" : "qi";
}

TraceKind trace_from_string(const std::string& s) {
    if (s == "exact") return TraceKind::Exact;
    if (s == "interp" || s == "interpolated") return TraceKind::Interpolated;
    throw Error("unknown trace kind '" + s + "' (expected exact|interp)");
}

LiftKind lift_from_string(const std::string& s) {
    if (s == "ls") return LiftKind::LeastSquares;
    if (s == "qi") return LiftKind::QuasiInterpolation;
    throw Error("unknown lift kind '" + s + "' (expected ls|qi)");
}

std::vector<std::string> registry_case_names() {
    return {"poisson1d", "two_patch_2d", "circle_zoom", "sector_singularity", "cubes_chain",
            "dof_stats"};
}

CaseConfig default_config(const std::string& case_name) {
    CaseConfig config;
    config.case_name = case_name;
    if (case_name == "poisson1d") {
        config.overlap = 0.3;
        config.degree = 2;
        config.eps = 1e-6;
        config.max_iters = 100;
        config.manufactured = "one";
    } else if (case_name == "two_patch_2d") {
        config.overlap = 0.5;
        config.degree = 2;
        config.refine = 1;
        config.eps = 4e-4;  // just above the refine-1 discretization floor
        config.max_iters = 200;
    } else if (case_name == "circle_zoom") {
        config.degree = 3;
        config.refine = 1;
        config.eps = 2e-3;
        config.max_iters = 60;
    } else if (case_name == "sector_singularity") {
        config.degree = 3;
        config.refine = 1;
        config.eps = 2e-3;
        config.max_iters = 80;
    } else if (case_name == "cubes_chain") {
        config.degree = 2;
        config.refine = 0;
        config.eps = 1e-4;
        config.max_iters = 60;
        config.patches = 5;
    } else if (case_name == "dof_stats") {
        // pure table computation; solver knobs unused
    } else {
        throw Error("unknown case '" + case_name + "'");
    }
    return config;
}

void validate_config(const CaseConfig& config) {
    const auto names = registry_case_names();
    if (std::find(names.begin(), names.end(), config.case_name) == names.end())
        throw Error("unknown case '" + config.case_name + "'");
    if (config.degree < 1 || config.degree > 4) throw Error("config: degree must be in 1..4");
    if (config.refine < 0 || config.refine > 6) throw Error("config: refine must be in 0..6");
    if (config.overlap < 0.0 || config.overlap > 1.5)
        throw Error("config: overlap must be in [0, 1.5]");
    if (!(config.eps > 0.0)) throw Error("config: eps must be positive");
    if (config.max_iters < 1 || config.max_iters > 10000)
        throw Error("config: max_iters must be in 1..10000");
    if (config.workers < 1 || config.workers > 64)
        throw Error("config: workers must be in 1..64");
    if (config.trace_resolution < 1 || config.trace_resolution > 64)
        throw Error("config: trace_resolution must be in 1..64");
    if (config.patches != 0 && (config.patches < 2 || config.patches > 12))
        throw Error("config: patches must be in 2..12");
    if (config.manufactured != "default" && config.manufactured != "one" &&
        config.manufactured != "sine")
        throw Error("config: manufactured must be one|sine");
}

CaseConfig load_config(const std::string& path, CaseConfig base) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path);

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(path + ":" + std::to_string(line_no) + ": expected key=value");

        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (key == "case")
                base.case_name = value;
            else if (key == "degree")
                base.degree = std::stoi(value);
            else if (key == "refine")
                base.refine = std::stoi(value);
            else if (key == "overlap")
                base.overlap = std::stod(value);
            else if (key == "trace")
                base.trace = trace_from_string(value);
            else if (key == "lift")
                base.lift = lift_from_string(value);
            else if (key == "eps")
                base.eps = std::stod(value);
            else if (key == "max_iters")
                base.max_iters = std::stoi(value);
            else if (key == "workers")
                base.workers = std::stoi(value);
            else if (key == "trace_resolution")
                base.trace_resolution = std::stoi(value);
            else if (key == "manufactured")
                base.manufactured = value;
            else if (key == "patches")
                base.patches = std::stoi(value);
            else if (key == "out_dir")
                base.out_dir = value;
            else
                throw Error("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw Error(path + ":" + std::to_string(line_no) + ": bad value for '" + key + "'");
        }
    }
    validate_config(base);
    return base;
}

void save_config(const std::string& path, const CaseConfig& config) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.precision(17);
    out << "case = " << config.case_name << "\n";
    out << "degree = " << config.degree << "\n";
    out << "refine = " << config.refine << "\n";
    out << "overlap = " << config.overlap << "\n";
    out << "trace = " << to_string(config.trace) << "\n";
    out << "lift = " << to_string(config.lift) << "\n";
    out << "eps = " << config.eps << "\n";
    out << "max_iters = " << config.max_iters << "\n";
    out << "workers = " << config.workers << "\n";
    out << "trace_resolution = " << config.trace_resolution << "\n";
    out << "manufactured = " << config.manufactured << "\n";
    out << "patches = " << config.patches << "\n";
    out << "out_dir = " << config.out_dir << "\n";
}

}  // namespace iga
