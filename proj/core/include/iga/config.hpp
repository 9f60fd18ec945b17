#pragma once

#include "iga/schwarz.hpp"

#include <string>

namespace iga {

/// Flat configuration for one registry case. Serialized as a key=value text
/// file ('#' starts a comment); unknown keys are errors.
struct CaseConfig {
    std::string case_name;
    int degree = 2;            // 1..4
    int refine = 0;            // dyadic refinement level, 0..6
    double overlap = 0.0;      // physical overlap width where the case uses one
    TraceKind trace = TraceKind::Exact;
    LiftKind lift = LiftKind::LeastSquares;
    double eps = 1e-6;
    int max_iters = 100;
    int workers = 1;
    int trace_resolution = 4;
    std::string manufactured = "default";  // poisson1d: "one" (f=1) or "sine"
    int patches = 0;                       // cubes_chain: chain length
    std::string out_dir = "out";

    friend bool operator==(const CaseConfig&, const CaseConfig&) = default;
};

/// Defaults for a registry case; throws for unknown case names.
CaseConfig default_config(const std::string& case_name);

/// Names of all registry cases.
std::vector<std::string> registry_case_names();

/// Parse a key=value config file on top of the given defaults.
CaseConfig load_config(const std::string& path, CaseConfig base);

void save_config(const std::string& path, const CaseConfig& config);

/// Range-check numeric parameters; throws with the offending key.
void validate_config(const CaseConfig& config);

std::string to_string(TraceKind);
std::string to_string(LiftKind);
TraceKind trace_from_string(const std::string&);
LiftKind lift_from_string(const std::string&);

}  // namespace iga
