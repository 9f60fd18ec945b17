#pragma once

#include "iga/patch.hpp"

#include <iosfwd>

namespace iga {

/// Versioned text geometry format: dimension counts, per-direction degrees and
/// knot vectors, control grid rows (flat order, first direction fastest).
/// Values are printed with 17 significant digits so a write/read round trip is
/// bit-exact.
void write_patch(std::ostream& out, const Patch& patch);
void write_patch_file(const std::string& path, const Patch& patch);

Patch read_patch(std::istream& in);
Patch read_patch_file(const std::string& path);

}  // namespace iga
