#include "iga/patch_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace iga {

namespace {
constexpr const char* kMagic = "igaschwarz-geometry";
constexpr int kVersion = 1;
}  // namespace

void write_patch(std::ostream& out, const Patch& patch) {
    out << kMagic << " " << kVersion << "\n";
    out << "dim_param " << patch.dim_param() << "\n";
    out << "dim_phys " << patch.dim_phys() << "\n";
    out << std::setprecision(17);
    out << "degrees";
    for (int d = 0; d < patch.dim_param(); ++d)
        out << " " << patch.space().direction(d).degree();
    out << "\n";
    for (int d = 0; d < patch.dim_param(); ++d) {
        const auto& knots = patch.space().direction(d).knots();
        out << "knots " << knots.size();
        for (double k : knots) out << " " << k;
        out << "\n";
    }
    out << "controls " << patch.controls().rows() << " " << patch.controls().cols() << "\n";
    for (Eigen::Index r = 0; r < patch.controls().rows(); ++r) {
        for (Eigen::Index c = 0; c < patch.controls().cols(); ++c)
            out << (c ? " " : "") << patch.controls()(r, c);
        out << "\n";
    }
}

void write_patch_file(const std::string& path, const Patch& patch) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_patch(out, patch);
}

namespace {

void expect_key(std::istream& in, const std::string& key) {
    std::string token;
    if (!(in >> token) || token != key)
        throw Error("geometry file: expected '" + key + "', got '" + token + "'");
}

}  // namespace

Patch read_patch(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kMagic)
        throw Error("geometry file: bad magic header");
    if (version != kVersion)
        throw Error("geometry file: unsupported version " + std::to_string(version));

    int dim_param = 0, dim_phys = 0;
    expect_key(in, "dim_param");
    in >> dim_param;
    expect_key(in, "dim_phys");
    in >> dim_phys;
    if (dim_param < 1 || dim_param > 3) throw Error("geometry file: bad dim_param");

    expect_key(in, "degrees");
    std::vector<int> degrees(dim_param);
    for (int& p : degrees) in >> p;

    std::vector<KnotVector> directions;
    for (int d = 0; d < dim_param; ++d) {
        expect_key(in, "knots");
        std::size_t count = 0;
        in >> count;
        std::vector<double> knots(count);
        for (double& k : knots) in >> k;
        directions.emplace_back(std::move(knots), degrees[d]);
    }

    expect_key(in, "controls");
    Eigen::Index rows = 0, cols = 0;
    in >> rows >> cols;
    if (cols != dim_phys) throw Error("geometry file: control columns do not match dim_phys");
    Eigen::MatrixXd controls(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            if (!(in >> controls(r, c))) throw Error("geometry file: truncated control grid");

    return Patch(TensorSpace(std::move(directions)), std::move(controls), false);
}

Patch read_patch_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_patch(in);
}

}  // namespace iga
