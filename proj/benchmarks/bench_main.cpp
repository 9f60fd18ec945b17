#include "iga/case_geometry.hpp"
#include "iga/cases.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

void BM_BasisEvaluation(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    const iga::KnotVector kv = iga::KnotVector::uniform(0.0, 1.0, 64, degree);
    double xi = 0.0;
    for (auto _ : state) {
        xi += 0.37;
        if (xi > 1.0) xi -= 1.0;
        benchmark::DoNotOptimize(kv.eval_basis(xi));
    }
}
BENCHMARK(BM_BasisEvaluation)->Arg(2)->Arg(3)->Arg(4);

void BM_BasisDerivatives(benchmark::State& state) {
    const iga::KnotVector kv = iga::KnotVector::uniform(0.0, 1.0, 64, state.range(0));
    double xi = 0.0;
    for (auto _ : state) {
        xi += 0.37;
        if (xi > 1.0) xi -= 1.0;
        benchmark::DoNotOptimize(kv.eval_basis_derivatives(xi, 1));
    }
}
BENCHMARK(BM_BasisDerivatives)->Arg(2)->Arg(4);

void BM_StiffnessAssembly2D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const iga::Patch patch = iga::rectangle_patch(0, 1, 0, 1, 2, n, n, 0.05);
    const auto rules = iga::element_rules(patch.space(), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            iga::assemble_stiffness(patch, iga::constant_field(1.0), rules));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(rules.size()));
}
BENCHMARK(BM_StiffnessAssembly2D)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_InvertMap(benchmark::State& state) {
    const iga::Curve arc = iga::arc_curve(3.0, -0.3, M_PI + 0.3, 3, 16);
    const iga::Patch ring = iga::radial_arc_patch(arc, 3.0, 1.2, 3.0, 3, 6);
    int k = 0;
    for (auto _ : state) {
        const double r = 1.3 + 0.17 * (k % 9);
        const double t = -0.2 + 0.35 * (k % 10);
        ++k;
        benchmark::DoNotOptimize(
            ring.invert_map(iga::Vec3(r * std::cos(t), r * std::sin(t), 0)));
    }
}
BENCHMARK(BM_InvertMap);

void BM_SchwarzIteration1D(benchmark::State& state) {
    const iga::CaseConfig config = iga::default_config("poisson1d");
    const iga::CaseSetup setup = iga::build_case(config);
    const iga::SchwarzSolver solver(setup.specs, setup.options);
    iga::SchwarzState schwarz_state = solver.init_state();
    for (auto _ : state) solver.iterate_once(schwarz_state);
}
BENCHMARK(BM_SchwarzIteration1D);

void BM_SchwarzIteration2D(benchmark::State& state) {
    iga::CaseConfig config = iga::default_config("two_patch_2d");
    config.refine = static_cast<int>(state.range(0));
    const iga::CaseSetup setup = iga::build_case(config);
    const iga::SchwarzSolver solver(setup.specs, setup.options);
    iga::SchwarzState schwarz_state = solver.init_state();
    for (auto _ : state) solver.iterate_once(schwarz_state);
}
BENCHMARK(BM_SchwarzIteration2D)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_LatticeTrace(benchmark::State& state) {
    const iga::Patch patch = iga::rectangle_patch(0, 2, 0, 1, 3, 12, 8, 0.1);
    iga::DonorField donor{&patch, Eigen::VectorXd(patch.space().total_count())};
    for (int i = 0; i < donor.coeffs.size(); ++i)
        donor.coeffs[i] = std::sin(1.3 * patch.controls()(i, 0));
    std::vector<iga::Vec3> points;
    for (int s = 0; s < 64; ++s) points.emplace_back(0.1 + 1.8 * s / 64.0, 0.5, 0.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(iga::trace_interpolated(donor, points, state.range(0)));
}
BENCHMARK(BM_LatticeTrace)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
