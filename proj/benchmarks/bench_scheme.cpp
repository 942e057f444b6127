#include <benchmark/benchmark.h>

#include <cmath>

#include "rte/operators.hpp"
#include "rte/scheme3d.hpp"
#include "rte/transient.hpp"

using namespace rte;

namespace {

Problem<2> slab(int cells, int M) {
    const double L = 50.0;
    const double dt = 0.25 * (L / cells) / 0.196;
    Problem<2> p{build_grid2d({L, L, cells, cells, M, dt, 10 * dt}), Medium::uniform(0.196, 0.08, 1.09),
                 hg2d(0.9), {}};
    p.sources.I0 = [](double, const Point& x, const Direction& d) { return 1.0 + std::sin(0.1 * x[0]) * std::cos(d.theta); };
    p.sources.I1 = [](double, const Point&, const Direction&) { return 1.0; };
    p.sources.q_time_dependent = false;
    p.sources.I1_time_dependent = false;
    return p;
}

void BM_Step2D(benchmark::State& state) {
    const auto p = slab(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    TransientSolver<2> solver(p);
    Field<2> a = solver.initial_field(), b(p.grid);
    for (auto _ : state) {
        a.set_level(0);
        solver.step(a, b);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.grid->num_points() * p.grid->num_directions()));
}
BENCHMARK(BM_Step2D)->Args({50, 60})->Args({100, 60})->Args({200, 60})->Args({100, 120})->Unit(benchmark::kMillisecond);

void BM_ApplyK2D(benchmark::State& state) {
    const auto p = slab(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const OperatorWorkspace<2> ws(p.grid, p.kernel);
    const auto medium = sample_medium(p.medium, *p.grid);
    TransientSolver<2> solver(p);
    const Field<2> f = solver.initial_field();
    for (auto _ : state) {
        auto k = apply_K(f, ws, medium);
        benchmark::DoNotOptimize(k(0, 0));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.grid->num_points() * p.grid->num_directions()));
}
BENCHMARK(BM_ApplyK2D)->Args({100, 60})->Args({100, 120})->Unit(benchmark::kMillisecond);

void BM_Step3D(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    Problem<3> p{build_grid3d({1.0, 1.0, 1.0, cells, cells, cells, 6, 12, 0.02 * 8 / cells, 1.0}),
                 Medium::uniform(1.0, 0.5, 1.0), hg3d(0.3), {}};
    p.sources.q = [](double, const Point&, const Direction&) { return 1.0; };
    p.sources.q_time_dependent = false;
    TransientSolver<3> solver(p);
    Field<3> a = solver.initial_field(), b(p.grid);
    for (auto _ : state) {
        a.set_level(0);
        solver.step(a, b);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.grid->num_points() * p.grid->num_directions()));
}
BENCHMARK(BM_Step3D)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ThetaPhiCondition(benchmark::State& state) {
    const Grid3D g(Grid3DConfig{1.0, 1.0, 1.0, 2, 2, 2, 6, 12, 0.01, 1.0});
    const auto pf = hg3d(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(check_theta_phi_condition(g, pf, 0.5).lhs);
}
BENCHMARK(BM_ThetaPhiCondition)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
