#include <benchmark/benchmark.h>

#include <cmath>

#include "bll/crocco.hpp"
#include "bll/norms.hpp"
#include "bll/selfsimilar.hpp"
#include "bll/shear.hpp"
#include "bll/solver2d.hpp"

namespace {

bll::FlowState make_state(int nx, int ny) {
    auto g = bll::build_grid(nx, 2.0 * M_PI, ny, 20.0, 1.0);
    bll::FlowState s;
    s.variant = bll::Variant::hartmann_damped;
    s.outer = bll::OuterFlow::constant(1.0);
    s.u = bll::steady_damped_profile(g, 1.0);
    for (int i = 0; i < nx; ++i)
        for (int j = 1; j < ny - 1; ++j)
            s.u.at(i, j) += 1e-3 * std::cos(g->x[i]) * g->y[j] * std::exp(-g->y[j]);
    return s;
}

void BM_Solver2dStep(benchmark::State& state) {
    bll::FlowState s = make_state(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)));
    for (auto _ : state) {
        s = bll::step(s, 1e-4);
        benchmark::DoNotOptimize(s.u.values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_Solver2dStep)->Args({32, 121})->Args({64, 241});

void BM_SobolevNorm(benchmark::State& state) {
    auto g = bll::build_grid(32, 2.0 * M_PI, 161, 20.0, 1.0);
    bll::Field w = bll::make_field(g, bll::FieldRole::generic, [](double x, double y) {
        return std::cos(x) * std::exp(-y) * (1.0 + y);
    });
    bll::WeightParams p;
    p.s = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bll::sobolev_weighted(w, p));
}
BENCHMARK(BM_SobolevNorm)->Arg(2)->Arg(4);

void BM_CroccoExplicitStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    bll::CroccoState c = bll::make_crocco_state(n, n, 1.0, 0.5, [](double xi, double eta) {
        const double s = 0.5 * (1.0 - std::cos(2.0 * M_PI * xi));
        const double b = 1.0 - eta * eta;
        return 0.6 * (1.0 - eta) + 0.2 * s * b * b;
    });
    c.v0 = [](double, double) { return -0.3; };
    const double h = 0.3 * bll::stability_check(1.0, c.d_eta(), c.nu, 1.0).bound *
                     c.d_eta() * c.d_eta();
    for (auto _ : state) {
        c = bll::fd_explicit_step(c, h, 0.1, 1.0);
        benchmark::DoNotOptimize(c.w.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_CroccoExplicitStep)->Arg(32)->Arg(128);

void BM_BlasiusSolve(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(bll::blasius_solve(12.0, 1e-8).wall_shear);
}
BENCHMARK(BM_BlasiusSolve);

void BM_HeatKernelShear(benchmark::State& state) {
    std::vector<double> y(401), u0(401);
    for (int j = 0; j < 401; ++j) {
        y[j] = 20.0 * j / 400;
        u0[j] = std::erf(y[j] / 2.0);
    }
    const double q[4] = {0.5, 1.0, 2.0, 5.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(bll::heat_kernel_shear(y, u0, 0.5, q));
}
BENCHMARK(BM_HeatKernelShear);

}  // namespace

BENCHMARK_MAIN();
