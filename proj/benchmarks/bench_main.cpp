#include <benchmark/benchmark.h>

#include "lapdsm/dpn.hpp"
#include "lapdsm/dsm.hpp"
#include "lapdsm/finite_space.hpp"
#include "lapdsm/forward.hpp"
#include "lapdsm/numerics.hpp"

using namespace lapdsm;

static void BM_BesselSequence(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_j_sequence(60, x));
        x = x < 15.0 ? x + 0.37 : 0.1;
    }
}
BENCHMARK(BM_BesselSequence);

static void BM_Hankel(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hankel1(0, x));
        x = x < 30.0 ? x + 0.29 : 0.01;
    }
}
BENCHMARK(BM_Hankel);

static void BM_ClassicalIndex(benchmark::State& state) {
    const Scene scene = presets::example_1_1();
    const FarFieldData data = add_noise(simulate_far_field(scene, 60), 0.01, 1);
    const SamplingGrid grid(scene.domain(), static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct_classical(data, grid, scene.wavenumber()));
}
BENCHMARK(BM_ClassicalIndex)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_FiniteSpaceProbing(benchmark::State& state) {
    const Scene scene = presets::example_1_1();
    const SamplingGrid grid(scene.domain(), 128);
    FiniteSpaceOptions o;
    o.method = state.range(0) == 0 ? FiniteSpaceMethod::ffsm : FiniteSpaceMethod::fssm;
    for (auto _ : state) benchmark::DoNotOptimize(finite_space_probing(o, scene.aperture(), grid, 8.0));
}
BENCHMARK(BM_FiniteSpaceProbing)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_TikhonovSolve(benchmark::State& state) {
    const auto sources = SourceTestingSpace::lattice({}, 20, 8.0);
    const auto a = fssm_matrix(ApertureSet::config_one(), 20, sources, default_truncation(8.0, sources.max_radius()));
    const Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Random(a.rows(), 1024);
    for (auto _ : state) benchmark::DoNotOptimize(tikhonov_solve(a, 1e-4, rhs));
}
BENCHMARK(BM_TikhonovSolve)->Unit(benchmark::kMillisecond);

static void BM_DpnGradientStep(benchmark::State& state) {
    const auto ap = ApertureSet::config_one();
    dpn::TrainConfig cfg;
    cfg.test_functions = static_cast<int>(state.range(0));
    cfg.points = static_cast<int>(state.range(0));
    const auto params = dpn::NetworkParams::initialize(cfg.order, cfg.hidden, 8.0, {}, 1);
    CounterRng rng(1, 0);
    const auto batch = dpn::sample_batch(cfg, {}, {}, ap, 8.0, rng);
    for (auto _ : state) benchmark::DoNotOptimize(dpn::loss_gradient(params, batch, ap, 8.0));
}
BENCHMARK(BM_DpnGradientStep)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ForwardSolve(benchmark::State& state) {
    const Scene scene = presets::example_1_1();
    for (auto _ : state) benchmark::DoNotOptimize(simulate_far_field(scene, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ForwardSolve)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
