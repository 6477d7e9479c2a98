#include <benchmark/benchmark.h>

#include <cmath>

#include "falc/falc.hpp"
#include "falc/inner_apg.hpp"
#include "falc/problems.hpp"
#include "falc/prox.hpp"
#include "falc/rng.hpp"
#include "falc/svd.hpp"

namespace {

falc::DenseMatrix gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
    falc::SplitMix64 rng(seed);
    falc::DenseMatrix a(m, n);
    for (double& v : a.span()) v = rng.gaussian();
    return a;
}

void BM_SvdFull(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const falc::DenseMatrix a = gaussian(n, n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(falc::svd_full(a));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SvdFull)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SvdWarm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const falc::DenseMatrix a = gaussian(n, n, 2);
    const falc::DenseMatrix b = a + 1e-4 * gaussian(n, n, 3);
    const falc::SvdResult prev = falc::svd_full(a);
    for (auto _ : state) benchmark::DoNotOptimize(falc::svd_full_warm(b, prev));
}
BENCHMARK(BM_SvdWarm)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_ShrinkMatrix(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const falc::DenseMatrix y = gaussian(n, n, 4);
    const double delta = std::sqrt(static_cast<double>(n));
    for (auto _ : state)
        benchmark::DoNotOptimize(falc::shrink_matrix(y, delta, falc::NormIndex::One, 10.0 * n));
}
BENCHMARK(BM_ShrinkMatrix)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_ShrinkVecBall(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const falc::DenseMatrix y = gaussian(n, 1, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(falc::shrink_vec_ball(y.span(), 0.5, falc::NormIndex::One, 1.0));
}
BENCHMARK(BM_ShrinkVecBall)->RangeMultiplier(4)->Range(64, 1 << 14);

void BM_InnerStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const falc::Instance inst = falc::generate_instance(n, 0.05, 0.05, 0.0, 1);
    const falc::ProblemSpec spec = falc::preset_robust_pca(inst.d, 1.0 / std::sqrt(double(n)));
    const falc::InitialPoint x0 = falc::initial_point(spec);
    std::vector<falc::DenseVector> thetas;
    for (const auto& b : spec.blocks) thetas.push_back(b.multiplier);
    const falc::Subproblem sub =
        falc::make_subproblem(spec, thetas, 1.0, falc::kUnbounded, falc::stacked_lipschitz(spec));
    falc::InnerState st = falc::InnerState::start(sub, x0.x, x0.s, x0.y);
    for (auto _ : state) falc::inner_step(sub, st);
}
BENCHMARK(BM_InnerStep)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SolveRobustPca(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const falc::Instance inst = falc::generate_instance(n, 0.05, 0.05, 0.0, 1);
    const falc::ProblemSpec spec = falc::preset_robust_pca(inst.d, 1.0 / std::sqrt(double(n)));
    for (auto _ : state) {
        const falc::SolveReport r = falc::solve(spec, falc::robust_pca_params());
        state.counters["svd"] = static_cast<double>(r.svd_count);
        state.counters["outer"] = static_cast<double>(r.outer_iterations);
    }
}
BENCHMARK(BM_SolveRobustPca)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
