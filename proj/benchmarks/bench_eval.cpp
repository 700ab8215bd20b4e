// Microbenchmarks for the learning inner loop: incremental vs full readout
// evaluation and a single reservoir step.

#include <benchmark/benchmark.h>

#include <map>

#include "boolrc/experiments.hpp"

using namespace boolrc;

namespace {

config::RunConfig bench_config(int grid_side) {
    auto cfg = config::defaults();
    cfg.reservoir.grid_side = grid_side;
    cfg.task.test_len = 0;
    cfg.task.length = 260;
    cfg.noise.sigma_out = 1e-3;
    return cfg;
}

const experiments::System& system_for(int grid_side) {
    static std::map<int, experiments::System> cache;
    auto it = cache.find(grid_side);
    if (it == cache.end())
        it = cache.emplace(grid_side, experiments::build_system(bench_config(grid_side))).first;
    return it->second;
}

void bm_full_eval(benchmark::State& state) {
    const auto& sys = system_for(static_cast<int>(state.range(0)));
    const auto cfg = bench_config(static_cast<int>(state.range(0)));
    const auto ctx = sys.train_context(cfg.noise.sigma_out);
    const auto w = learner::random_weights(sys.params.node_count(), 7);
    std::uint64_t id = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(learner::evaluate_full(ctx, w, id++));
}

void bm_incremental_eval(benchmark::State& state) {
    const auto& sys = system_for(static_cast<int>(state.range(0)));
    const auto cfg = bench_config(static_cast<int>(state.range(0)));
    const auto ctx = sys.train_context(cfg.noise.sigma_out);
    learner::ReadoutEvaluator eval(sys.train_states,
                                   learner::random_weights(sys.params.node_count(), 7));
    std::uint64_t id = 0;
    int l = 0;
    const int n = sys.params.node_count();
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval.error_with_flip(ctx, l, id++));
        l = (l + 1) % n;
    }
}

void bm_reservoir_step(benchmark::State& state) {
    const auto& sys = system_for(static_cast<int>(state.range(0)));
    reservoir::NetworkState s;
    s.fields.assign(static_cast<std::size_t>(sys.params.node_count()), 0.1);
    s.intensities.assign(static_cast<std::size_t>(sys.params.node_count()), 0.1);
    for (auto _ : state) {
        s = reservoir::step(s, 0.3, sys.params, sys.illumination, sys.theta,
                            sys.coupling, sys.injection);
        benchmark::DoNotOptimize(s.fields.data());
    }
}

}  // namespace

BENCHMARK(bm_full_eval)->Arg(16)->Arg(31);
BENCHMARK(bm_incremental_eval)->Arg(16)->Arg(31);
BENCHMARK(bm_reservoir_step)->Arg(16)->Arg(31);

BENCHMARK_MAIN();
