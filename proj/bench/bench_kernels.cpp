// Serial reference vs OpenMP kernels.

#include <random>

#include <benchmark/benchmark.h>

#include "hetcon/config.hpp"
#include "hetcon/netsim.hpp"
#include "hetcon/sweep.hpp"

using namespace hetcon;

namespace {

RationalFunction lag(double a) { return {Polynomial({1.0}), Polynomial({a, 1.0})}; }

void sweep_args(benchmark::internal::Benchmark* b) {
    for (int n : {2000, 20000, 200000}) {
        b->Arg(n);
    }
}

void BM_SweepSerial(benchmark::State& state) {
    const auto w = log_frequency_grid(1e-4, 1e4, static_cast<int>(state.range(0)));
    const RationalFunction gi = lag(1.0), gj = lag(2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_min_eig_serial(gi, gj, w));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepOmp(benchmark::State& state) {
    const auto w = log_frequency_grid(1e-4, 1e4, static_cast<int>(state.range(0)));
    const RationalFunction gi = lag(1.0), gj = lag(2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_min_eig_omp(gi, gj, w));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct Batch {
    ClosedLoopSystem cls;
    std::vector<std::vector<Signal>> runs;
    SimOptions opts;
};

Batch make_batch(int count) {
    std::vector<Edge> edges;
    for (int k = 0; k < 5; ++k) {
        edges.push_back({k + 1, (k + 1) % 5 + 1, 1.0});
    }
    Batch b{assemble_closed_loop(make_network(build_graph(5, edges),
                                              {lag(0.8), lag(1.0), lag(1.2), lag(1.5), lag(-0.2)})),
            {},
            {}};
    b.opts.dt = 1e-3;
    b.opts.t_end = 5.0;
    std::mt19937_64 rng(1);
    for (int r = 0; r < count; ++r) {
        std::vector<Signal> w;
        for (int k = 0; k < 5; ++k) {
            w.push_back(make_signal(random_disturbance(rng)));
        }
        b.runs.push_back(std::move(w));
    }
    return b;
}

void BM_SimBatchSerial(benchmark::State& state) {
    const Batch b = make_batch(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_batch_serial(b.cls, b.runs, b.opts));
    }
}

void BM_SimBatchOmp(benchmark::State& state) {
    const Batch b = make_batch(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_batch_omp(b.cls, b.runs, b.opts));
    }
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Apply(sweep_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepOmp)->Apply(sweep_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SimBatchSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimBatchOmp)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
