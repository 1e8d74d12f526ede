#include <benchmark/benchmark.h>

#include <vector>

#include "netlearn/epoch_time.hpp"
#include "netlearn/kernels.hpp"
#include "netlearn/rng.hpp"
#include "netlearn/simulate.hpp"

using namespace netlearn;

namespace {

std::vector<double> random_masses(std::size_t n, std::uint64_t seed) {
    PortableRng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform();
    return v;
}

// 8 l-nodes on a ring with two feeders each
Topology bench_topology() {
    Topology t;
    for (int l = 0; l < 8; ++l) t.l_nodes.push_back({"L" + std::to_string(l), 0.0, Exponential{1.0}, 100.0});
    for (int i = 0; i < 16; ++i) t.i_nodes.push_back({"I" + std::to_string(i), 0.0, Exponential{2.0}, 20.0});
    for (std::size_t l = 0; l < 8; ++l) t.ll_candidates.push_back({l, (l + 1) % 8, 1.0});
    for (std::size_t i = 0; i < 16; ++i) t.il_candidates.push_back({i, i / 2, 1.0});
    return t;
}

Selection bench_selection() {
    Selection s{{}, {}, 10};
    for (std::uint32_t e = 0; e < 8; ++e) s.ll_edges.push_back(e);
    for (std::uint32_t e = 0; e < 16; ++e) s.il_edges.push_back(e);
    return s;
}

void BM_ConvolveSerial(benchmark::State& st) {
    const auto a = random_masses(st.range(0), 1), b = random_masses(st.range(0), 2);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::convolve_serial(a, b));
    st.SetComplexityN(st.range(0));
}

void BM_Convolve(benchmark::State& st) {
    kernels::set_thread_budget(static_cast<int>(st.range(1)));
    const auto a = random_masses(st.range(0), 1), b = random_masses(st.range(0), 2);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::convolve(a, b));
    st.SetComplexityN(st.range(0));
}

void BM_MultiplySerial(benchmark::State& st) {
    auto acc = random_masses(st.range(0), 3);
    const auto f = random_masses(st.range(0), 4);
    for (auto _ : st) {
        kernels::multiply_into_serial(acc, f);
        benchmark::DoNotOptimize(acc.data());
    }
}

void BM_Multiply(benchmark::State& st) {
    kernels::set_thread_budget(static_cast<int>(st.range(1)));
    auto acc = random_masses(st.range(0), 3);
    const auto f = random_masses(st.range(0), 4);
    for (auto _ : st) {
        kernels::multiply_into(acc, f);
        benchmark::DoNotOptimize(acc.data());
    }
}

void BM_MonteCarloSerial(benchmark::State& st) {
    const auto t = bench_topology();
    const auto s = bench_selection();
    for (auto _ : st) benchmark::DoNotOptimize(monte_carlo_serial(t, s, st.range(0), 1));
}

void BM_MonteCarlo(benchmark::State& st) {
    kernels::set_thread_budget(static_cast<int>(st.range(1)));
    const auto t = bench_topology();
    const auto s = bench_selection();
    for (auto _ : st) benchmark::DoNotOptimize(monte_carlo(t, s, st.range(0), 1));
}

void BM_ExpectedTime(benchmark::State& st) {
    const auto t = bench_topology();
    const auto s = bench_selection();
    EngineOptions opt;
    opt.resolution = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(expected_learning_time(t, s, opt));
}

}  // namespace

BENCHMARK(BM_ConvolveSerial)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_Convolve)->ArgsProduct({{256, 1024, 4096, 16384}, {1, 2, 4}})->UseRealTime();
BENCHMARK(BM_MultiplySerial)->Arg(1 << 16);
BENCHMARK(BM_Multiply)->ArgsProduct({{1 << 16}, {1, 2, 4}})->UseRealTime();
BENCHMARK(BM_MonteCarloSerial)->Arg(10000);
BENCHMARK(BM_MonteCarlo)->ArgsProduct({{10000}, {1, 2, 4}})->UseRealTime();
BENCHMARK(BM_ExpectedTime)->Arg(1024)->Arg(4096)->UseRealTime();

BENCHMARK_MAIN();
