#include <benchmark/benchmark.h>

#include <random>

#include "filippov_lab/batch.hpp"
#include "filippov_lab/bifurcation.hpp"
#include "filippov_lab/sliding_solver.hpp"

using namespace flab;

namespace {

std::vector<QuadCorners> random_quads(int n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2, 2);
    std::vector<QuadCorners> out;
    for (int k = 0; k < n; ++k) {
        std::array<Vec2, 4> X;
        for (auto& c : X) c = {U(rng), U(rng)};
        out.push_back(QuadCorners::constant(X));
    }
    return out;
}

const QuadCorners kTwo =
    QuadCorners::constant({Vec2{1.25, 2}, Vec2{-0.75, 0.1}, Vec2{1.25, -2}, Vec2{-0.75, -0.1}});

PwsSystem shift_system() {
    std::array<FieldTriple, 4> f{
        FieldTriple{Polynomial({1}), Polynomial({1.75, 1}), Polynomial({2})},
        FieldTriple{Polynomial({1}), Polynomial({-0.25, 1}), Polynomial({0})},
        FieldTriple{Polynomial({1}), Polynomial({1.75, 1}), Polynomial({-2})},
        FieldTriple{Polynomial({1}), Polynomial({-0.25, 1}), Polynomial({0})},
    };
    return PwsSystem("shift", f, -0.3, 0.5);
}

std::vector<double> grid(int n) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) xs.push_back(-0.3 + 0.8 * i / (n - 1));
    return xs;
}

}  // namespace

static void BM_OracleRoots(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(oracle_roots(kTwo, static_cast<int>(st.range(0))));
}
static void BM_OracleRootsSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(oracle_roots_serial(kTwo, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_OracleRoots)->Arg(401)->Arg(1601);
BENCHMARK(BM_OracleRootsSerial)->Arg(401)->Arg(1601);

static void BM_Monitors(benchmark::State& st) {
    const auto sys = shift_system();
    const auto xs = grid(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(sample_monitors(sys, xs));
}
static void BM_MonitorsSerial(benchmark::State& st) {
    const auto sys = shift_system();
    const auto xs = grid(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(sample_monitors_serial(sys, xs));
}
BENCHMARK(BM_Monitors)->Arg(10000);
BENCHMARK(BM_MonitorsSerial)->Arg(10000);

static void BM_CrossCheck(benchmark::State& st) {
    const auto qs = random_quads(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(cross_check_batch(qs, 101));
}
static void BM_CrossCheckSerial(benchmark::State& st) {
    const auto qs = random_quads(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(cross_check_batch_serial(qs, 101));
}
BENCHMARK(BM_CrossCheck)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossCheckSerial)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
