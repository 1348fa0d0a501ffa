#include <benchmark/benchmark.h>

#include <vector>

#include "rectbound/infotheory.hpp"
#include "rectbound/rng.hpp"

using namespace rectbound;

namespace {

std::vector<double> random_dist(SplitMix64& g, int n) {
    std::vector<double> p(n);
    double s = 0;
    for (auto& v : p) s += v = g.next_double() + 1e-9;
    for (auto& v : p) v /= s;
    return p;
}

void BM_relent(benchmark::State& state) {
    SplitMix64 g(1);
    int n = static_cast<int>(state.range(0));
    auto p = random_dist(g, n);
    auto q = random_dist(g, n);
    for (auto _ : state) {
        auto d = relent(p, q);
        benchmark::DoNotOptimize(d.value);
    }
}
BENCHMARK(BM_relent)->Arg(16)->Arg(256)->Arg(4096);

void BM_cond_mutual_info(benchmark::State& state) {
    SplitMix64 g(2);
    int n = static_cast<int>(state.range(0));
    JointTable t({"x", "y", "m"}, {n, n, n});
    double s = 0;
    for (auto& v : t.p) s += v = g.next_double();
    for (auto& v : t.p) v /= s;
    for (auto _ : state) {
        double i = cond_mutual_info(t, "x", "m", "y");
        benchmark::DoNotOptimize(i);
    }
}
BENCHMARK(BM_cond_mutual_info)->Arg(4)->Arg(16);

void BM_check_substate(benchmark::State& state) {
    SplitMix64 g(3);
    int n = static_cast<int>(state.range(0));
    auto x = random_dist(g, n);
    auto xp = random_dist(g, n);
    for (auto _ : state) {
        auto r = check_substate(x, xp, 0.2);
        benchmark::DoNotOptimize(r.pass);
    }
}
BENCHMARK(BM_check_substate)->Arg(16)->Arg(256);

} // namespace
