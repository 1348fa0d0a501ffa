#include <benchmark/benchmark.h>

#include "rectbound/family.hpp"
#include "rectbound/sampler.hpp"
#include "rectbound/suites.hpp"

using namespace rectbound;

namespace {

TranscriptFactorization and_instance() {
    auto fam = make_family("AND", 1);
    return factorize(relation_tree(fam.relation), fam.distribution);
}

void BM_derived_quantities(benchmark::State& state) {
    auto fac = and_instance();
    for (auto _ : state) {
        auto der = derived_quantities(fac);
        benchmark::DoNotOptimize(der.alpha_x.data());
    }
}
BENCHMARK(BM_derived_quantities);

void BM_idealized_outcome(benchmark::State& state) {
    auto fac = and_instance();
    auto der = derived_quantities(fac);
    auto cfg = make_config(1.0, 0.3, 1.0, fac.m_size);
    for (auto _ : state) {
        auto out = idealized_outcome(fac, der, cfg);
        benchmark::DoNotOptimize(out.C);
    }
}
BENCHMARK(BM_idealized_outcome);

void BM_monte_carlo(benchmark::State& state) {
    auto fac = and_instance();
    ConfigOverrides ov;
    ov.Delta = static_cast<double>(state.range(0));
    ov.reduced = true;
    auto cfg = make_config(1.0, 0.05, 1.0, fac.m_size, ov);
    long long trials = state.range(1);
    uint64_t seed = 1;
    for (auto _ : state) {
        auto rep = run_monte_carlo(fac, cfg, trials, seed++);
        benchmark::DoNotOptimize(rep.h_events);
    }
    state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(BM_monte_carlo)->Args({2, 5000})->Args({4, 5000});

} // namespace

BENCHMARK_MAIN();
