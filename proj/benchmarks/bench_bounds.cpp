#include <benchmark/benchmark.h>

#include "rectbound/bounds.hpp"
#include "rectbound/family.hpp"
#include "rectbound/lp.hpp"

using namespace rectbound;

namespace {

void BM_lrec(benchmark::State& state) {
    auto fam = make_family("EQ", static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto r = lrec(fam.relation, fam.distribution, 0, 0.1);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_lrec)->Arg(1)->Arg(2);

void BM_srec_entropy(benchmark::State& state) {
    auto fam = make_family("AND", 1);
    for (auto _ : state) {
        auto r = srec_entropy(fam.relation, fam.distribution, 0, 0.1, 0.1);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_srec_entropy);

void BM_srec_lp(benchmark::State& state) {
    auto fam = make_family("EQ", static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto r = srec_lp(fam.relation, 1, 0.1);
        benchmark::DoNotOptimize(r.primal_value);
    }
}
BENCHMARK(BM_srec_lp)->Arg(1)->Arg(2);

void BM_optimal_protocol_error(benchmark::State& state) {
    auto fam = make_family("EQ", 2);
    int budget = static_cast<int>(state.range(0));
    for (auto _ : state) {
        double e = optimal_protocol_error(fam.relation, fam.distribution,
                                          budget);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_optimal_protocol_error)->Arg(2)->Arg(4);

} // namespace
