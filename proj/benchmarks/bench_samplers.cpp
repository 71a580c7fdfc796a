#include "icelab/oracle.hpp"
#include "icelab/samplers.hpp"

#include <benchmark/benchmark.h>

using namespace icelab;

// One heat-bath sweep over the heights of Λ_N.
static void BM_HeightSweep(benchmark::State& state) {
    const auto g = make_geometry(Domain::diamond(static_cast<int>(state.range(0))));
    HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), ModelParams{1, 1, 3, 1}, WeightMode::plain);
    Rng rng = make_rng(1, 0);
    for (auto _ : state) chain.sweep(rng);
    state.SetItemsProcessed(state.iterations() * g->inner_count());
}
BENCHMARK(BM_HeightSweep)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

// One heat-bath sweep of the random-cluster chain on the corner graph of Λ_N at criticality.
static void BM_RcSweep(benchmark::State& state) {
    const auto g = make_geometry(Domain::diamond(static_cast<int>(state.range(0))));
    const Graph& G = g->primal().graph;
    const double q = static_cast<double>(state.range(1));
    RcChain chain(G, EdgeBits(G.edge_count(), 0), RcParams{q, 1, p_critical(q)});
    Rng rng = make_rng(1, 0);
    for (auto _ : state) chain.sweep(rng);
    state.SetItemsProcessed(state.iterations() * G.edge_count());
}
BENCHMARK(BM_RcSweep)->Args({8, 4})->Args({16, 4})->Args({32, 4})->Args({32, 9});

// Heights drawn from the conditional law given a random-cluster configuration.
static void BM_HeightsGivenRc(benchmark::State& state) {
    const auto g = make_geometry(Domain::diamond(static_cast<int>(state.range(0))));
    const Graph& G = g->primal().graph;
    RcChain chain(G, EdgeBits(G.edge_count(), 0), RcParams{4, 1, p_critical(4)});
    Rng rng = make_rng(1, 0);
    for (int k = 0; k < 50; ++k) chain.sweep(rng);
    const CouplingParams p = derive_params(1, 1, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_heights_given_rc(g, chain.state(), p, CouplingPart::plain, rng));
}
BENCHMARK(BM_HeightsGivenRc)->Arg(8)->Arg(32);

// Exact enumeration of the random-cluster measure on the corner graph of Λ_2.
static void BM_EnumerateRc(benchmark::State& state) {
    const auto g = make_geometry(Domain::diamond(2));
    oracle::RcScalars<double> S;
    S.q = 4;
    S.q_b = 2;
    S.p = p_critical(4);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::enumerate_rc(g->primal().graph, S));
}
BENCHMARK(BM_EnumerateRc);

// Exact height measure on Λ_3 with rational weights.
static void BM_EnumerateHeights(benchmark::State& state) {
    const auto g = make_geometry(Domain::diamond(3));
    oracle::VertexWeights<Rational> w;
    w.c = Rational(5, 2);
    for (auto _ : state) {
        const auto configs = oracle::enumerate_height_configs(*g, {});
        benchmark::DoNotOptimize(oracle::height_measure(*g, configs, w, WeightMode::plain));
    }
}
BENCHMARK(BM_EnumerateHeights);
BENCHMARK_MAIN();
