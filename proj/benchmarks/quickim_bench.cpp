#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "quickim/eval.hpp"
#include "quickim/graph.hpp"
#include "quickim/score.hpp"
#include "quickim/select.hpp"
#include "quickim/synthetic.hpp"

namespace {

/// Power-law graph with n vertices, 10n edges and the given uniform probability.
const quickim::InfluenceGraph& graph_for(std::int64_t n, double p) {
    static std::vector<std::pair<std::pair<std::int64_t, double>, quickim::InfluenceGraph>> cache;
    for (const auto& [key, graph] : cache) {
        if (key.first == n && key.second == p) return graph;
    }
    quickim::ProbabilityModel model;
    model.kind = quickim::ModelKind::UN;
    model.p_u = p;
    const auto base = quickim::power_law_graph(static_cast<std::size_t>(n), static_cast<std::size_t>(n) * 10, 1);
    cache.emplace_back(std::make_pair(n, p), quickim::assign_probabilities(base, model));
    return cache.back().second;
}

void BM_ScoreEst(benchmark::State& state) {
    const auto& graph = graph_for(state.range(0), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(quickim::score_est(graph, 3));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * graph.edge_count() * 3));
}
BENCHMARK(BM_ScoreEst)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_WalkPro(benchmark::State& state) {
    const auto& graph = graph_for(state.range(0), 0.1);
    const std::vector<std::uint8_t> excluded(graph.vertex_count(), 0);
    quickim::VertexId target = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(quickim::walk_pro(graph, 2, target, excluded));
        target = static_cast<quickim::VertexId>((target + 7919) % graph.vertex_count());
    }
}
BENCHMARK(BM_WalkPro)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_QuickIm(benchmark::State& state) {
    const auto& graph = graph_for(state.range(0), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(quickim::run_quickim(graph, static_cast<std::size_t>(state.range(1)), 3));
}
BENCHMARK(BM_QuickIm)->Args({10000, 50})->Args({100000, 50})->Unit(benchmark::kMillisecond);

void BM_McSpread(benchmark::State& state) {
    const auto& graph = graph_for(10000, 0.05);
    const std::vector<quickim::VertexId> seeds = {0, 1, 2, 3, 4};
    for (auto _ : state) benchmark::DoNotOptimize(quickim::mc_spread(graph, seeds, static_cast<std::size_t>(state.range(0)), 0));
}
BENCHMARK(BM_McSpread)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
