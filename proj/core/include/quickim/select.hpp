#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quickim/graph.hpp"
#include "quickim/update.hpp"

namespace quickim {

struct IterationStats {
    VertexId vertex = 0;
    Label label = 0;
    double score = 0.0;  ///< walk score for quickim, estimated marginal gain for mc-greedy
    std::size_t touched = 0;  ///< corrected vertices; gain re-evaluations for mc-greedy
    std::size_t skipped = 0;
    double seconds = 0.0;
};

struct SelectionConfig {
    std::size_t k = 0;
    std::size_t L = 0;
    std::string algorithm;
    std::optional<std::uint64_t> rng_seed;
    std::optional<std::size_t> simulations;
};

struct SeedSelection {
    std::vector<VertexId> seeds;
    std::vector<Label> labels;
    std::vector<IterationStats> per_iteration;
    SelectionConfig config;
    bool truncated = false;  ///< k exceeded n and every vertex was selected
    double seconds = 0.0;
    std::size_t peak_aux_bytes = 0;
    std::optional<LazyDiagnostics> diagnostics;
};

struct QuickImOptions {
    unsigned threads = 1;
    bool collect_diagnostics = false;
};

/// Greedy seed selection on walk scores with lazy incremental updates.
SeedSelection run_quickim(const InfluenceGraph& graph, std::size_t k, std::size_t L, const QuickImOptions& options = {});

/// CELF greedy with Monte-Carlo marginal gains. Simulation r always realises edge e the same
/// way (a hash of rng_seed, r and e), so gains of different candidates are compared on the
/// same sampled worlds and results do not depend on `threads`.
SeedSelection mc_greedy(const InfluenceGraph& graph, std::size_t k, std::size_t simulations,
                        std::uint64_t rng_seed, unsigned threads = 1);

}  // namespace quickim
