#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quickim/graph.hpp"

namespace quickim {

struct SpreadEstimate {
    double mean = 0.0;     ///< expected number of active vertices
    double percent = 0.0;  ///< mean as a percentage of n
    std::size_t simulations = 0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(simulations)
    std::uint64_t rng_seed = 0;
};

/// Forward IC simulations from `seeds` (duplicates ignored). Simulation r draws its coin flips
/// from a generator seeded with (rng_seed, r), so the estimate does not depend on `threads`.
SpreadEstimate mc_spread(const InfluenceGraph& graph, std::span<const VertexId> seeds, std::size_t simulations,
                         std::uint64_t rng_seed, unsigned threads = 1);

/// Maps external labels to dense ids; throws DomainError naming the first unknown label.
std::vector<VertexId> resolve_seeds(const InfluenceGraph& graph, std::span<const Label> labels);

struct RobustnessRow {
    double p = 0.0;
    double seconds = 0.0;  ///< median over repetitions
    std::size_t aux_bytes = 0;
};

struct RobustnessReport {
    ModelKind model = ModelKind::UN;
    std::size_t k = 0;
    std::size_t L = 0;
    std::vector<RobustnessRow> rows;
    std::optional<double> time_ratio;    ///< max/min seconds
    std::optional<double> memory_ratio;  ///< max/min aux bytes
};

/// Re-annotates the graph for each grid value (p_u for UN, p_t for TR) and times quickim.
RobustnessReport robustness_bench(const InfluenceGraph& graph, ModelKind model, std::span<const double> grid,
                                  std::size_t k, std::size_t L = 3, std::size_t repetitions = 3,
                                  std::uint64_t rng_seed = 0);

/// Comma-separated table "p,seconds,aux_bytes".
std::string to_csv(const RobustnessReport& report);

}  // namespace quickim
