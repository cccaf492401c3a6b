#pragma once

#include <cstddef>
#include <cstdint>

#include "quickim/graph.hpp"

namespace quickim {

/// Uniform random simple digraph with exactly min(m, n(n-1)) edges and probabilities drawn
/// uniformly from [p_low, p_high].
InfluenceGraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed, double p_low = 0.05,
                            double p_high = 0.5);

/// Heavy-tailed digraph: endpoints are drawn with probability proportional to (i + 1)^(-exponent)
/// over a random vertex permutation, self-loops and repeats discarded, until m distinct edges exist.
/// Probabilities are left at 1 for a later assign_probabilities call.
InfluenceGraph power_law_graph(std::size_t n, std::size_t m, std::uint64_t seed, double exponent = 0.75);

}  // namespace quickim
