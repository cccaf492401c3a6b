#include "quickim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "quickim/error.hpp"

namespace quickim {

InfluenceGraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed, double p_low, double p_high) {
    if (!(p_low > 0.0 && p_low <= p_high && p_high <= 1.0)) throw DomainError("invalid probability range");
    const std::size_t possible = n < 2 ? 0 : n * (n - 1);
    m = std::min(m, possible);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n == 0 ? 0 : n - 1);
    std::uniform_real_distribution<double> prob(p_low, p_high);
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    while (edges.size() < m) {
        const auto u = static_cast<VertexId>(pick(rng));
        const auto v = static_cast<VertexId>(pick(rng));
        if (u == v || !seen.insert(static_cast<std::uint64_t>(u) * n + v).second) continue;
        edges.push_back({u, v, prob(rng)});
    }
    return InfluenceGraph::from_edges(n, std::move(edges), {}, "uniform[" + std::to_string(p_low) + "," +
                                                                    std::to_string(p_high) + "]");
}

InfluenceGraph power_law_graph(std::size_t n, std::size_t m, std::uint64_t seed, double exponent) {
    if (n < 2) throw DomainError("power-law graph needs at least two vertices");
    m = std::min(m, n * (n - 1));
    std::mt19937_64 rng(seed);
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) weight[i] = std::pow(static_cast<double>(i + 1), -exponent);
    std::vector<VertexId> perm_out(n), perm_in(n);
    std::iota(perm_out.begin(), perm_out.end(), VertexId{0});
    std::iota(perm_in.begin(), perm_in.end(), VertexId{0});
    std::shuffle(perm_out.begin(), perm_out.end(), rng);
    std::shuffle(perm_in.begin(), perm_in.end(), rng);
    std::discrete_distribution<std::size_t> rank(weight.begin(), weight.end());

    std::vector<std::uint64_t> keys;
    keys.reserve(m + m / 4);
    while (keys.size() < m) {
        const std::size_t missing = m - keys.size();
        for (std::size_t i = 0; i < missing + missing / 8 + 16; ++i) {
            const VertexId u = perm_out[rank(rng)];
            const VertexId v = perm_in[rank(rng)];
            if (u != v) keys.push_back(static_cast<std::uint64_t>(u) * n + v);
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        if (keys.size() > m) {
            std::shuffle(keys.begin(), keys.end(), rng);
            keys.resize(m);
        }
    }
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t key : keys) {
        edges.push_back({static_cast<VertexId>(key / n), static_cast<VertexId>(key % n), 1.0});
    }
    return InfluenceGraph::from_edges(n, std::move(edges), {}, "unassigned");
}

}  // namespace quickim
