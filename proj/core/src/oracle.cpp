#include "quickim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "quickim/error.hpp"

namespace quickim::oracle {

namespace {

/// (base)^(exponent) with overflow detection against `cap`.
bool power_within(std::uint64_t base, std::size_t exponent, std::uint64_t cap) {
    std::uint64_t value = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (value > cap / base) return false;
        value *= base;
    }
    return value <= cap;
}

void require_base_guard(const InfluenceGraph& graph, const Limits& limits) {
    if (graph.edge_count() > limits.max_base_edges || graph.edge_count() >= 63) {
        throw CapacityError("base-world enumeration needs m <= " +
                            std::to_string(limits.max_base_edges) + ", graph has m = " +
                            std::to_string(graph.edge_count()));
    }
}

void check_vertex(const InfluenceGraph& graph, VertexId v) {
    if (v >= graph.vertex_count()) throw DomainError("vertex id " + std::to_string(v) + " out of range");
}

/// Edge presence for base world `mask` with per-edge probabilities.
double base_world_probability(std::span<const double> probabilities, std::uint64_t mask) {
    double pr = 1.0;
    for (std::size_t e = 0; e < probabilities.size(); ++e) {
        pr *= ((mask >> e) & 1U) ? probabilities[e] : 1.0 - probabilities[e];
    }
    return pr;
}

std::vector<double> edge_probabilities(const InfluenceGraph& graph) {
    std::vector<double> p;
    p.reserve(graph.edge_count());
    for (const Edge& e : graph.edges()) p.push_back(e.probability);
    return p;
}

/// Hop-limited search in base world `mask`. Marks reached[v] for every v reachable from
/// `sources` by a path of 1..max_hops edges; sources themselves are only marked when some
/// closed walk returns to them.
void reach_in_world(const InfluenceGraph& graph, std::uint64_t mask, std::span<const VertexId> sources,
                    std::size_t max_hops, std::vector<char>& reached, std::vector<VertexId>& frontier,
                    std::vector<VertexId>& next) {
    std::fill(reached.begin(), reached.end(), 0);
    frontier.assign(sources.begin(), sources.end());
    for (std::size_t hop = 0; hop < max_hops && !frontier.empty(); ++hop) {
        next.clear();
        for (VertexId x : frontier) {
            const std::uint64_t base = graph.out_offset(x);
            auto arcs = graph.out_arcs(x);
            for (std::size_t i = 0; i < arcs.size(); ++i) {
                if (!((mask >> (base + i)) & 1U)) continue;
                const VertexId y = arcs[i].vertex;
                if (!reached[y]) {
                    reached[y] = 1;
                    next.push_back(y);
                }
            }
        }
        frontier.swap(next);
    }
}

}  // namespace

std::uint64_t edge_index(const InfluenceGraph& graph, VertexId u, VertexId v) {
    check_vertex(graph, u);
    check_vertex(graph, v);
    auto arcs = graph.out_arcs(u);
    auto it = std::lower_bound(arcs.begin(), arcs.end(), v,
                               [](const Arc& a, VertexId x) { return a.vertex < x; });
    if (it == arcs.end() || it->vertex != v) {
        throw DomainError("(" + std::to_string(u) + ", " + std::to_string(v) + ") is not an edge");
    }
    return graph.out_offset(u) + static_cast<std::uint64_t>(it - arcs.begin());
}

std::vector<std::pair<std::uint64_t, unsigned>> traversal_counts(const InfluenceGraph& graph,
                                                                 const Walk& walk) {
    if (walk.length() == 0) throw DomainError("a walk needs at least one edge");
    std::map<std::uint64_t, unsigned> counts;
    for (std::size_t i = 0; i + 1 < walk.vertices.size(); ++i) {
        ++counts[edge_index(graph, walk.vertices[i], walk.vertices[i + 1])];
    }
    return {counts.begin(), counts.end()};
}

double walk_probability(const InfluenceGraph& graph, const Walk& walk) {
    const auto edges = graph.edges();
    double pr = 1.0;
    for (const auto& [e, count] : traversal_counts(graph, walk)) {
        pr *= std::pow(edges[e].probability, static_cast<double>(count));
    }
    return pr;
}

double multi_walk_probability(const InfluenceGraph& graph, std::span<const Walk> walks) {
    const auto edges = graph.edges();
    std::map<std::uint64_t, unsigned> max_count;
    for (const Walk& walk : walks) {
        for (const auto& [e, count] : traversal_counts(graph, walk)) {
            auto& slot = max_count[e];
            slot = std::max(slot, count);
        }
    }
    double pr = 1.0;
    for (const auto& [e, count] : max_count) pr *= std::pow(edges[e].probability, static_cast<double>(count));
    return pr;
}

double exact_world_probability(const InfluenceGraph& graph, const MultiWorld& world, std::size_t L) {
    if (world.multiplicity.size() != graph.edge_count()) {
        throw DomainError("multi-world has " + std::to_string(world.multiplicity.size()) +
                          " multiplicities for " + std::to_string(graph.edge_count()) + " edges");
    }
    double pr = 1.0;
    std::size_t e = 0;
    for (VertexId u = 0; u < graph.vertex_count(); ++u) {
        for (const Arc& a : graph.out_arcs(u)) {
            const unsigned alpha = world.multiplicity[e++];
            if (alpha > L) throw DomainError("edge multiplicity exceeds L");
            if (alpha > 0) pr *= std::pow(a.probability, static_cast<double>(alpha));
            if (alpha < L) pr *= 1.0 - a.probability;
        }
    }
    return pr;
}

void for_each_multiworld(const InfluenceGraph& graph, std::size_t L,
                         const std::function<void(const MultiWorld&, double)>& visit,
                         const Limits& limits) {
    const std::size_t m = graph.edge_count();
    if (!power_within(L + 1, m, limits.max_multiworlds)) {
        throw CapacityError("multi-graph enumeration needs (L+1)^m <= " +
                            std::to_string(limits.max_multiworlds));
    }
    MultiWorld world{std::vector<unsigned>(m, 0)};
    while (true) {
        visit(world, exact_world_probability(graph, world, L));
        std::size_t i = 0;
        while (i < m && world.multiplicity[i] == L) world.multiplicity[i++] = 0;
        if (i == m) break;
        ++world.multiplicity[i];
    }
}

double brute_force_embedding_probability(const InfluenceGraph& graph, std::size_t L,
                                         std::span<const Walk> walks, const Limits& limits) {
    std::vector<std::vector<std::pair<std::uint64_t, unsigned>>> needs;
    for (const Walk& walk : walks) {
        if (walk.length() > L) throw DomainError("walk longer than L");
        needs.push_back(traversal_counts(graph, walk));
    }
    double total = 0.0;
    for_each_multiworld(
        graph, L,
        [&](const MultiWorld& world, double pr) {
            for (const auto& need : needs) {
                for (const auto& [e, count] : need) {
                    if (world.multiplicity[e] < count) return;
                }
            }
            total += pr;
        },
        limits);
    return total;
}

std::vector<Walk> enumerate_walks(const InfluenceGraph& graph, VertexId source, std::size_t L,
                                  const Limits& limits) {
    check_vertex(graph, source);
    std::vector<Walk> walks;
    std::vector<VertexId> path{source};
    std::function<void()> extend = [&] {
        if (path.size() > L) return;
        for (const Arc& a : graph.out_arcs(path.back())) {
            path.push_back(a.vertex);
            if (walks.size() >= limits.max_walks) {
                throw CapacityError("more than " + std::to_string(limits.max_walks) + " walks from vertex " +
                                    std::to_string(source));
            }
            walks.push_back(Walk{path});
            extend();
            path.pop_back();
        }
    };
    extend();
    return walks;
}

std::vector<Walk> walks_between(const InfluenceGraph& graph, VertexId u, VertexId v, std::size_t L,
                                const Limits& limits) {
    check_vertex(graph, v);
    auto all = enumerate_walks(graph, u, L, limits);
    std::vector<Walk> result;
    for (auto& walk : all) {
        if (walk.target() == v) result.push_back(std::move(walk));
    }
    return result;
}

double inclusion_exclusion(const InfluenceGraph& graph, std::span<const Walk> walks, const Limits& limits) {
    const std::size_t h = walks.size();
    if (h > limits.max_walk_set || h >= 63) {
        throw CapacityError("inclusion-exclusion over " + std::to_string(h) + " walks exceeds the guard of " +
                            std::to_string(limits.max_walk_set));
    }
    double total = 0.0;
    std::vector<Walk> subset;
    for (std::uint64_t mask = 1; mask < (1ULL << h); ++mask) {
        subset.clear();
        for (std::size_t i = 0; i < h; ++i) {
            if ((mask >> i) & 1U) subset.push_back(walks[i]);
        }
        const double term = multi_walk_probability(graph, subset);
        total += (subset.size() % 2 == 1) ? term : -term;
    }
    return total;
}

std::vector<double> embedded_count_distribution(const InfluenceGraph& graph, std::size_t L,
                                                std::span<const Walk> walks, const Limits& limits) {
    const auto edges = graph.edges();
    // Collapse each used edge onto levels 0..cap-1 (exact multiplicity) and cap (>= cap),
    // where cap is the largest count any walk needs. Unused edges sum out to 1.
    std::map<std::uint64_t, std::size_t> slot_of;
    std::vector<unsigned> cap;
    std::vector<std::vector<std::pair<std::size_t, unsigned>>> needs;
    for (const Walk& walk : walks) {
        if (walk.length() > L) throw DomainError("walk longer than L");
        std::vector<std::pair<std::size_t, unsigned>> need;
        for (const auto& [e, count] : traversal_counts(graph, walk)) {
            auto [it, inserted] = slot_of.emplace(e, cap.size());
            if (inserted) cap.push_back(0);
            cap[it->second] = std::max(cap[it->second], count);
            need.emplace_back(it->second, count);
        }
        needs.push_back(std::move(need));
    }
    std::uint64_t combos = 1;
    for (unsigned c : cap) {
        if (combos > limits.max_multiworlds / (c + 1)) {
            throw CapacityError("multi-world enumeration over walk edges exceeds the guard");
        }
        combos *= c + 1;
    }

    std::vector<std::vector<double>> level_probability(cap.size());
    for (const auto& [e, slot] : slot_of) {
        const double p = edges[e].probability;
        for (unsigned k = 0; k <= cap[slot]; ++k) {
            level_probability[slot].push_back(k < cap[slot] ? std::pow(p, k) * (1.0 - p) : std::pow(p, k));
        }
    }

    std::vector<double> exactly(walks.size() + 1, 0.0);
    std::vector<unsigned> level(cap.size(), 0);
    while (true) {
        double pr = 1.0;
        for (std::size_t s = 0; s < cap.size(); ++s) pr *= level_probability[s][level[s]];
        std::size_t embedded = 0;
        for (const auto& need : needs) {
            bool ok = true;
            for (const auto& [slot, count] : need) {
                if (level[slot] < count) {
                    ok = false;
                    break;
                }
            }
            embedded += ok ? 1 : 0;
        }
        exactly[embedded] += pr;
        std::size_t s = 0;
        while (s < cap.size() && level[s] == cap[s]) level[s++] = 0;
        if (s == cap.size()) break;
        ++level[s];
    }
    return exactly;
}

std::vector<std::vector<double>> reach_probabilities(const InfluenceGraph& graph,
                                                     std::optional<std::size_t> max_hops,
                                                     const Limits& limits) {
    require_base_guard(graph, limits);
    const std::size_t n = graph.vertex_count();
    const std::size_t m = graph.edge_count();
    const std::size_t hops = max_hops.value_or(n);
    const auto p = edge_probabilities(graph);
    std::vector<std::vector<double>> result(n, std::vector<double>(n, 0.0));
    std::vector<char> reached(n);
    std::vector<VertexId> frontier, next;
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        const double pr = base_world_probability(p, mask);
        for (VertexId u = 0; u < n; ++u) {
            const VertexId source[1] = {u};
            reach_in_world(graph, mask, source, hops, reached, frontier, next);
            for (VertexId v = 0; v < n; ++v) {
                if (reached[v]) result[u][v] += pr;
            }
        }
    }
    return result;
}

PairInfluence exact_pair_influence(const InfluenceGraph& graph, VertexId u, VertexId v,
                                   std::optional<std::size_t> L, const Limits& limits) {
    check_vertex(graph, u);
    check_vertex(graph, v);
    require_base_guard(graph, limits);
    PairInfluence result;
    const std::size_t n = graph.vertex_count();
    const auto p = edge_probabilities(graph);
    std::vector<char> reached(n);
    std::vector<VertexId> frontier, next;
    const VertexId source[1] = {u};
    for (std::uint64_t mask = 0; mask < (1ULL << graph.edge_count()); ++mask) {
        reach_in_world(graph, mask, source, L.value_or(n), reached, frontier, next);
        if (reached[v]) result.value += base_world_probability(p, mask);
    }
    if (L) {
        const auto walks = walks_between(graph, u, v, *L, limits);
        result.walk_count = walks.size();
        try {
            result.inclusion_exclusion = inclusion_exclusion(graph, walks, limits);
        } catch (const CapacityError&) {
        }
        try {
            const auto x = embedded_count_distribution(graph, *L, walks, limits);
            double any = 0.0;
            for (std::size_t i = 1; i < x.size(); ++i) any += x[i];
            result.multiworld = any;
        } catch (const CapacityError&) {
        }
    }
    return result;
}

double exact_seed_influence(const InfluenceGraph& graph, std::span<const VertexId> seeds,
                            const Limits& limits) {
    require_base_guard(graph, limits);
    const std::size_t n = graph.vertex_count();
    std::vector<VertexId> sources;
    for (VertexId s : seeds) {
        check_vertex(graph, s);
        if (std::find(sources.begin(), sources.end(), s) == sources.end()) sources.push_back(s);
    }
    const auto p = edge_probabilities(graph);
    std::vector<char> reached(n);
    std::vector<VertexId> frontier, next;
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << graph.edge_count()); ++mask) {
        reach_in_world(graph, mask, sources, n, reached, frontier, next);
        for (VertexId s : sources) reached[s] = 1;
        const auto count = std::count(reached.begin(), reached.end(), 1);
        total += base_world_probability(p, mask) * static_cast<double>(count);
    }
    return total;
}

WalkScore walk_score(const InfluenceGraph& graph, VertexId u, std::size_t L, const Limits& limits) {
    WalkScore score;
    score.per_target.assign(graph.vertex_count(), 0.0);
    score.walk_counts.assign(graph.vertex_count(), 0);
    for (const Walk& walk : enumerate_walks(graph, u, L, limits)) {
        const double pr = walk_probability(graph, walk);
        score.per_target[walk.target()] += pr;
        ++score.walk_counts[walk.target()];
    }
    for (double w : score.per_target) score.total += w;
    return score;
}

double ExactInfluenceReport::pair_gap_bound(VertexId u, VertexId v) const {
    const double h = static_cast<double>(walk_count[u][v]);
    return std::pow(max_probability, 3) * h * std::exp2(h);
}

double ExactInfluenceReport::score(VertexId u) const {
    double total = 0.0;
    for (double w : walk_score[u]) total += w;
    return total;
}

double ExactInfluenceReport::influence_of(VertexId u) const {
    double total = 0.0;
    for (double i : influence[u]) total += i;
    return total;
}

double ExactInfluenceReport::vertex_gap_bound(VertexId u) const {
    double sum = 0.0;
    for (std::size_t h : walk_count[u]) sum += static_cast<double>(h) * std::exp2(static_cast<double>(h));
    return std::pow(max_probability, 3) * static_cast<double>(L) * sum;
}

ExactInfluenceReport exact_influence_report(const InfluenceGraph& graph, std::size_t L, const Limits& limits) {
    const std::size_t n = graph.vertex_count();
    ExactInfluenceReport report;
    report.L = L;
    report.max_probability = graph.max_probability();
    report.influence = reach_probabilities(graph, L, limits);
    report.walk_score.assign(n, std::vector<double>(n, 0.0));
    report.walk_count.assign(n, std::vector<std::size_t>(n, 0));
    report.embedded_counts.assign(n, std::vector<std::vector<double>>(n));
    for (VertexId u = 0; u < n; ++u) {
        std::vector<std::vector<Walk>> by_target(n);
        for (auto& walk : enumerate_walks(graph, u, L, limits)) {
            report.walk_score[u][walk.target()] += walk_probability(graph, walk);
            by_target[walk.target()].push_back(std::move(walk));
        }
        for (VertexId v = 0; v < n; ++v) {
            report.walk_count[u][v] = by_target[v].size();
            try {
                report.embedded_counts[u][v] = embedded_count_distribution(graph, L, by_target[v], limits);
            } catch (const CapacityError&) {
                report.embedded_counts[u][v].clear();
            }
        }
    }
    return report;
}

VertexRemovalReport vertex_removal_gap(const InfluenceGraph& graph, VertexId w, std::size_t L,
                                       const Limits& limits) {
    check_vertex(graph, w);
    require_base_guard(graph, limits);
    const auto g1 = graph.without_edges([w](const Edge& e) { return e.source == w || e.target == w; });
    const auto g2 = graph.without_edges([w](const Edge& e) { return e.source == w; });
    const auto reach1 = reach_probabilities(g1, std::nullopt, limits);
    const auto reach2 = reach_probabilities(g2, std::nullopt, limits);
    const auto bounded1 = reach_probabilities(g1, L, limits);
    const auto bounded2 = reach_probabilities(g2, L, limits);
    const double pm3 = std::pow(graph.max_probability(), 3);
    const std::size_t n = graph.vertex_count();

    auto unbounded_influence = [n](const std::vector<std::vector<double>>& reach, VertexId u) {
        double total = 1.0;
        for (VertexId v = 0; v < n; ++v) {
            if (v != u) total += reach[u][v];
        }
        return total;
    };
    auto row_sum = [](const std::vector<double>& row) {
        double total = 0.0;
        for (double x : row) total += x;
        return total;
    };

    VertexRemovalReport report;
    report.removed = w;
    for (VertexId u = 0; u < n; ++u) {
        if (u == w) continue;
        VertexRemovalGap gap;
        gap.u = u;
        const auto score1 = walk_score(g1, u, L, limits);
        const auto score2 = walk_score(g2, u, L, limits);
        gap.influence_gap = std::abs(unbounded_influence(reach1, u) - unbounded_influence(reach2, u));
        gap.score_gap = std::abs(score1.total - score2.total);
        gap.excess_gap = std::abs((score1.total - row_sum(bounded1[u])) - (score2.total - row_sum(bounded2[u])));
        gap.walks_to_w = walks_between(graph, u, w, L, limits).size();
        const double h = static_cast<double>(gap.walks_to_w);
        gap.bound = pm3 * h * std::exp2(h);
        gap.walk_score_to_w = score2.per_target[w];
        gap.influence_to_w = reach2[u][w];
        report.gaps.push_back(gap);
    }
    return report;
}

}  // namespace quickim::oracle
