#pragma once

// Exact, exponential-time reference computations for tiny graphs. Everything here
// enumerates possible worlds or walks explicitly and is guarded against blow-up.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "quickim/graph.hpp"

namespace quickim::oracle {

struct Limits {
    std::size_t max_base_edges = 20;             ///< 2^m base possible worlds
    std::uint64_t max_multiworlds = 1ULL << 24;  ///< (L+1)^m worlds of the multi-graph
    std::size_t max_walk_set = 20;               ///< 2^h inclusion-exclusion terms
    std::uint64_t max_walks = 1ULL << 20;        ///< walks enumerated from one vertex
};

/// A vertex sequence (v0, ..., vt) whose consecutive pairs are edges; length t >= 1.
struct Walk {
    std::vector<VertexId> vertices;

    std::size_t length() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
    VertexId source() const { return vertices.front(); }
    VertexId target() const { return vertices.back(); }
};

/// Edge multiplicities of a possible world of the L-fold multi-graph, indexed by the edge's
/// position in out-CSR order.
struct MultiWorld {
    std::vector<unsigned> multiplicity;
};

/// Edge index (out-CSR order) of (u,v); throws DomainError when absent.
std::uint64_t edge_index(const InfluenceGraph& graph, VertexId u, VertexId v);

/// Per-edge traversal counts of a walk as (edge index, count), sorted by edge index.
std::vector<std::pair<std::uint64_t, unsigned>> traversal_counts(const InfluenceGraph& graph,
                                                                 const Walk& walk);

/// Product of P(e)^count over the edges of the walk.
double walk_probability(const InfluenceGraph& graph, const Walk& walk);

/// Product over edges used by any walk of P(e)^(max count over the walks).
double multi_walk_probability(const InfluenceGraph& graph, std::span<const Walk> walks);

/// Pr of one possible world of the multi-graph:
///   prod_{alpha(e)>0} P(e)^alpha(e) * prod_{alpha(e)<L} (1 - P(e)).
double exact_world_probability(const InfluenceGraph& graph, const MultiWorld& world, std::size_t L);

/// Visits every possible world of the L-fold multi-graph with its probability.
void for_each_multiworld(const InfluenceGraph& graph, std::size_t L,
                         const std::function<void(const MultiWorld&, double)>& visit,
                         const Limits& limits = {});

/// Sum of Pr(g^L) over all worlds in which every walk in `walks` is embedded (full enumeration).
double brute_force_embedding_probability(const InfluenceGraph& graph, std::size_t L,
                                         std::span<const Walk> walks, const Limits& limits = {});

/// All walks of length 1..L starting at `source`, in DFS order over sorted out-arcs.
std::vector<Walk> enumerate_walks(const InfluenceGraph& graph, VertexId source, std::size_t L,
                                  const Limits& limits = {});

/// Walks of length 1..L from u to v.
std::vector<Walk> walks_between(const InfluenceGraph& graph, VertexId u, VertexId v, std::size_t L,
                                const Limits& limits = {});

/// Pr(at least one walk embedded) by inclusion-exclusion over subsets of `walks`.
double inclusion_exclusion(const InfluenceGraph& graph, std::span<const Walk> walks,
                           const Limits& limits = {});

/// X[i] = total probability of multi-graph worlds embedding exactly i of `walks`, i = 0..h.
/// Enumerates only the edges the walks use, each over the multiplicity levels that matter.
std::vector<double> embedded_count_distribution(const InfluenceGraph& graph, std::size_t L,
                                                std::span<const Walk> walks,
                                                const Limits& limits = {});

/// Reachability probabilities from base-world enumeration: result[u][v] is the probability
/// that v is reachable from u by a path of 1..max_hops edges (unbounded when nullopt).
/// The diagonal holds the probability of a closed walk through u.
std::vector<std::vector<double>> reach_probabilities(const InfluenceGraph& graph,
                                                     std::optional<std::size_t> max_hops,
                                                     const Limits& limits = {});

struct PairInfluence {
    double value = 0.0;  ///< base-world reachability (the definition)
    std::optional<double> inclusion_exclusion;  ///< only with bounded L and h within guard
    std::optional<double> multiworld;           ///< only with bounded L and within guard
    std::size_t walk_count = 0;
};

/// Influence of u on v. With `L` unset this is plain reachability over base worlds; with `L`
/// set it is the probability that some walk of length 1..L from u to v is embedded, also
/// computed by the two walk-based routes when their guards permit.
PairInfluence exact_pair_influence(const InfluenceGraph& graph, VertexId u, VertexId v,
                                   std::optional<std::size_t> L, const Limits& limits = {});

/// Expected number of vertices reachable from `seeds` (seeds included), by enumerating all
/// 2^m base worlds.
double exact_seed_influence(const InfluenceGraph& graph, std::span<const VertexId> seeds,
                            const Limits& limits = {});

struct WalkScore {
    double total = 0.0;                     ///< sum over v of W(u,v)
    std::vector<double> per_target;         ///< W(u,v)
    std::vector<std::size_t> walk_counts;   ///< h_uv
};

/// Walk score of u by explicit walk enumeration.
WalkScore walk_score(const InfluenceGraph& graph, VertexId u, std::size_t L, const Limits& limits = {});

/// Per-pair quantities for every (u,v) of a guarded graph.
struct ExactInfluenceReport {
    std::size_t L = 0;
    double max_probability = 0.0;             ///< p_m
    std::vector<std::vector<double>> influence;    ///< I(u,v), L-bounded walk event
    std::vector<std::vector<double>> walk_score;   ///< W(u,v)
    std::vector<std::vector<std::size_t>> walk_count;  ///< h_uv
    /// X^<i>(u,v) for i = 0..h_uv; empty when the enumeration guard was exceeded.
    std::vector<std::vector<std::vector<double>>> embedded_counts;

    double gap(VertexId u, VertexId v) const { return walk_score[u][v] - influence[u][v]; }
    /// p_m^3 * h * 2^h
    double pair_gap_bound(VertexId u, VertexId v) const;
    double score(VertexId u) const;
    double influence_of(VertexId u) const;
    /// p_m^3 * L * sum_v h_uv 2^h_uv
    double vertex_gap_bound(VertexId u) const;
};

ExactInfluenceReport exact_influence_report(const InfluenceGraph& graph, std::size_t L,
                                            const Limits& limits = {});

/// Effect of dropping w's in-edges on top of its out-edges, for every u != w.
struct VertexRemovalGap {
    VertexId u = 0;
    double influence_gap = 0.0;  ///< |I_G1(u) - I_G2(u)| with unbounded influence
    double score_gap = 0.0;      ///< |Î_G1(u) - Î_G2(u)|
    double excess_gap = 0.0;     ///< |(Î - I_L)_G1(u) - (Î - I_L)_G2(u)|, I_L walk-bounded
    double bound = 0.0;          ///< p_m^3 * h_uw * 2^h_uw, h_uw counted in G
    std::size_t walks_to_w = 0;
    double walk_score_to_w = 0.0;       ///< W_G2(u,w)
    double influence_to_w = 0.0;        ///< I_G2(u,w), unbounded

    bool influence_gap_ok() const { return influence_gap >= 0.0 && influence_gap <= 1.0; }
    bool score_gap_ok(double tol = 1e-10) const { return score_gap <= bound + tol; }
    bool excess_gap_ok(double tol = 1e-10) const { return excess_gap <= bound + tol; }
};

struct VertexRemovalReport {
    VertexId removed = 0;
    std::vector<VertexRemovalGap> gaps;
};

VertexRemovalReport vertex_removal_gap(const InfluenceGraph& graph, VertexId w, std::size_t L,
                               const Limits& limits = {});

}  // namespace quickim::oracle
