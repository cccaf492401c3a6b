#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "quickim/defaults.hpp"

namespace quickim {

using VertexId = std::uint32_t;
using Label = std::uint64_t;

/// One adjacency entry: the neighbour on the other side and the edge probability.
struct Arc {
    VertexId vertex;
    double probability;
};

struct Edge {
    VertexId source;
    VertexId target;
    double probability;

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class ModelKind { WC, TR, UN };

/// How influence probabilities are assigned to edges.
///   WC: P(u,v) = 1 / in-degree(v)
///   TR: P(u,v) drawn uniformly from {p_t, p_t^2, p_t^3}, keyed by (rng_seed, edge index)
///   UN: P(u,v) = p_u
struct ProbabilityModel {
    ModelKind kind = ModelKind::WC;
    double p_t = kDefaultTrivalencyBase;
    double p_u = kDefaultUniformProbability;
    std::uint64_t rng_seed = 0;

    void validate() const;
    std::string describe() const;
};

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

/// Immutable directed influence graph stored twice in CSR form (out- and in-adjacency).
///
/// Vertices are dense ids 0..n-1; the external label of each id is kept for reporting.
/// Adjacency lists are sorted by neighbour id. Construction rejects self-loops, duplicate
/// edges and probabilities outside (0,1].
class InfluenceGraph {
public:
    InfluenceGraph();

    /// Builds a graph over `vertex_count` vertices. `labels` defaults to the identity.
    static InfluenceGraph from_edges(std::size_t vertex_count, std::vector<Edge> edges,
                                     std::vector<Label> labels = {},
                                     std::string probability_model = "input");

    std::size_t vertex_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return out_arcs_.size(); }

    std::span<const Arc> out_arcs(VertexId u) const noexcept {
        return {out_arcs_.data() + out_offsets_[u], out_arcs_.data() + out_offsets_[u + 1]};
    }
    std::span<const Arc> in_arcs(VertexId v) const noexcept {
        return {in_arcs_.data() + in_offsets_[v], in_arcs_.data() + in_offsets_[v + 1]};
    }
    std::size_t out_degree(VertexId u) const noexcept { return out_offsets_[u + 1] - out_offsets_[u]; }
    std::size_t in_degree(VertexId v) const noexcept { return in_offsets_[v + 1] - in_offsets_[v]; }

    /// Index of the out-arc (u,v) in the global out-CSR order, used as a stable edge id.
    std::uint64_t out_offset(VertexId u) const noexcept { return out_offsets_[u]; }

    /// Probability of edge (u,v), or nullopt when absent.
    std::optional<double> probability(VertexId u, VertexId v) const;

    Label label(VertexId v) const { return labels_[v]; }
    std::span<const Label> labels() const noexcept { return labels_; }
    std::optional<VertexId> find(Label label) const;
    /// Like find() but throws DomainError naming the label.
    VertexId vertex_of(Label label) const;

    /// All edges in out-CSR order (by source, then target).
    std::vector<Edge> edges() const;

    double max_probability() const noexcept;
    const std::string& probability_model() const noexcept { return model_; }

    /// Bytes held by the two CSR structures (offsets and arcs), excluding labels.
    std::size_t csr_bytes() const noexcept;

    /// Verifies the dual-CSR invariants; throws DomainError on violation.
    void check_consistency() const;

    /// Copy without the edges for which `drop` returns true. Labels are kept.
    InfluenceGraph without_edges(const std::function<bool(const Edge&)>& drop) const;

private:
    std::vector<std::uint64_t> out_offsets_;
    std::vector<Arc> out_arcs_;
    std::vector<std::uint64_t> in_offsets_;
    std::vector<Arc> in_arcs_;
    std::vector<Label> labels_;
    std::unordered_map<Label, VertexId> index_;
    std::string model_;
};

InfluenceGraph assign_probabilities(const InfluenceGraph& graph, const ProbabilityModel& model);

struct GraphSummary {
    std::size_t n = 0;
    std::size_t m = 0;
    double avg_out_degree = 0.0;
    std::string probability_model;
};

GraphSummary summarize(const InfluenceGraph& graph);

// ---- Edge-list text format -------------------------------------------------

struct EdgeListFormat {
    enum class Columns {
        Auto,      ///< two or three columns, consistently across the file
        Pairs,     ///< "u v"; probabilities set to 1.0
        Weighted,  ///< "u v p"
    };
    Columns columns = Columns::Auto;
};

/// Parses "u v [p]" lines. '#' and '%' start comment lines. Labels are non-negative integers
/// mapped to dense ids in first-appearance order.
InfluenceGraph load_edge_list(std::istream& in, EdgeListFormat format = {});

/// Writes "u v p" lines using external labels. Edge order is chosen so that loading the
/// output reproduces the same dense ids for graphs whose ids are in first-appearance order.
void write_edge_list(std::ostream& out, const InfluenceGraph& graph);

// ---- Binary cache ----------------------------------------------------------

inline constexpr char kCacheMagic[8] = {'Q', 'I', 'M', 'G', 'R', 'A', 'P', 'H'};
inline constexpr std::uint32_t kCacheVersion = 1;

void write_binary_cache(std::ostream& out, const InfluenceGraph& graph);
InfluenceGraph read_binary_cache(std::istream& in);

/// Loads either format, detected by the magic bytes. Throws IoError when unreadable.
InfluenceGraph load_graph(const std::filesystem::path& path, EdgeListFormat format = {});

}  // namespace quickim
