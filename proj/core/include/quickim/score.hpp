#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "quickim/graph.hpp"

namespace quickim {

/// Walk-probability scores: per_hop[j-1][u] is the total probability of length-j walks
/// leaving u (the j-th power of the probability matrix applied to the all-ones vector),
/// and total[u] is their sum over j = 1..L.
struct ScoreVectors {
    std::size_t max_walk_length = 0;
    std::vector<std::vector<double>> per_hop;
    std::vector<double> total;

    double hop(std::size_t j, VertexId u) const { return per_hop[j - 1][u]; }
    std::size_t bytes() const noexcept;
};

/// L sparse matrix-vector products over the out-CSR. `threads` = 0 uses all cores;
/// results do not depend on the thread count.
ScoreVectors score_est(const InfluenceGraph& graph, std::size_t max_walk_length, unsigned threads = 1);

struct ColumnEntry {
    VertexId vertex;
    double value;
};

/// Columns A^j[*, seed] for j = 1..depth: the probability mass of length-j walks from each
/// vertex into `seed`. Each column is sorted by vertex and holds only positive values.
struct WalkColumnSet {
    VertexId seed = 0;
    std::vector<std::vector<ColumnEntry>> columns;

    std::size_t depth() const noexcept { return columns.size(); }
    /// A^j[u, seed], 0 when absent or when j is outside 1..depth.
    double value(std::size_t j, VertexId u) const;
    std::size_t entry_count() const noexcept;
};

/// Hash-keyed accumulator over vertex ids that switches to a dense array once more than
/// 1/8 of the universe is occupied.
class SparseAccumulator {
public:
    explicit SparseAccumulator(std::size_t universe);

    void add(VertexId v, double x);
    std::size_t size() const noexcept { return dense_mode_ ? touched_.size() : sparse_.size(); }
    bool dense() const noexcept { return dense_mode_; }

    /// Entries sorted by vertex id with zeros dropped; leaves the accumulator empty.
    std::vector<ColumnEntry> take_sorted();

private:
    void densify();

    std::size_t universe_;
    std::size_t dense_threshold_;
    bool dense_mode_ = false;
    std::unordered_map<VertexId, double> sparse_;
    std::vector<double> dense_;
    std::vector<VertexId> touched_;
};

/// Reverse level-by-level traversal from `target` computing A^j[*, target] for j = 1..depth.
/// In-neighbours flagged in `excluded` are never entered, so walks starting at or passing
/// through them contribute nothing. `excluded` is either empty or has one flag per vertex.
WalkColumnSet walk_pro(const InfluenceGraph& graph, std::size_t depth, VertexId target,
                       std::span<const std::uint8_t> excluded = {});

}  // namespace quickim
