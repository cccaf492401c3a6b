#include "quickim/score.hpp"

#include <algorithm>

#include "quickim/error.hpp"
#include "quickim/parallel.hpp"

namespace quickim {

std::size_t ScoreVectors::bytes() const noexcept {
    std::size_t total_bytes = total.capacity() * sizeof(double);
    for (const auto& hop_vector : per_hop) total_bytes += hop_vector.capacity() * sizeof(double);
    return total_bytes;
}

ScoreVectors score_est(const InfluenceGraph& graph, std::size_t max_walk_length, unsigned threads) {
    if (max_walk_length == 0) throw DomainError("maximum walk length must be at least 1");
    const std::size_t n = graph.vertex_count();
    ScoreVectors scores;
    scores.max_walk_length = max_walk_length;
    scores.per_hop.assign(max_walk_length, std::vector<double>(n, 0.0));
    scores.total.assign(n, 0.0);

    // F_1 = A * 1
    parallel_chunks(n, threads, [&](unsigned, std::size_t begin, std::size_t end) {
        auto& f1 = scores.per_hop[0];
        for (std::size_t u = begin; u < end; ++u) {
            double sum = 0.0;
            for (const Arc& a : graph.out_arcs(static_cast<VertexId>(u))) sum += a.probability;
            f1[u] = sum;
        }
    });
    for (std::size_t j = 1; j < max_walk_length; ++j) {
        const auto& prev = scores.per_hop[j - 1];
        auto& cur = scores.per_hop[j];
        parallel_chunks(n, threads, [&](unsigned, std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u) {
                double sum = 0.0;
                for (const Arc& a : graph.out_arcs(static_cast<VertexId>(u))) {
                    sum += a.probability * prev[a.vertex];
                }
                cur[u] = sum;
            }
        });
    }
    for (std::size_t u = 0; u < n; ++u) {
        double sum = 0.0;
        for (std::size_t j = 0; j < max_walk_length; ++j) sum += scores.per_hop[j][u];
        scores.total[u] = sum;
    }
    return scores;
}

double WalkColumnSet::value(std::size_t j, VertexId u) const {
    if (j == 0 || j > columns.size()) return 0.0;
    const auto& column = columns[j - 1];
    auto it = std::lower_bound(column.begin(), column.end(), u,
                               [](const ColumnEntry& e, VertexId x) { return e.vertex < x; });
    return (it != column.end() && it->vertex == u) ? it->value : 0.0;
}

std::size_t WalkColumnSet::entry_count() const noexcept {
    std::size_t count = 0;
    for (const auto& column : columns) count += column.size();
    return count;
}

SparseAccumulator::SparseAccumulator(std::size_t universe)
    : universe_(universe), dense_threshold_(std::max<std::size_t>(universe / 8, 1)) {}

void SparseAccumulator::add(VertexId v, double x) {
    if (dense_mode_) {
        if (dense_[v] == 0.0) touched_.push_back(v);
        dense_[v] += x;
        return;
    }
    sparse_[v] += x;
    if (sparse_.size() > dense_threshold_) densify();
}

void SparseAccumulator::densify() {
    if (dense_.size() != universe_) dense_.assign(universe_, 0.0);
    touched_.clear();
    touched_.reserve(sparse_.size() * 2);
    for (const auto& [v, x] : sparse_) {
        dense_[v] = x;
        touched_.push_back(v);
    }
    sparse_.clear();
    dense_mode_ = true;
}

std::vector<ColumnEntry> SparseAccumulator::take_sorted() {
    std::vector<ColumnEntry> entries;
    if (dense_mode_) {
        std::sort(touched_.begin(), touched_.end());
        entries.reserve(touched_.size());
        for (VertexId v : touched_) {
            if (dense_[v] > 0.0) entries.push_back({v, dense_[v]});
            dense_[v] = 0.0;
        }
        touched_.clear();
        dense_mode_ = false;
    } else {
        entries.reserve(sparse_.size());
        for (const auto& [v, x] : sparse_) {
            if (x > 0.0) entries.push_back({v, x});
        }
        sparse_.clear();
        std::sort(entries.begin(), entries.end(),
                  [](const ColumnEntry& a, const ColumnEntry& b) { return a.vertex < b.vertex; });
    }
    return entries;
}

WalkColumnSet walk_pro(const InfluenceGraph& graph, std::size_t depth, VertexId target,
                       std::span<const std::uint8_t> excluded) {
    if (target >= graph.vertex_count()) throw DomainError("walk target out of range");
    if (!excluded.empty() && excluded.size() != graph.vertex_count()) {
        throw DomainError("exclusion mask has wrong size");
    }
    if (!excluded.empty() && excluded[target]) throw DomainError("walk target is excluded");

    WalkColumnSet result;
    result.seed = target;
    result.columns.reserve(depth);
    SparseAccumulator next(graph.vertex_count());
    std::vector<ColumnEntry> level{{target, 1.0}};
    for (std::size_t j = 0; j < depth; ++j) {
        for (const ColumnEntry& entry : level) {
            for (const Arc& a : graph.in_arcs(entry.vertex)) {
                if (!excluded.empty() && excluded[a.vertex]) continue;
                next.add(a.vertex, entry.value * a.probability);
            }
        }
        level = next.take_sorted();
        result.columns.push_back(level);
    }
    return result;
}

}  // namespace quickim
