#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "quickim/graph.hpp"
#include "quickim/score.hpp"

namespace quickim {

/// Full score maintenance: after each removal every per-hop vector is corrected for every
/// vertex in the seed's reverse neighbourhood.
class BasicUpdater {
public:
    BasicUpdater(const InfluenceGraph& graph, std::size_t max_walk_length, unsigned threads = 1);

    /// Non-seed vertex with the largest total score; ties go to the smallest id.
    VertexId select() const;

    /// Removes the out-edges of `seed` and corrects all scores.
    void apply(VertexId seed);

    struct Step {
        VertexId seed;
        double score;
    };
    Step step();

    /// Per-hop and total scores on the residual graph; seed entries are zero.
    const ScoreVectors& scores() const noexcept { return scores_; }
    const std::vector<VertexId>& seeds() const noexcept { return seeds_; }
    bool is_seed(VertexId v) const { return excluded_[v] != 0; }
    /// c_0..c_{L-1} of the most recent removal.
    const std::vector<double>& last_coefficients() const noexcept { return last_c_; }

private:
    const InfluenceGraph* graph_;
    std::size_t L_;
    ScoreVectors scores_;
    std::vector<VertexId> seeds_;
    std::vector<std::uint8_t> excluded_;
    std::vector<double> last_c_;
};

/// Everything retained about one removal.
struct IterationRecord {
    VertexId seed = 0;
    double score = 0.0;
    std::vector<double> c;  ///< c_0..c_{L-1}, all <= 0
    std::vector<double> g;  ///< prefix sums of c
    WalkColumnSet columns;  ///< A^1..A^{L-1} into the seed, seeds before it excluded
};

struct LazyDiagnostics {
    std::size_t iteration = 0;
    std::map<std::size_t, std::size_t> timestamp_histogram;
    std::size_t f_cache_entries = 0;
    std::size_t df_cache_entries = 0;
    std::size_t column_entries = 0;
    std::size_t total_touched = 0;
    std::size_t total_skipped = 0;
    std::size_t aux_bytes = 0;
    std::size_t peak_aux_bytes = 0;
};

/// Pay-as-you-go score maintenance. Each vertex keeps the score it had at its own timestamp
/// and is brought forward only when it could still be the next maximiser.
class LazyUpdater {
public:
    LazyUpdater(const InfluenceGraph& graph, std::size_t max_walk_length, unsigned threads = 1);

    struct Step {
        VertexId seed = 0;
        double score = 0.0;
        std::size_t touched = 0;  ///< vertices that received at least one correction
        std::size_t skipped = 0;  ///< vertices left stale by the lower bound
        std::size_t column_entries = 0;
    };

    /// Selects the next seed, records its coefficients and sweeps the remaining vertices.
    Step step();
    /// Same as step() with a caller-chosen seed instead of the maximiser.
    Step step_with(VertexId seed);

    /// Iteration that the next call to step() performs (1-based).
    std::size_t iteration() const noexcept { return records_.size() + 1; }

    /// F_j^(t)[v] with caching; j = 0 is the all-ones boundary.
    double lazy_F(std::size_t t, std::size_t j, VertexId v);
    /// ΔF_j^(t)[v] = sum_{x=0}^{j-2} c_x^(t) A^{j-x-1}[v, w^(t)]; zero for j <= 1.
    double lazy_dF(std::size_t t, std::size_t j, VertexId v);
    /// c_x^(t) for the removal performed in iteration t; requires c_0..c_{x-2} to be known.
    double compute_delta_coeff(std::size_t t, std::size_t x);

    /// F_j[v] on the current residual graph, forced through the caches.
    double force_hop_score(std::size_t j, VertexId v) { return lazy_F(iteration(), j, v); }
    /// Current total score of u obtained by applying all pending corrections, without
    /// changing any state.
    double fully_updated_score(VertexId u) const;

    double stale_score(VertexId u) const { return score_[u]; }
    std::size_t timestamp(VertexId u) const { return timestamp_[u]; }
    bool is_seed(VertexId v) const { return seed_iteration_[v] != 0; }

    const std::vector<IterationRecord>& records() const noexcept { return records_; }
    LazyDiagnostics diagnostics() const;
    std::size_t aux_bytes() const noexcept;
    std::size_t peak_aux_bytes() const noexcept { return peak_aux_bytes_; }

private:
    struct CacheEntry {
        std::uint32_t t;
        double value;
    };

    std::uint64_t key(std::size_t j, VertexId v) const { return static_cast<std::uint64_t>(v) * (L_ + 1) + j; }
    double correction(std::size_t y, VertexId u) const;
    VertexId select() const;

    const InfluenceGraph* graph_;
    std::size_t L_;
    ScoreVectors initial_;
    std::vector<double> score_;
    std::vector<std::uint32_t> timestamp_;
    std::vector<std::uint32_t> seed_iteration_;
    std::vector<std::uint8_t> excluded_;
    std::vector<IterationRecord> records_;
    std::unordered_map<std::uint64_t, CacheEntry> f_cache_;
    std::unordered_map<std::uint64_t, CacheEntry> df_cache_;
    std::size_t column_entries_ = 0;
    std::size_t total_touched_ = 0;
    std::size_t total_skipped_ = 0;
    std::size_t peak_aux_bytes_ = 0;
};

}  // namespace quickim
