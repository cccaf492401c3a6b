#include "quickim/update.hpp"

#include <algorithm>
#include <limits>

#include "quickim/error.hpp"

namespace quickim {

namespace {

constexpr double kNoBound = -std::numeric_limits<double>::infinity();

double clamp_nonnegative(double x) { return x < 0.0 ? 0.0 : x; }

}  // namespace

// ---- BasicUpdater ----------------------------------------------------------

BasicUpdater::BasicUpdater(const InfluenceGraph& graph, std::size_t max_walk_length, unsigned threads)
    : graph_(&graph),
      L_(max_walk_length),
      scores_(score_est(graph, max_walk_length, threads)),
      excluded_(graph.vertex_count(), 0) {}

VertexId BasicUpdater::select() const {
    const std::size_t n = graph_->vertex_count();
    VertexId best = static_cast<VertexId>(n);
    double best_score = kNoBound;
    for (VertexId u = 0; u < n; ++u) {
        if (excluded_[u]) continue;
        if (scores_.total[u] > best_score) {
            best = u;
            best_score = scores_.total[u];
        }
    }
    if (best == n) throw DomainError("no vertex left to select");
    return best;
}

void BasicUpdater::apply(VertexId w) {
    if (w >= graph_->vertex_count() || excluded_[w]) throw DomainError("invalid seed for update");
    const WalkColumnSet columns = walk_pro(*graph_, L_ - 1, w, excluded_);

    // c_x = -sum_v P(w,v) * F_x^(t+1)[v], built up in x because F_x^(t+1) needs c_0..c_{x-2}.
    std::vector<double> c(L_, 0.0);
    for (std::size_t x = 0; x < L_; ++x) {
        double sum = 0.0;
        for (const Arc& a : graph_->out_arcs(w)) {
            double next;
            if (x == 0) {
                next = 1.0;
            } else if (excluded_[a.vertex]) {
                next = 0.0;
            } else {
                double delta = 0.0;
                for (std::size_t j = 1; j + 1 <= x; ++j) delta += c[x - 1 - j] * columns.value(j, a.vertex);
                next = clamp_nonnegative(scores_.hop(x, a.vertex) + delta);
            }
            sum += a.probability * next;
        }
        c[x] = -sum;
    }

    // ΔF_i[u] = sum_{j=1}^{i-1} c_{i-j-1} A^j[u,w]
    std::vector<VertexId> touched;
    for (std::size_t i = 2; i <= L_; ++i) {
        auto& hop = scores_.per_hop[i - 1];
        for (std::size_t j = 1; j <= i - 1; ++j) {
            const double coeff = c[i - j - 1];
            for (const ColumnEntry& e : columns.columns[j - 1]) {
                if (e.vertex == w) continue;
                hop[e.vertex] += coeff * e.value;
                touched.push_back(e.vertex);
            }
        }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (VertexId u : touched) {
        double total = 0.0;
        for (std::size_t i = 0; i < L_; ++i) {
            scores_.per_hop[i][u] = clamp_nonnegative(scores_.per_hop[i][u]);
            total += scores_.per_hop[i][u];
        }
        scores_.total[u] = total;
    }

    for (std::size_t i = 0; i < L_; ++i) scores_.per_hop[i][w] = 0.0;
    scores_.total[w] = 0.0;
    excluded_[w] = 1;
    seeds_.push_back(w);
    last_c_ = std::move(c);
}

BasicUpdater::Step BasicUpdater::step() {
    const VertexId w = select();
    const double score = scores_.total[w];
    apply(w);
    return {w, score};
}

// ---- LazyUpdater -----------------------------------------------------------

LazyUpdater::LazyUpdater(const InfluenceGraph& graph, std::size_t max_walk_length, unsigned threads)
    : graph_(&graph),
      L_(max_walk_length),
      initial_(score_est(graph, max_walk_length, threads)),
      score_(initial_.total),
      timestamp_(graph.vertex_count(), 1),
      seed_iteration_(graph.vertex_count(), 0),
      excluded_(graph.vertex_count(), 0) {
    peak_aux_bytes_ = aux_bytes();
}

double LazyUpdater::lazy_F(std::size_t t, std::size_t j, VertexId v) {
    if (j > L_) throw DomainError("hop index exceeds the maximum walk length");
    if (t == 0 || t > iteration()) throw DomainError("iteration out of range");
    if (j == 0) return 1.0;
    if (seed_iteration_[v] != 0 && seed_iteration_[v] < t) return 0.0;
    if (t == 1) return initial_.hop(j, v);

    std::size_t from = 1;
    double value = initial_.hop(j, v);
    const auto it = f_cache_.find(key(j, v));
    if (it != f_cache_.end() && it->second.t <= t) {
        if (it->second.t == t) return it->second.value;
        from = it->second.t;
        value = it->second.value;
    }
    for (std::size_t s = from; s < t; ++s) value = clamp_nonnegative(value + lazy_dF(s, j, v));
    if (it == f_cache_.end()) {
        f_cache_.emplace(key(j, v), CacheEntry{static_cast<std::uint32_t>(t), value});
    } else if (it->second.t < t) {
        it->second = CacheEntry{static_cast<std::uint32_t>(t), value};
    }
    return value;
}

double LazyUpdater::lazy_dF(std::size_t t, std::size_t j, VertexId v) {
    if (j <= 1) return 0.0;
    if (t == 0 || t > records_.size()) throw DomainError("no removal recorded for this iteration");
    const IterationRecord& record = records_[t - 1];
    if (record.c.size() + 1 < j) throw DomainError("coefficients not yet available");

    const auto it = df_cache_.find(key(j, v));
    if (it != df_cache_.end() && it->second.t == t) return it->second.value;

    double value = 0.0;
    bool reached = false;
    for (std::size_t x = 0; x + 2 <= j; ++x) {
        const double a = record.columns.value(j - x - 1, v);
        if (a == 0.0) continue;
        reached = true;
        value += record.c[x] * a;
    }
    if (!reached) return 0.0;
    if (it == df_cache_.end()) {
        df_cache_.emplace(key(j, v), CacheEntry{static_cast<std::uint32_t>(t), value});
    } else if (it->second.t < t) {
        it->second = CacheEntry{static_cast<std::uint32_t>(t), value};
    }
    return value;
}

double LazyUpdater::compute_delta_coeff(std::size_t t, std::size_t x) {
    if (t == 0 || t > records_.size()) throw DomainError("no removal recorded for this iteration");
    const VertexId w = records_[t - 1].seed;
    double sum = 0.0;
    for (const Arc& a : graph_->out_arcs(w)) {
        const std::uint32_t since = seed_iteration_[a.vertex];
        double next;
        if (x == 0) {
            next = 1.0;
        } else if (since != 0 && since < t) {
            next = 0.0;
        } else {
            next = clamp_nonnegative(lazy_F(t, x, a.vertex) + lazy_dF(t, x, a.vertex));
        }
        sum += a.probability * next;
    }
    return -sum;
}

double LazyUpdater::correction(std::size_t y, VertexId u) const {
    const IterationRecord& record = records_[y - 1];
    double sum = 0.0;
    for (std::size_t j = 1; j < L_; ++j) {
        const double a = record.columns.value(j, u);
        if (a != 0.0) sum += record.g[L_ - j - 1] * a;
    }
    return sum;
}

double LazyUpdater::fully_updated_score(VertexId u) const {
    if (is_seed(u)) return 0.0;
    double value = score_[u];
    for (std::size_t y = timestamp_[u]; y <= records_.size(); ++y) value = clamp_nonnegative(value + correction(y, u));
    return value;
}

VertexId LazyUpdater::select() const {
    const std::size_t n = graph_->vertex_count();
    const std::size_t t = iteration();
    VertexId best = static_cast<VertexId>(n);
    double best_score = kNoBound;
    for (VertexId u = 0; u < n; ++u) {
        if (excluded_[u] || timestamp_[u] != t) continue;
        if (score_[u] > best_score) {
            best = u;
            best_score = score_[u];
        }
    }
    if (best == n) throw DomainError("no vertex left to select");
    return best;
}

LazyUpdater::Step LazyUpdater::step() { return step_with(select()); }

LazyUpdater::Step LazyUpdater::step_with(VertexId seed) {
    const std::size_t n = graph_->vertex_count();
    if (seed >= n || excluded_[seed]) throw DomainError("invalid seed for update");
    const std::size_t t = iteration();
    Step result;
    result.seed = seed;
    result.score = score_[result.seed];

    IterationRecord record;
    record.seed = result.seed;
    record.score = result.score;
    record.columns = walk_pro(*graph_, L_ - 1, result.seed, excluded_);
    result.column_entries = record.columns.entry_count();
    column_entries_ += result.column_entries;
    records_.push_back(std::move(record));

    IterationRecord& current = records_.back();
    double prefix = 0.0;
    for (std::size_t x = 0; x < L_; ++x) {
        const double c = compute_delta_coeff(t, x);
        current.c.push_back(c);
        prefix += c;
        current.g.push_back(prefix);
    }
    seed_iteration_[result.seed] = static_cast<std::uint32_t>(t);
    excluded_[result.seed] = 1;
    score_[result.seed] = 0.0;

    double bound = kNoBound;
    for (VertexId u = 0; u < n; ++u) {
        if (excluded_[u]) continue;
        if (score_[u] <= bound) {
            ++result.skipped;
            continue;
        }
        const std::uint32_t before = timestamp_[u];
        while (timestamp_[u] <= t) {
            score_[u] = clamp_nonnegative(score_[u] + correction(timestamp_[u], u));
            ++timestamp_[u];
            if (score_[u] <= bound) break;
        }
        if (timestamp_[u] != before) ++result.touched;
        if (timestamp_[u] == t + 1) bound = std::max(bound, score_[u]);
    }
    total_touched_ += result.touched;
    total_skipped_ += result.skipped;
    peak_aux_bytes_ = std::max(peak_aux_bytes_, aux_bytes());
    return result;
}

std::size_t LazyUpdater::aux_bytes() const noexcept {
    const std::size_t n = graph_->vertex_count();
    std::size_t bytes = initial_.bytes();
    bytes += n * (sizeof(double) + 2 * sizeof(std::uint32_t) + sizeof(std::uint8_t));
    const std::size_t node = sizeof(std::pair<const std::uint64_t, CacheEntry>) + sizeof(void*);
    bytes += f_cache_.size() * node + f_cache_.bucket_count() * sizeof(void*);
    bytes += df_cache_.size() * node + df_cache_.bucket_count() * sizeof(void*);
    for (const auto& record : records_) {
        bytes += sizeof(IterationRecord);
        bytes += (record.c.size() + record.g.size()) * sizeof(double);
        bytes += record.columns.entry_count() * sizeof(ColumnEntry);
    }
    return bytes;
}

LazyDiagnostics LazyUpdater::diagnostics() const {
    LazyDiagnostics d;
    d.iteration = iteration();
    for (VertexId u = 0; u < graph_->vertex_count(); ++u) {
        if (!excluded_[u]) ++d.timestamp_histogram[timestamp_[u]];
    }
    d.f_cache_entries = f_cache_.size();
    d.df_cache_entries = df_cache_.size();
    d.column_entries = column_entries_;
    d.total_touched = total_touched_;
    d.total_skipped = total_skipped_;
    d.aux_bytes = aux_bytes();
    d.peak_aux_bytes = peak_aux_bytes_;
    return d;
}

}  // namespace quickim
