#include "quickim/select.hpp"

#include <algorithm>
#include <chrono>
#include <queue>

#include "quickim/error.hpp"
#include "quickim/parallel.hpp"
#include "quickim/random.hpp"

namespace quickim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_selection_args(const InfluenceGraph& graph, std::size_t k) {
    if (k == 0) throw DomainError("k must be at least 1");
    if (graph.vertex_count() == 0) throw DomainError("graph has no vertices");
}

/// Sampled worlds shared by every gain evaluation, plus the set each world activates from the
/// seeds chosen so far.
class WorldSample {
public:
    WorldSample(const InfluenceGraph& graph, std::size_t simulations, std::uint64_t rng_seed, unsigned threads)
        : graph_(graph),
          simulations_(simulations),
          rng_seed_(rng_seed),
          threads_(threads == 0 ? default_thread_count() : threads),
          words_((graph.vertex_count() + 63) / 64),
          active_(simulations * words_, 0) {}

    /// Total number of newly activated vertices over all worlds if `v` were added.
    std::uint64_t gain(VertexId v) { return run(v, false); }
    void commit(VertexId v) { run(v, true); }

private:
    bool live(std::size_t r, std::uint64_t edge, double p) const {
        return unit_interval(stream_seed(stream_seed(rng_seed_, r), edge)) < p;
    }

    std::uint64_t run(VertexId v, bool commit) {
        std::vector<std::uint64_t> partial(threads_, 0);
        parallel_chunks(simulations_, threads_, [&](unsigned worker, std::size_t begin, std::size_t end) {
            std::vector<std::uint32_t> mark(graph_.vertex_count(), 0);
            std::uint32_t stamp = 0;
            std::vector<VertexId> stack;
            std::uint64_t count = 0;
            for (std::size_t r = begin; r < end; ++r) {
                std::uint64_t* active = active_.data() + r * words_;
                auto is_active = [active](VertexId x) { return (active[x / 64] >> (x % 64)) & 1U; };
                if (is_active(v)) continue;
                ++stamp;
                mark[v] = stamp;
                stack.assign(1, v);
                while (!stack.empty()) {
                    const VertexId x = stack.back();
                    stack.pop_back();
                    ++count;
                    if (commit) active[x / 64] |= std::uint64_t{1} << (x % 64);
                    const std::uint64_t base = graph_.out_offset(x);
                    const auto arcs = graph_.out_arcs(x);
                    for (std::size_t i = 0; i < arcs.size(); ++i) {
                        const VertexId y = arcs[i].vertex;
                        if (mark[y] == stamp || is_active(y)) continue;
                        if (!live(r, base + i, arcs[i].probability)) continue;
                        mark[y] = stamp;
                        stack.push_back(y);
                    }
                }
            }
            partial[worker] = count;
        });
        std::uint64_t total = 0;
        for (std::uint64_t c : partial) total += c;
        return total;
    }

    const InfluenceGraph& graph_;
    std::size_t simulations_;
    std::uint64_t rng_seed_;
    unsigned threads_;
    std::size_t words_;
    std::vector<std::uint64_t> active_;
};

}  // namespace

SeedSelection run_quickim(const InfluenceGraph& graph, std::size_t k, std::size_t L, const QuickImOptions& options) {
    check_selection_args(graph, k);
    if (L == 0) throw DomainError("L must be at least 1");
    const auto start = Clock::now();
    SeedSelection result;
    result.config = {k, L, "quickim", std::nullopt, std::nullopt};
    const std::size_t rounds = std::min(k, graph.vertex_count());
    result.truncated = rounds < k;

    LazyUpdater updater(graph, L, options.threads);
    for (std::size_t t = 0; t < rounds; ++t) {
        const auto step_start = Clock::now();
        const auto step = updater.step();
        result.seeds.push_back(step.seed);
        result.labels.push_back(graph.label(step.seed));
        result.per_iteration.push_back(
            {step.seed, graph.label(step.seed), step.score, step.touched, step.skipped, seconds_since(step_start)});
    }
    result.seconds = seconds_since(start);
    result.peak_aux_bytes = updater.peak_aux_bytes();
    if (options.collect_diagnostics) result.diagnostics = updater.diagnostics();
    return result;
}

SeedSelection mc_greedy(const InfluenceGraph& graph, std::size_t k, std::size_t simulations,
                        std::uint64_t rng_seed, unsigned threads) {
    check_selection_args(graph, k);
    if (simulations == 0) throw DomainError("simulations must be at least 1");
    const auto start = Clock::now();
    const std::size_t n = graph.vertex_count();
    SeedSelection result;
    result.config = {k, 0, "mc-greedy", rng_seed, simulations};
    const std::size_t rounds = std::min(k, n);
    result.truncated = rounds < k;

    WorldSample sample(graph, simulations, rng_seed, threads);
    struct Candidate {
        std::uint64_t gain;
        VertexId vertex;
        std::size_t round;
    };
    auto worse = [](const Candidate& a, const Candidate& b) {
        return a.gain != b.gain ? a.gain < b.gain : a.vertex > b.vertex;
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> queue(worse);
    for (VertexId v = 0; v < n; ++v) queue.push({sample.gain(v), v, 0});

    auto step_start = Clock::now();
    std::size_t evaluations = 0;
    while (result.seeds.size() < rounds) {
        Candidate top = queue.top();
        queue.pop();
        if (top.round != result.seeds.size()) {
            top.gain = sample.gain(top.vertex);
            top.round = result.seeds.size();
            ++evaluations;
            queue.push(top);
            continue;
        }
        sample.commit(top.vertex);
        result.seeds.push_back(top.vertex);
        result.labels.push_back(graph.label(top.vertex));
        result.per_iteration.push_back({top.vertex, graph.label(top.vertex),
                                        static_cast<double>(top.gain) / static_cast<double>(simulations),
                                        evaluations, 0, seconds_since(step_start)});
        evaluations = 0;
        step_start = Clock::now();
    }
    result.seconds = seconds_since(start);
    result.peak_aux_bytes = simulations * ((n + 63) / 64) * sizeof(std::uint64_t);
    return result;
}

}  // namespace quickim
