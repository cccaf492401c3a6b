#include "quickim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "quickim/error.hpp"
#include "quickim/parallel.hpp"
#include "quickim/random.hpp"
#include "quickim/select.hpp"

namespace quickim {

SpreadEstimate mc_spread(const InfluenceGraph& graph, std::span<const VertexId> seeds, std::size_t simulations,
                         std::uint64_t rng_seed, unsigned threads) {
    if (seeds.empty()) throw DomainError("seed set is empty");
    if (simulations == 0) throw DomainError("simulations must be at least 1");
    const std::size_t n = graph.vertex_count();
    std::vector<VertexId> unique(seeds.begin(), seeds.end());
    for (VertexId s : unique) {
        if (s >= n) throw DomainError("seed id " + std::to_string(s) + " out of range");
    }
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    if (threads == 0) threads = default_thread_count();
    std::vector<std::uint64_t> sum(threads, 0), sum_sq(threads, 0);
    parallel_chunks(simulations, threads, [&](unsigned worker, std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> active(n, 0);
        std::vector<VertexId> frontier, next;
        std::uint64_t local_sum = 0, local_sq = 0;
        for (std::size_t r = begin; r < end; ++r) {
            const auto stamp = static_cast<std::uint32_t>(r - begin + 1);
            std::mt19937_64 rng(stream_seed(rng_seed, r));
            frontier = unique;
            for (VertexId s : unique) active[s] = stamp;
            std::uint64_t count = unique.size();
            while (!frontier.empty()) {
                next.clear();
                for (VertexId u : frontier) {
                    for (const Arc& a : graph.out_arcs(u)) {
                        if (active[a.vertex] == stamp) continue;
                        if (unit_interval(rng()) < a.probability) {
                            active[a.vertex] = stamp;
                            next.push_back(a.vertex);
                            ++count;
                        }
                    }
                }
                frontier.swap(next);
            }
            local_sum += count;
            local_sq += count * count;
        }
        sum[worker] = local_sum;
        sum_sq[worker] = local_sq;
    });

    std::uint64_t total = 0, total_sq = 0;
    for (unsigned w = 0; w < threads; ++w) {
        total += sum[w];
        total_sq += sum_sq[w];
    }
    const double r = static_cast<double>(simulations);
    SpreadEstimate estimate;
    estimate.simulations = simulations;
    estimate.rng_seed = rng_seed;
    estimate.mean = static_cast<double>(total) / r;
    estimate.percent = n == 0 ? 0.0 : 100.0 * estimate.mean / static_cast<double>(n);
    if (simulations > 1) {
        const double variance =
            (static_cast<double>(total_sq) - r * estimate.mean * estimate.mean) / (r - 1.0);
        estimate.std_error = std::sqrt(std::max(variance, 0.0) / r);
    }
    return estimate;
}

std::vector<VertexId> resolve_seeds(const InfluenceGraph& graph, std::span<const Label> labels) {
    std::vector<VertexId> ids;
    ids.reserve(labels.size());
    for (Label label : labels) ids.push_back(graph.vertex_of(label));
    return ids;
}

RobustnessReport robustness_bench(const InfluenceGraph& graph, ModelKind model, std::span<const double> grid,
                                  std::size_t k, std::size_t L, std::size_t repetitions, std::uint64_t rng_seed) {
    if (model == ModelKind::WC) throw DomainError("robustness grid applies to TR or UN");
    if (repetitions == 0) throw DomainError("repetitions must be at least 1");
    RobustnessReport report;
    report.model = model;
    report.k = k;
    report.L = L;
    for (double p : grid) {
        ProbabilityModel pm;
        pm.kind = model;
        pm.p_t = p;
        pm.p_u = p;
        pm.rng_seed = rng_seed;
        pm.validate();
        const InfluenceGraph annotated = assign_probabilities(graph, pm);
        std::vector<double> times;
        std::size_t aux = 0;
        for (std::size_t i = 0; i < repetitions; ++i) {
            const SeedSelection selection = run_quickim(annotated, k, L);
            times.push_back(selection.seconds);
            aux = std::max(aux, selection.peak_aux_bytes);
        }
        std::sort(times.begin(), times.end());
        const std::size_t mid = times.size() / 2;
        const double median = times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
        report.rows.push_back({p, median, aux});
    }
    if (!report.rows.empty()) {
        auto [tmin, tmax] = std::minmax_element(report.rows.begin(), report.rows.end(),
                                                [](const auto& a, const auto& b) { return a.seconds < b.seconds; });
        auto [mmin, mmax] = std::minmax_element(report.rows.begin(), report.rows.end(),
                                                [](const auto& a, const auto& b) { return a.aux_bytes < b.aux_bytes; });
        report.time_ratio = tmin->seconds > 0.0 ? tmax->seconds / tmin->seconds : 1.0;
        report.memory_ratio = mmin->aux_bytes > 0
                                  ? static_cast<double>(mmax->aux_bytes) / static_cast<double>(mmin->aux_bytes)
                                  : 1.0;
    }
    return report;
}

std::string to_csv(const RobustnessReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "p,seconds,aux_bytes\n";
    for (const auto& row : report.rows) out << row.p << ',' << row.seconds << ',' << row.aux_bytes << '\n';
    return out.str();
}

}  // namespace quickim
