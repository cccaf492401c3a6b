// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N]... [--graph PATH]
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quickim/quickim.hpp"
#include "quickim/random.hpp"
#include "support/reference.hpp"

using namespace quickim;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(3);
    out << x;
    return out.str();
}

std::uint64_t seed_for(int criterion, int instance) { return stream_seed(0xacce97 + criterion, instance); }

InfluenceGraph small_random_graph(std::mt19937_64& rng, std::size_t n_lo, std::size_t n_hi, std::size_t m_hi) {
    const std::size_t n = testing::uniform_size(rng, n_lo, n_hi);
    const std::size_t m = testing::uniform_size(rng, 1, std::min(m_hi, n * (n - 1)));
    return random_graph(n, m, rng());
}

// 1. Sum of Pr(g^L) over all multi-graph worlds is one.
Outcome normalization() {
    std::mt19937_64 rng(seed_for(1, 0));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto g = small_random_graph(rng, 2, 5, 6);
        const std::size_t L = testing::uniform_size(rng, 1, 3);
        double total = 0.0;
        oracle::for_each_multiworld(g, L, [&](const oracle::MultiWorld&, double pr) { total += pr; });
        worst = std::max(worst, std::abs(total - 1.0));
    }
    return {worst <= 1e-12, "100 graphs (m <= 6, L <= 3), max |sum - 1| = " + fmt(worst)};
}

// 2. Closed-form walk and multi-walk probabilities against world enumeration.
Outcome walk_lemmas() {
    std::mt19937_64 rng(seed_for(2, 0));
    double worst = 0.0;
    std::size_t single = 0, multi = 0;
    for (int i = 0; i < 100; ++i) {
        const auto g = small_random_graph(rng, 2, 5, 6);
        const std::size_t L = 3;
        std::vector<oracle::Walk> walks;
        for (VertexId s = 0; s < g.vertex_count(); ++s) {
            auto from = oracle::enumerate_walks(g, s, L);
            walks.insert(walks.end(), from.begin(), from.end());
        }
        if (walks.empty()) continue;
        for (const auto& w : walks) {
            const oracle::Walk one[1] = {w};
            worst = std::max(worst, std::abs(oracle::walk_probability(g, w) -
                                             oracle::brute_force_embedding_probability(g, L, one)));
            ++single;
        }
        std::uniform_int_distribution<std::size_t> pick(0, walks.size() - 1);
        for (int s = 0; s < 10; ++s) {
            const std::size_t size = testing::uniform_size(rng, 2, 3);
            std::vector<oracle::Walk> subset;
            for (std::size_t j = 0; j < size; ++j) subset.push_back(walks[pick(rng)]);
            worst = std::max(worst, std::abs(oracle::multi_walk_probability(g, subset) -
                                             oracle::brute_force_embedding_probability(g, L, subset)));
            ++multi;
        }
    }
    return {worst <= 1e-10, std::to_string(single) + " single walks, " + std::to_string(multi) +
                                " walk sets on 100 graphs, max error = " + fmt(worst)};
}

// 3. Route agreement, score identities, the per-vertex gap bound and the vertex-removal bounds.
Outcome influence_identities() {
    std::mt19937_64 rng(seed_for(3, 0));
    const std::size_t L = 3;
    double route_error = 0.0, identity_error = 0.0;
    std::size_t routes = 0, gap_violations = 0, influence_gap_violations = 0, score_gap_violations = 0,
                excess_gap_violations = 0, removal_checks = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto g = small_random_graph(rng, 3, 8, 15);
        const std::size_t n = g.vertex_count();
        const auto report = oracle::exact_influence_report(g, L);
        for (VertexId u = 0; u < n; ++u) {
            const double excess = report.score(u) - report.influence_of(u);
            if (excess < -1e-12 || excess > report.vertex_gap_bound(u) + 1e-12) ++gap_violations;
            for (VertexId v = 0; v < n; ++v) {
                const auto walks = oracle::walks_between(g, u, v, L);
                if (walks.size() <= 20) {
                    route_error = std::max(route_error, std::abs(oracle::inclusion_exclusion(g, walks) -
                                                                 report.influence[u][v]));
                    ++routes;
                }
                const auto& x = report.embedded_counts[u][v];
                if (x.empty()) continue;
                double any = 0.0, weighted = 0.0;
                for (std::size_t k = 1; k < x.size(); ++k) {
                    any += x[k];
                    weighted += static_cast<double>(k) * x[k];
                }
                route_error = std::max(route_error, std::abs(any - report.influence[u][v]));
                identity_error = std::max(identity_error, std::abs(weighted - report.walk_score[u][v]));
            }
        }
        for (VertexId w = 0; w < n; ++w) {
            for (const auto& gap : oracle::vertex_removal_gap(g, w, L).gaps) {
                ++removal_checks;
                if (!gap.influence_gap_ok()) ++influence_gap_violations;
                if (!gap.score_gap_ok()) {
                    ++score_gap_violations;
                    if (gap.bound > 0.0) worst_ratio = std::max(worst_ratio, gap.score_gap / gap.bound);
                }
                if (!gap.excess_gap_ok()) ++excess_gap_violations;
            }
        }
    }
    const bool pass = route_error <= 1e-10 && identity_error <= 1e-10 && gap_violations == 0 &&
                      influence_gap_violations == 0 && score_gap_violations == 0;
    std::ostringstream detail;
    detail << "100 graphs (m <= 15, L = 3): route error " << fmt(route_error) << " over " << routes
           << " inclusion-exclusion pairs, identity error " << fmt(identity_error) << ", per-vertex gap violations "
           << gap_violations << ", removal checks " << removal_checks << " with influence-gap violations "
           << influence_gap_violations << ", score-gap violations " << score_gap_violations;
    if (score_gap_violations > 0) detail << " (worst gap/bound " << fmt(worst_ratio) << ")";
    detail << ", excess-gap violations " << excess_gap_violations;
    return {pass, detail.str()};
}

// 4. score_est against dense matrix powers and walk enumeration.
Outcome score_correctness() {
    std::mt19937_64 rng(seed_for(4, 0));
    double dense_error = 0.0, walk_error = 0.0;
    std::size_t graphs = 0;
    for (std::size_t L = 1; L <= 4; ++L) {
        for (int i = 0; i < 10; ++i) {
            const std::size_t n = testing::uniform_size(rng, 2, 100);
            const std::size_t m = testing::uniform_size(rng, 1, std::min<std::size_t>(n * (n - 1), 4 * n));
            const auto g = random_graph(n, m, rng());
            const auto s = score_est(g, L);
            const auto dense = testing::dense_hop_scores(g, L);
            for (std::size_t j = 1; j <= L; ++j)
                for (VertexId u = 0; u < n; ++u) dense_error = std::max(dense_error, std::abs(s.hop(j, u) - dense[j - 1][u]));
            ++graphs;
        }
        for (int i = 0; i < 5; ++i) {
            const std::size_t n = testing::uniform_size(rng, 2, 30);
            const auto g = random_graph(n, testing::uniform_size(rng, 1, std::min<std::size_t>(n * (n - 1), 2 * n)), rng());
            const auto s = score_est(g, L);
            for (VertexId u = 0; u < n; ++u)
                walk_error = std::max(walk_error, std::abs(s.total[u] - oracle::walk_score(g, u, L).total));
            ++graphs;
        }
    }
    return {dense_error <= 1e-10 && walk_error <= 1e-10,
            std::to_string(graphs) + " graphs (n <= 100, L = 1..4), dense error " + fmt(dense_error) +
                ", walk-enumeration error " + fmt(walk_error)};
}

struct UpdateRun {
    double residual_error = 0.0;
    double lazy_residual_error = 0.0;
    std::size_t sequence_mismatches = 0;
    std::size_t missed_maximisers = 0;
    std::size_t unsound_skips = 0;
    std::size_t monotonicity_violations = 0;
    std::size_t sign_violations = 0;
    std::size_t prefix_violations = 0;
    std::size_t steps = 0;
    std::size_t instances = 0;
};

// Shared by criteria 5 and 6.
const UpdateRun& update_run() {
    static const UpdateRun run = [] {
        UpdateRun r;
        std::mt19937_64 rng(seed_for(5, 0));
        const std::size_t L = 3;
        for (int i = 0; i < 200; ++i) {
            const std::size_t n = testing::uniform_size(rng, 2, 50);
            const std::size_t m = testing::uniform_size(rng, 1, std::min<std::size_t>(n * (n - 1), 4 * n));
            const auto g = random_graph(n, m, rng());
            const std::size_t k = std::min<std::size_t>(testing::uniform_size(rng, 1, 8), n);
            BasicUpdater basic(g, L);
            LazyUpdater lazy(g, L);
            bool diverged = false;
            for (std::size_t t = 0; t < k; ++t) {
                std::vector<double> before(n);
                for (VertexId u = 0; u < n; ++u) before[u] = lazy.fully_updated_score(u);
                double true_max = -1.0;
                for (VertexId u = 0; u < n; ++u)
                    if (!lazy.is_seed(u)) true_max = std::max(true_max, before[u]);

                const auto b = basic.step();
                const auto l = lazy.step();
                ++r.steps;
                if (b.seed != l.seed) diverged = true;
                if (before[l.seed] < true_max - 1e-12) ++r.missed_maximisers;

                const auto residual = score_est(testing::residual_graph(g, basic.seeds()), L);
                for (VertexId u = 0; u < n; ++u) {
                    if (basic.is_seed(u)) continue;
                    for (std::size_t j = 1; j <= L; ++j)
                        r.residual_error = std::max(r.residual_error, std::abs(basic.scores().hop(j, u) - residual.hop(j, u)));
                }
                for (double c : basic.last_coefficients()) r.sign_violations += c > 0.0;
                const auto& record = lazy.records().back();
                for (std::size_t x = 0; x < record.c.size(); ++x) {
                    r.sign_violations += record.c[x] > 0.0;
                    if (x > 0 && record.g[x] > record.g[x - 1]) ++r.prefix_violations;
                }

                double bound = -1.0;
                for (VertexId u = 0; u < n; ++u)
                    if (!lazy.is_seed(u) && lazy.timestamp(u) == t + 2) bound = std::max(bound, lazy.stale_score(u));
                for (VertexId u = 0; u < n; ++u) {
                    if (lazy.is_seed(u)) continue;
                    const double now = lazy.fully_updated_score(u);
                    if (now > before[u]) ++r.monotonicity_violations;
                    if (lazy.stale_score(u) < now) ++r.monotonicity_violations;
                    if (lazy.timestamp(u) <= t + 1 && now > bound + 1e-12) ++r.unsound_skips;
                }
            }
            r.sequence_mismatches += diverged;
            const auto residual = score_est(testing::residual_graph(g, basic.seeds()), L);
            for (VertexId u = 0; u < n; ++u) {
                if (lazy.is_seed(u)) continue;
                for (std::size_t j = 1; j <= L; ++j)
                    r.lazy_residual_error =
                        std::max(r.lazy_residual_error, std::abs(lazy.force_hop_score(j, u) - residual.hop(j, u)));
            }
            ++r.instances;
        }
        return r;
    }();
    return run;
}

// 5. Basic updates reproduce recomputation; lazy selection equals basic selection.
Outcome update_equivalence() {
    const auto& r = update_run();
    const bool pass = r.residual_error <= 1e-9 && r.lazy_residual_error <= 1e-9 && r.sequence_mismatches == 0 &&
                      r.missed_maximisers == 0 && r.unsound_skips == 0;
    std::ostringstream detail;
    detail << r.instances << " graphs (n <= 50, k <= 8, L = 3), " << r.steps << " steps: basic residual error "
           << fmt(r.residual_error) << ", lazy residual error " << fmt(r.lazy_residual_error)
           << ", seed-sequence mismatches " << r.sequence_mismatches << ", missed maximisers "
           << r.missed_maximisers << ", unsound skips " << r.unsound_skips;
    return {pass, detail.str()};
}

// 6. Score monotonicity and coefficient signs during criterion 5's runs.
Outcome monotonicity() {
    const auto& r = update_run();
    const bool pass = r.monotonicity_violations == 0 && r.sign_violations == 0 && r.prefix_violations == 0;
    return {pass, "score increases " + std::to_string(r.monotonicity_violations) + ", positive c " +
                      std::to_string(r.sign_violations) + ", increasing g " + std::to_string(r.prefix_violations) +
                      " over " + std::to_string(r.steps) + " steps"};
}

// 7. Monte-Carlo spread against exact enumeration.
Outcome mc_unbiased() {
    std::mt19937_64 rng(seed_for(7, 0));
    std::size_t outside = 0;
    double worst_z = 0.0;
    for (int i = 0; i < 50; ++i) {
        const auto g = small_random_graph(rng, 3, 10, 15);
        const std::size_t size = testing::uniform_size(rng, 1, std::min<std::size_t>(3, g.vertex_count()));
        std::vector<VertexId> seeds;
        for (std::size_t j = 0; j < size; ++j)
            seeds.push_back(static_cast<VertexId>(testing::uniform_size(rng, 0, g.vertex_count() - 1)));
        const auto estimate = mc_spread(g, seeds, 100000, rng(), 0);
        const double exact = oracle::exact_seed_influence(g, seeds);
        const double diff = std::abs(estimate.mean - exact);
        if (estimate.std_error > 0.0) worst_z = std::max(worst_z, diff / estimate.std_error);
        if (diff > 4.0 * estimate.std_error + 1e-12) ++outside;
    }
    const bool pass = outside == 0 && kDefaultSimulations == 10000;
    return {pass, "50 graphs (m <= 15), 1e5 simulations: outside 4 sigma " + std::to_string(outside) +
                      ", worst |z| = " + fmt(worst_z) + ", default simulations " + std::to_string(kDefaultSimulations)};
}

// 8. Seed quality on tiny graphs against exhaustive and exact-greedy optima.
Outcome quality() {
    std::mt19937_64 rng(seed_for(8, 0));
    const int instances = 200;
    int near_optimal = 0, near_greedy = 0;
    int near_optimal_by_model[2] = {0, 0}, near_greedy_by_model[2] = {0, 0};
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = testing::uniform_size(rng, 3, 12);
        const std::size_t m = testing::uniform_size(rng, 1, std::min<std::size_t>(18, n * (n - 1)));
        ProbabilityModel model;
        model.kind = (i % 2 == 0) ? ModelKind::TR : ModelKind::UN;
        model.rng_seed = rng();
        const auto g = assign_probabilities(random_graph(n, m, rng()), model);
        const auto table = testing::exact_pair_spread_table(g);
        double optimum = 0.0;
        for (VertexId a = 0; a < n; ++a)
            for (VertexId b = a + 1; b < n; ++b) optimum = std::max(optimum, table[a][b]);
        // exact greedy from the same table: best single, then best partner (smallest ids on ties)
        VertexId first = 0;
        for (VertexId a = 1; a < n; ++a)
            if (table[a][a] > table[first][first] + 1e-12) first = a;
        double greedy = -1.0;
        for (VertexId b = 0; b < n; ++b)
            if (b != first) greedy = std::max(greedy, table[first][b]);

        const auto selection = run_quickim(g, 2, 3);
        const double spread = table[selection.seeds[0]][selection.seeds[1]];
        const bool opt_ok = spread >= 0.9 * optimum - 1e-12;
        const bool greedy_ok = spread >= 0.98 * greedy - 1e-12;
        near_optimal += opt_ok;
        near_greedy += greedy_ok;
        near_optimal_by_model[i % 2] += opt_ok;
        near_greedy_by_model[i % 2] += greedy_ok;
    }
    const bool pass = near_optimal * 100 >= 95 * instances && near_greedy * 100 >= 90 * instances;
    std::ostringstream detail;
    detail << instances << " graphs (n <= 12, m <= 18, k = 2, TR p_t = 0.1 and UN p_u = 0.1 alternating): "
           << ">= 90% of optimum on " << near_optimal << " (TR " << near_optimal_by_model[0] << ", UN "
           << near_optimal_by_model[1] << "), within 2% of exact greedy on " << near_greedy << " (TR "
           << near_greedy_by_model[0] << ", UN " << near_greedy_by_model[1] << ")";
    return {pass, detail.str()};
}

// 9. QuickIM time and memory do not depend on the probability level.
Outcome robustness() {
    const auto g = power_law_graph(20000, 100000, seed_for(9, 0));
    const double grid[4] = {0.01, 0.05, 0.1, 0.2};
    const auto report = robustness_bench(g, ModelKind::UN, grid, 50, 3, 5);
    const double time_ratio = report.time_ratio.value_or(0.0);
    const double memory_ratio = report.memory_ratio.value_or(0.0);
    std::ostringstream detail;
    detail << "n = " << g.vertex_count() << ", m = " << g.edge_count() << ", k = 50, UN p_u in {0.01, 0.05, 0.1, 0.2}: ";
    for (const auto& row : report.rows) detail << "p=" << row.p << " " << fmt(row.seconds) << "s " << row.aux_bytes << "B; ";
    detail << "time ratio " << fmt(time_ratio) << ", memory ratio " << fmt(memory_ratio);
    return {time_ratio <= 2.0 && memory_ratio <= 1.5, detail.str()};
}

// 10. A multi-million-edge graph within time and memory budgets.
Outcome scale(const std::optional<std::string>& path) {
    const auto load_start = std::chrono::steady_clock::now();
    InfluenceGraph g;
    std::string source;
    if (path) {
        g = load_graph(*path);
        source = *path;
    } else {
        g = power_law_graph(400000, 4000000, seed_for(10, 0));
        source = "synthetic power-law graph";
    }
    if (g.probability_model() == "unassigned") g = assign_probabilities(g, {});
    const double load_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - load_start).count();
    const auto selection = run_quickim(g, 50, 3);
    const double ratio = static_cast<double>(selection.peak_aux_bytes) / static_cast<double>(g.csr_bytes());
    std::ostringstream detail;
    detail << source << " (n = " << g.vertex_count() << ", m = " << g.edge_count() << ", " << g.probability_model()
           << ", built in " << fmt(load_seconds) << "s): k = 50, L = 3 took " << fmt(selection.seconds)
           << "s, aux " << selection.peak_aux_bytes << "B = " << fmt(ratio) << "x CSR";
    return {selection.seconds < 600.0 && ratio < 4.0, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    std::optional<std::string> graph_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            selected.insert(std::atoi(argv[++i]));
        } else if (arg == "--graph" && i + 1 < argc) {
            graph_path = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--criterion N]... [--graph PATH]\n";
            return 2;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"probability-space normalization", normalization},
        {"walk-probability closed forms", walk_lemmas},
        {"influence identities and bounds", influence_identities},
        {"score_est correctness", score_correctness},
        {"incremental-update equivalence", update_equivalence},
        {"monotonicity and sign invariants", monotonicity},
        {"Monte-Carlo unbiasedness", mc_unbiased},
        {"result quality", quality},
        {"robustness to probability level", robustness},
        {"scale smoke test", [&] { return scale(graph_path); }},
    };

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("error: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s  %s: %s [%.1fs]\n", id, outcome.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        all = all && outcome.pass;
    }
    return all ? 0 : 1;
}
