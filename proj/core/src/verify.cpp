#include "quickim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quickim/error.hpp"
#include "quickim/score.hpp"
#include "quickim/update.hpp"

namespace quickim {

namespace {

constexpr double kOracleTolerance = 1e-10;
constexpr double kUpdateTolerance = 1e-9;
constexpr std::size_t kMaxWalkChecks = 2000;

CheckResult named(std::string name) {
    CheckResult check;
    check.name = std::move(name);
    return check;
}

void record(CheckResult& check, double error, double tolerance) {
    ++check.cases;
    check.max_error = std::max(check.max_error, error);
    if (!(error <= tolerance)) ++check.violations;
}

void record_bool(CheckResult& check, bool ok) {
    ++check.cases;
    if (!ok) ++check.violations;
}

CheckResult finish(CheckResult check) {
    if (check.status != CheckStatus::Skipped) check.status = check.violations == 0 ? CheckStatus::Pass : CheckStatus::Fail;
    return check;
}

CheckResult skipped(std::string name, std::string why) {
    CheckResult check;
    check.name = std::move(name);
    check.status = CheckStatus::Skipped;
    check.detail = std::move(why);
    return check;
}

bool multiworld_within_guard(const InfluenceGraph& graph, std::size_t L, const oracle::Limits& limits) {
    std::uint64_t combos = 1;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        if (combos > limits.max_multiworlds / (L + 1)) return false;
        combos *= L + 1;
    }
    return true;
}

}  // namespace

std::string to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skipped: return "skipped";
    }
    return "unknown";
}

bool VerificationReport::pass() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

VerificationReport verify_graph(const InfluenceGraph& graph, std::size_t L, const oracle::Limits& limits) {
    if (L == 0) throw DomainError("L must be at least 1");
    if (graph.edge_count() > limits.max_base_edges) {
        throw CapacityError("graph has " + std::to_string(graph.edge_count()) +
                            " edges; exact verification enumerates 2^m worlds and allows at most " +
                            std::to_string(limits.max_base_edges) + " (try a smaller graph)");
    }
    const std::size_t n = graph.vertex_count();
    VerificationReport report;
    report.L = L;
    report.influence = oracle::exact_influence_report(graph, L, limits);
    const auto& inf = report.influence;

    std::vector<oracle::Walk> walks;
    for (VertexId s = 0; s < n; ++s) {
        auto from = oracle::enumerate_walks(graph, s, L, limits);
        walks.insert(walks.end(), from.begin(), from.end());
    }

    if (multiworld_within_guard(graph, L, limits)) {
        CheckResult norm = named("world_normalization");
        double total = 0.0;
        oracle::for_each_multiworld(graph, L, [&](const oracle::MultiWorld&, double pr) { total += pr; }, limits);
        record(norm, std::abs(total - 1.0), 1e-12);
        report.checks.push_back(finish(norm));

        CheckResult single = named("walk_probability");
        CheckResult multi = named("multi_walk_probability");
        const std::size_t count = std::min(walks.size(), kMaxWalkChecks);
        for (std::size_t i = 0; i < count; ++i) {
            const oracle::Walk one[1] = {walks[i]};
            record(single, std::abs(oracle::walk_probability(graph, walks[i]) -
                                    oracle::brute_force_embedding_probability(graph, L, one, limits)),
                   kOracleTolerance);
            if (i + 1 < count) {
                const oracle::Walk two[2] = {walks[i], walks[walks.size() - 1 - i]};
                record(multi, std::abs(oracle::multi_walk_probability(graph, two) -
                                       oracle::brute_force_embedding_probability(graph, L, two, limits)),
                       kOracleTolerance);
            }
        }
        report.checks.push_back(finish(single));
        report.checks.push_back(finish(multi));
    } else {
        const std::string why = "(L+1)^m exceeds the multi-world enumeration guard";
        report.checks.push_back(skipped("world_normalization", why));
        report.checks.push_back(skipped("walk_probability", why));
        report.checks.push_back(skipped("multi_walk_probability", why));
    }

    CheckResult routes = named("pair_influence_routes");
    CheckResult identities = named("embedded_count_identities");
    CheckResult pair_gap = named("pair_gap_bound");
    CheckResult dominance = named("influence_score_dominance");
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = 0; v < n; ++v) {
            const auto between = oracle::walks_between(graph, u, v, L, limits);
            if (between.size() <= limits.max_walk_set) {
                record(routes, std::abs(oracle::inclusion_exclusion(graph, between, limits) - inf.influence[u][v]),
                       kOracleTolerance);
            }
            const auto& x = inf.embedded_counts[u][v];
            if (!x.empty()) {
                double any = 0.0, weighted = 0.0;
                for (std::size_t i = 1; i < x.size(); ++i) {
                    any += x[i];
                    weighted += static_cast<double>(i) * x[i];
                }
                record(routes, std::abs(any - inf.influence[u][v]), kOracleTolerance);
                record(identities, std::abs(weighted - inf.walk_score[u][v]), kOracleTolerance);
            }
            const double gap = inf.gap(u, v);
            record_bool(pair_gap, gap >= -kOracleTolerance && gap <= inf.pair_gap_bound(u, v) + kOracleTolerance);
            const double h = static_cast<double>(inf.walk_count[u][v]);
            record_bool(dominance, inf.influence[u][v] <= inf.walk_score[u][v] + kOracleTolerance &&
                                       inf.walk_score[u][v] <= h * inf.influence[u][v] + kOracleTolerance);
        }
    }
    report.checks.push_back(finish(routes));
    report.checks.push_back(finish(identities));
    report.checks.push_back(finish(pair_gap));
    report.checks.push_back(finish(dominance));

    CheckResult vertex_gap = named("vertex_gap_bound");
    for (VertexId u = 0; u < n; ++u) {
        const double excess = inf.score(u) - inf.influence_of(u);
        record_bool(vertex_gap, excess >= -kOracleTolerance && excess <= inf.vertex_gap_bound(u) + kOracleTolerance);
    }
    report.checks.push_back(finish(vertex_gap));

    CheckResult removal_influence = named("removal_influence_gap");
    CheckResult removal_excess = named("removal_excess_gap");
    CheckResult removal_literal = named("removal_score_gap_literal");
    for (VertexId w = 0; w < n; ++w) {
        for (const auto& gap : oracle::vertex_removal_gap(graph, w, L, limits).gaps) {
            record_bool(removal_influence, gap.influence_gap_ok());
            record_bool(removal_excess, gap.excess_gap_ok());
            record_bool(removal_literal, gap.score_gap_ok());
            removal_literal.max_error = std::max(removal_literal.max_error, gap.score_gap - gap.bound);
        }
    }
    removal_literal.detail = "|score(G1) - score(G2)| <= p_m^3 h 2^h; the score gap equals W_G2(u,w)";
    removal_excess.detail = "|(score - I)(G1) - (score - I)(G2)| <= p_m^3 h 2^h";
    report.checks.push_back(finish(removal_influence));
    report.checks.push_back(finish(removal_excess));
    report.informational.push_back(finish(removal_literal));

    CheckResult scores = named("score_est_vs_walks");
    const auto est = score_est(graph, L);
    for (VertexId u = 0; u < n; ++u) record(scores, std::abs(est.total[u] - inf.score(u)), kOracleTolerance);
    report.checks.push_back(finish(scores));

    CheckResult recompute = named("update_recompute_equivalence");
    CheckResult agreement = named("basic_lazy_seed_agreement");
    if (n > 0) {
        BasicUpdater basic(graph, L);
        LazyUpdater lazy(graph, L);
        std::vector<std::uint8_t> is_seed(n, 0);
        for (std::size_t t = 0; t < n; ++t) {
            const auto b = basic.step();
            const auto l = lazy.step();
            record_bool(agreement, b.seed == l.seed);
            is_seed[b.seed] = 1;
            const auto residual = score_est(graph.without_edges([&](const Edge& e) { return is_seed[e.source] != 0; }), L);
            for (VertexId u = 0; u < n; ++u) {
                if (is_seed[u]) continue;
                for (std::size_t j = 1; j <= L; ++j) {
                    record(recompute, std::abs(basic.scores().hop(j, u) - residual.hop(j, u)), kUpdateTolerance);
                    record(recompute, std::abs(lazy.force_hop_score(j, u) - residual.hop(j, u)), kUpdateTolerance);
                }
            }
            if (b.seed != l.seed) break;
        }
    }
    report.checks.push_back(finish(recompute));
    report.checks.push_back(finish(agreement));
    return report;
}

}  // namespace quickim
