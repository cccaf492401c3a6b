#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "quickim/error.hpp"
#include "quickim/oracle.hpp"
#include "quickim/select.hpp"
#include "quickim/synthetic.hpp"
#include "support/reference.hpp"

using namespace quickim;

TEST_CASE("quickim picks the star centre") {
    const auto g = InfluenceGraph::from_edges(6, {{0, 1, 0.5}, {0, 2, 0.5}, {0, 3, 0.5}, {0, 4, 0.5}, {0, 5, 0.5}},
                                              {10, 11, 12, 13, 14, 15});
    const auto s = run_quickim(g, 1, 3);
    REQUIRE(s.seeds.size() == 1);
    CHECK(s.seeds[0] == 0);
    CHECK(s.labels[0] == 10);
    CHECK(s.per_iteration[0].score == doctest::Approx(2.5));
}

TEST_CASE("quickim on a chain") {
    const auto g = InfluenceGraph::from_edges(3, {{0, 1, 0.5}, {1, 2, 0.5}});
    const auto s = run_quickim(g, 2, 2);
    CHECK(s.seeds == std::vector<VertexId>{0, 1});
    CHECK(s.per_iteration[0].score == 0.75);
    CHECK(s.per_iteration[1].score == 0.5);
}

TEST_CASE("quickim fills by ascending id once scores are zero and truncates at n") {
    const auto g = InfluenceGraph::from_edges(5, {{3, 1, 0.5}});
    const auto s = run_quickim(g, 9, 3);
    CHECK(s.truncated);
    CHECK(s.seeds == std::vector<VertexId>{3, 0, 1, 2, 4});
    CHECK_THROWS_AS(run_quickim(g, 0, 3), DomainError);
    CHECK_THROWS_AS(run_quickim(g, 1, 0), DomainError);
}

TEST_CASE("quickim is deterministic and prefix consistent") {
    const auto g = assign_probabilities(power_law_graph(2000, 12000, 9), {});
    const auto a = run_quickim(g, 20, 3);
    const auto b = run_quickim(g, 20, 3);
    CHECK(a.seeds == b.seeds);
    const auto prefix = run_quickim(g, 7, 3);
    CHECK(std::equal(prefix.seeds.begin(), prefix.seeds.end(), a.seeds.begin()));
    auto sorted = a.seeds;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("quickim pairs are close to optimal on small random graphs") {
    std::mt19937_64 rng(7);
    int good = 0;
    const int instances = 30;
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = testing::uniform_size(rng, 4, 12);
        const std::size_t m = testing::uniform_size(rng, n, std::min<std::size_t>(18, n * (n - 1)));
        ProbabilityModel model;
        model.kind = ModelKind::TR;
        model.rng_seed = rng();
        const auto g = assign_probabilities(random_graph(n, m, rng()), model);
        const auto s = run_quickim(g, 2, 3);
        const auto table = testing::exact_pair_spread_table(g);
        const double spread = table[s.seeds[0]][s.seeds[1]];
        CHECK(std::abs(spread - oracle::exact_seed_influence(g, s.seeds)) <= 1e-10);
        if (spread >= 0.9 * testing::optimal_pair_spread(g)) ++good;
    }
    CHECK(good >= instances * 95 / 100);
}

TEST_CASE("mc_greedy basics") {
    const auto edge = InfluenceGraph::from_edges(2, {{0, 1, 0.3}});
    const auto one = mc_greedy(edge, 1, 10000, 5);
    CHECK(one.seeds == std::vector<VertexId>{0});
    CHECK(one.per_iteration[0].score == doctest::Approx(1.3).epsilon(0.03));

    const auto g = random_graph(6, 10, 3);
    const auto all = mc_greedy(g, 6, 200, 1);
    auto sorted = all.seeds;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<VertexId>{0, 1, 2, 3, 4, 5});
    CHECK(mc_greedy(g, 10, 100, 1).truncated);
    CHECK_THROWS_AS(mc_greedy(g, 1, 0, 1), DomainError);
}

TEST_CASE("mc_greedy is independent of the thread count") {
    const auto g = assign_probabilities(power_law_graph(300, 1500, 2), {});
    const auto a = mc_greedy(g, 5, 400, 17, 1);
    const auto b = mc_greedy(g, 5, 400, 17, 4);
    CHECK(a.seeds == b.seeds);
    for (std::size_t i = 0; i < a.per_iteration.size(); ++i) CHECK(a.per_iteration[i].score == b.per_iteration[i].score);
}

TEST_CASE("mc_greedy tracks exact greedy on small graphs") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 5; ++i) {
        const auto g = random_graph(8, 12, rng());
        const auto mc = mc_greedy(g, 2, 100000, 3, 0);
        const double mc_spread = oracle::exact_seed_influence(g, mc.seeds);
        const double exact = oracle::exact_seed_influence(g, testing::exact_greedy(g, 2));
        CHECK(mc_spread >= 0.98 * exact);
    }
}

TEST_CASE("exact marginal gains shrink along the greedy sequence") {
    const auto g = random_graph(7, 14, 5);
    const auto seeds = testing::exact_greedy(g, 5);
    double previous = 1e9;
    std::vector<VertexId> prefix;
    double value = 0.0;
    for (VertexId s : seeds) {
        prefix.push_back(s);
        const double next = oracle::exact_seed_influence(g, prefix);
        CHECK(next - value <= previous + 1e-12);
        previous = next - value;
        value = next;
    }
}
