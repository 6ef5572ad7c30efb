#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rulepick/error.hpp"
#include "rulepick/rules.hpp"

using namespace rulepick;
using testutil::make_profile;

namespace {

std::vector<double> values(const ScoringVector& s) { return {s.values().begin(), s.values().end()}; }

void check_close(const std::vector<double>& got, const std::vector<double>& want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

// Kemeny cost of an order counted voter by voter.
std::int64_t direct_cost(const Profile& p, const std::vector<AlternativeId>& order) {
    std::vector<std::size_t> pos(p.num_alternatives());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::int64_t cost = 0;
    for (const auto& b : p.ballots()) {
        for (std::size_t i = 0; i < b.size(); ++i) {
            for (std::size_t j = i + 1; j < b.size(); ++j) cost += pos[b[i]] > pos[b[j]] ? 1 : 0;
        }
    }
    return cost;
}

// Log-likelihood of Plackett-Luce log-strengths, including the pairwise prior.
double pl_loglik(const Profile& p, const std::vector<double>& theta, double prior) {
    double ll = 0.0;
    for (const auto& b : p.ballots()) {
        for (std::size_t t = 0; t + 1 < b.size(); ++t) {
            double denom = 0.0;
            for (std::size_t u = t; u < b.size(); ++u) denom += std::exp(theta[b[u]]);
            ll += theta[b[t]] - std::log(denom);
        }
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
        for (std::size_t j = i + 1; j < theta.size(); ++j) {
            const double z = std::log(std::exp(theta[i]) + std::exp(theta[j]));
            ll += prior * (theta[i] - z) + prior * (theta[j] - z);
        }
    }
    return ll;
}

}  // namespace

TEST_CASE("scoring vector normalization") {
    check_close(values(ScoringVector::normalize({3, 2, 1, 0})), {1, 2.0 / 3, 1.0 / 3, 0});
    check_close(values(ScoringVector::normalize({5, 5, 1})), {1, 1, 0});
    CHECK_THROWS_AS(ScoringVector::normalize({1, 1, 1}), Error);
    CHECK_THROWS_AS(ScoringVector::normalize({0, 1}), Error);
    CHECK_THROWS_AS(ScoringVector::normalize({1}), Error);
    CHECK_THROWS_AS(ScoringVector::from_normalized({1, 0.2, 0.5, 0}), Error);
    CHECK_THROWS_AS(ScoringVector::from_normalized({0.9, 0}), Error);
    CHECK(ScoringVector::from_normalized({1, 0.25, 0}).to_string() == "(1,0.25,0)");
}

TEST_CASE("named vectors") {
    check_close(values(named_vector("plurality", 4)), {1, 0, 0, 0});
    check_close(values(named_vector("veto", 4)), {1, 1, 1, 0});
    check_close(values(named_vector("borda", 4)), {1, 2.0 / 3, 1.0 / 3, 0});
    check_close(values(named_vector("two_approval", 4)), {1, 1, 0, 0});
    check_close(values(named_vector("plurality_veto", 4)), {1, 0.5, 0.5, 0});
    check_close(named_raw_vector("f1_1991", 8), {10, 6, 4, 3, 2, 1, 0, 0});
    check_close(named_raw_vector("f1_2003", 9), {10, 8, 6, 5, 4, 3, 2, 1, 0});
    check_close(named_raw_vector("f1_2010", 11), {25, 18, 15, 12, 10, 8, 6, 4, 2, 1, 0});
    check_close(named_raw_vector("leximax", 3), {1e6, 1e3, 1});
    check_close(named_raw_vector("medal_count", 4), {1, 1, 1, 0});
    CHECK_THROWS_AS(named_vector("nope", 3), Error);
    CHECK_FALSE(is_named_vector("nope"));
}

TEST_CASE("reversal pairs plurality with veto and fixes borda") {
    for (std::size_t m = 2; m <= 7; ++m) {
        CHECK(named_vector("plurality", m).reversed() == named_vector("veto", m));
        check_close(values(named_vector("borda", m).reversed()), values(named_vector("borda", m)));
        check_close(values(named_vector("plurality_veto", m).reversed()), values(named_vector("plurality_veto", m)));
    }
}

TEST_CASE("positional weights on short ballots") {
    const PositionalRule plurality{"plurality", std::nullopt};
    const PositionalRule veto{"veto", std::nullopt};
    check_close(plurality.weights_for(2, 4), {1, 0});
    check_close(veto.weights_for(4, 4), {1, 1, 1, 0});
    check_close(veto.weights_for(3, 4), {1, 1, 0});
    const PositionalRule fixed{"", ScoringVector::from_normalized({1, 0.5, 0.25, 0})};
    check_close(fixed.weights_for(4, 6), {1, 0.5, 0.25, 0});
    check_close(fixed.weights_for(6, 6), {1, 0.5, 0.25, 0, 0, 0});
    check_close(fixed.weights_for(3, 6), {1, 1.0 / 3, 0});
}

TEST_CASE("positional outputs") {
    const Profile p = make_profile(3, {{2, StrictRanking{0, 1, 2}}, {2, StrictRanking{0, 2, 1}}, {2, StrictRanking{1, 2, 0}}});
    CHECK(apply_rule(Rule::positional("plurality"), p) == WeakRanking{{0}, {1}, {2}});
    CHECK(apply_rule(Rule::positional("veto"), p) == WeakRanking{{0, 1, 2}});
    CHECK(apply_rule(Rule::positional("borda"), p) == WeakRanking{{0}, {1}, {2}});
    CHECK(apply_rule(Rule::positional("plurality"), Profile(3, {})) == WeakRanking::all_tied(3));
}

TEST_CASE("positional totals on partial ballots accumulate per length") {
    const Profile p(3, {StrictRanking{0, 1}, StrictRanking{1, 2, 0}});
    const auto totals = positional_totals(PositionalRule{"borda", std::nullopt}, BallotLengthCounts(p));
    check_close(totals, {1.0, 1.0, 0.5});
}

TEST_CASE("leximax rejects counts it cannot order lexicographically") {
    std::vector<StrictRanking> ballots(1000, StrictRanking{0, 1, 2});
    const Profile p(3, ballots);
    CHECK_THROWS_AS(apply_rule(Rule::positional("leximax"), p), Error);
    const Profile small(3, {StrictRanking{0, 1, 2}, StrictRanking{1, 2, 0}, StrictRanking{1, 0}});
    CHECK(apply_rule(Rule::positional("leximax"), small) == WeakRanking{{1}, {0}, {2}});
}

TEST_CASE("ranking_from_totals chains ties within tolerance") {
    const std::vector<double> t{3.0, 1.0, 3.0 + 1e-12, 2.0};
    CHECK(ranking_from_totals(t, 1e-9) == WeakRanking{{0, 2}, {3}, {1}});
    CHECK(ranking_from_totals(t, 0.0) == WeakRanking{{2}, {0}, {3}, {1}});
}

TEST_CASE("rule lookup") {
    CHECK(rule_by_name("borda").label() == "borda");
    CHECK(rule_by_name("kemeny").label() == "kemeny");
    const Rule v = rule_by_name("vector:2,1,0");
    REQUIRE(v.as_positional());
    check_close(values(*v.as_positional()->fixed), {1, 0.5, 0});
    CHECK_THROWS_AS(rule_by_name("majority"), Error);
    CHECK_THROWS_AS(rule_by_name("vector:0,1"), Error);
    for (const auto& name : known_rule_names()) CHECK_NOTHROW(rule_by_name(name));
}

TEST_CASE("kemeny exact matches brute force and breaks ties lexicographically") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 60; ++t) {
        const std::size_t m = 2 + t % 5;
        const Profile p = testutil::random_profile(m, 1 + t % 7, rng, t % 3 == 0);
        std::vector<AlternativeId> best;
        std::int64_t best_cost = -1;
        for (const auto& order : testutil::all_orders(m)) {
            const auto c = direct_cost(p, order);
            if (best_cost < 0 || c < best_cost) {
                best_cost = c;
                best = order;
            }
        }
        const auto w = pairwise_counts(p);
        const StrictRanking got = kemeny_exact(w, m);
        CHECK(std::vector<AlternativeId>(got.order().begin(), got.order().end()) == best);
        CHECK(kemeny_cost(got, w, m) == best_cost);
    }
}

TEST_CASE("kemeny on a three-cycle costs 4") {
    const Profile p(3, {StrictRanking{0, 1, 2}, StrictRanking{1, 2, 0}, StrictRanking{2, 0, 1}});
    const auto w = pairwise_counts(p);
    CHECK(kemeny_exact(w, 3) == StrictRanking{0, 1, 2});
    CHECK(kemeny_cost(StrictRanking{0, 1, 2}, w, 3) == 4);
    CHECK(apply_rule(Rule::kemeny(), p) == WeakRanking{{0}, {1}, {2}});
}

TEST_CASE("kemeny local search ends at an insertion-move local optimum") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = 6;
        const Profile p = testutil::random_profile(m, 9, rng);
        const auto w = pairwise_counts(p);
        const StrictRanking r = kemeny_local_search(w, m, 5.0);
        std::vector<AlternativeId> order(r.order().begin(), r.order().end());
        const auto cost = direct_cost(p, order);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                auto moved = order;
                const AlternativeId a = moved[i];
                moved.erase(moved.begin() + static_cast<std::ptrdiff_t>(i));
                moved.insert(moved.begin() + static_cast<std::ptrdiff_t>(j), a);
                CHECK(direct_cost(p, moved) >= cost);
            }
        }
        const StrictRanking exact = kemeny_exact(w, m);
        CHECK(cost >= direct_cost(p, std::vector<AlternativeId>(exact.order().begin(), exact.order().end())));
    }
    const Profile big = testutil::random_profile(12, 15, rng);
    CHECK(apply_rule(Rule::kemeny(), big).is_strict());
}

TEST_CASE("plackett-luce fit is a stationary point of the penalized likelihood") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 5; ++t) {
        const Profile p = testutil::random_profile(4, 25, rng, t % 2 == 1);
        const PlackettLuceRule params;
        const auto fit = fit_plackett_luce(p, params);
        REQUIRE(fit.converged);
        std::vector<double> theta;
        double mean_log = 0.0;
        for (double g : fit.strengths) {
            theta.push_back(std::log(g));
            mean_log += std::log(g);
        }
        CHECK(std::abs(mean_log) < 1e-9);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            auto up = theta, down = theta;
            up[i] += 1e-5;
            down[i] -= 1e-5;
            const double grad = (pl_loglik(p, up, params.prior) - pl_loglik(p, down, params.prior)) / 2e-5;
            CHECK(std::abs(grad) < 1e-4);
        }
    }
}

TEST_CASE("plackett-luce recovers strengths and orders by them") {
    std::mt19937_64 rng(3);
    const std::vector<double> alpha{4.0, 2.0, 1.0};
    std::vector<StrictRanking> ballots;
    for (int v = 0; v < 20000; ++v) {
        std::vector<AlternativeId> rest{0, 1, 2}, order;
        while (!rest.empty()) {
            std::vector<double> w;
            for (auto a : rest) w.push_back(alpha[a]);
            std::discrete_distribution<std::size_t> d(w.begin(), w.end());
            const std::size_t i = d(rng);
            order.push_back(rest[i]);
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        }
        ballots.emplace_back(order);
    }
    const Profile p(3, ballots);
    const auto fit = fit_plackett_luce(p, {});
    CHECK(fit.strengths[0] / fit.strengths[1] == doctest::Approx(2.0).epsilon(0.06));
    CHECK(fit.strengths[1] / fit.strengths[2] == doctest::Approx(2.0).epsilon(0.06));
    CHECK(apply_rule(Rule::pl_mle(), p) == WeakRanking{{0}, {1}, {2}});
}

TEST_CASE("plackett-luce ties symmetric alternatives") {
    const Profile p(2, {StrictRanking{0, 1}, StrictRanking{1, 0}});
    CHECK(apply_rule(Rule::pl_mle(), p) == WeakRanking{{0, 1}});
}

TEST_CASE("irv eliminates from the bottom") {
    const Profile p = make_profile(3, {{4, StrictRanking{0, 1, 2}}, {3, StrictRanking{1, 2, 0}}, {2, StrictRanking{2, 1, 0}}});
    CHECK(irv(p) == WeakRanking{{1}, {0}, {2}});
    RuleDiagnostics diag;
    const Profile tied(3, {StrictRanking{0, 1, 2}, StrictRanking{1, 0, 2}});
    CHECK(irv(tied, &diag) == WeakRanking{{1}, {0}, {2}});
    CHECK_FALSE(diag.notes.empty());
    CHECK_THROWS_AS(irv(Profile(3, {StrictRanking{0, 1}})), Error);
}

TEST_CASE("trimmed borda drops one best and one worst score per alternative") {
    const Profile p = make_profile(3, {{1, StrictRanking{0, 1, 2}}, {1, StrictRanking{0, 2, 1}}, {1, StrictRanking{2, 1, 0}},
                                       {1, StrictRanking{1, 2, 0}}});
    // received: a {1,1,0,0} -> 1, b {0.5,0,0.5,1} -> 1, c {0,0.5,1,0.5} -> 1
    CHECK(trimmed_borda(p) == WeakRanking{{0, 1, 2}});
    RuleDiagnostics diag;
    trimmed_borda(Profile(3, {StrictRanking{0, 1, 2}}), &diag);
    CHECK_FALSE(diag.notes.empty());
}

TEST_CASE("score aggregators") {
    const std::vector<double> xs{4, 1, 2, 8};
    CHECK(aggregate_scores(ScoreAggregator::mean, xs) == 3.75);
    CHECK(aggregate_scores(ScoreAggregator::min, xs) == 1);
    CHECK(aggregate_scores(ScoreAggregator::max, xs) == 8);
    CHECK(aggregate_scores(ScoreAggregator::median, xs) == 3);
    CHECK(aggregate_scores(ScoreAggregator::geometric_mean, xs) == doctest::Approx(std::pow(64.0, 0.25)));
    CHECK(aggregate_scores(ScoreAggregator::trimmed_mean, xs) == 3);
    CHECK_THROWS_AS(aggregate_scores(ScoreAggregator::mean, std::vector<double>{}), Error);
    CHECK_THROWS_AS(aggregate_scores(ScoreAggregator::trimmed_mean, std::vector<double>{1, 2}), Error);
    CHECK_THROWS_AS(aggregate_scores(ScoreAggregator::geometric_mean, std::vector<double>{1, 0}), Error);
    CHECK(aggregator_by_name("median") == ScoreAggregator::median);
    CHECK_THROWS_AS(aggregator_by_name("mode"), Error);
    CHECK(scores_to_ranking(std::vector<double>{1, 3, 1}) == WeakRanking{{1}, {0, 2}});
}
