#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rulepick/axioms.hpp"
#include "rulepick/optimize.hpp"

using namespace rulepick;

namespace {

bool monotone_normalized(const ScoringVector& s) {
    if (s.size() < 2 || s[0] != 1.0 || s[s.size() - 1] != 0.0) return false;
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        if (s[j] < s[j + 1]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("mean split disagreement matches evaluate_rules on the same splits") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 6; ++t) {
        const Profile p = testutil::random_profile(5, 20, rng, t % 2 == 0);
        AbcConfig cfg;
        cfg.n_splits = 12;
        cfg.seed = static_cast<std::uint64_t>(t);
        const std::vector<Rule> rules{Rule::positional("borda"), Rule::positional("veto")};
        const auto report = evaluate_rules(rules, p, cfg);
        const auto splits = split_sequence(p.num_voters(), 12, cfg.seed);
        CHECK(mean_split_disagreement(*rules[0].as_positional(), p, splits) == report.rules[0].mean);
        CHECK(mean_split_disagreement(*rules[1].as_positional(), p, splits) == report.rules[1].mean);
    }
}

TEST_CASE("vector length is the longest ballot") {
    CHECK(anneal_vector_length(Profile(6, {StrictRanking{0, 1, 2}, StrictRanking{4, 3}})) == 3);
    CHECK(anneal_vector_length(Profile(4, {StrictRanking{0, 1, 2, 3}})) == 4);
}

TEST_CASE("annealing dominates its starts and is reproducible") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 4; ++t) {
        const Profile p = testutil::random_profile(5, 24, rng, t % 2 == 1);
        const auto splits = split_sequence(p.num_voters(), 8, 100 + static_cast<std::uint64_t>(t));
        AnnealConfig cfg;
        cfg.steps = 120;
        cfg.seed = static_cast<std::uint64_t>(t);
        const auto result = anneal(p, splits, cfg);
        const std::size_t len = anneal_vector_length(p);
        for (const char* family : {"plurality", "veto", "borda", "two_approval", "plurality_veto"}) {
            const PositionalRule start{"", named_vector(family, len)};
            CHECK(result.objective <= mean_split_disagreement(start, p, splits));
        }
        CHECK(monotone_normalized(result.best));
        CHECK(result.objective == mean_split_disagreement(PositionalRule{"", result.best}, p, splits));
        CHECK(result.start_objectives.size() == 5);
        CHECK(result.trace.size() == 5 * cfg.steps);
        for (std::size_t i = 1; i < result.trace.size(); ++i) CHECK(result.trace[i].best <= result.trace[i - 1].best);

        const auto again = anneal(p, splits, cfg);
        CHECK(again.best == result.best);
        CHECK(again.objective == result.objective);
        REQUIRE(again.trace.size() == result.trace.size());
        for (std::size_t i = 0; i < again.trace.size(); ++i) {
            CHECK(again.trace[i].accepted == result.trace[i].accepted);
            CHECK(again.trace[i].best == result.trace[i].best);
        }
    }
}

TEST_CASE("annealing with explicit starts") {
    std::mt19937_64 rng(5);
    const Profile p = testutil::random_profile(4, 16, rng);
    const auto splits = split_sequence(16, 6, 2);
    AnnealConfig cfg;
    cfg.steps = 40;
    cfg.starts = {ScoringVector::from_normalized({1, 0.3, 0.3, 0})};
    const auto result = anneal(p, splits, cfg);
    CHECK(result.start_objectives.size() == 1);
    CHECK(result.objective <= result.start_objectives[0]);
    CHECK(result.trace.size() == 40);
}

TEST_CASE("on a shuffled profile every annealed vector behaves like plurality") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 3; ++t) {
        const Profile base = testutil::random_profile(4, 3, rng);
        const Profile p = shuffle_from(base, 2, 1);
        const auto splits = split_sequence(p.num_voters(), 4, static_cast<std::uint64_t>(t));
        AnnealConfig cfg;
        cfg.steps = 25;
        const auto result = anneal(p, splits, cfg);
        for (const auto& s : splits) {
            const auto [a, b] = side_profiles(p, s);
            CHECK(apply_positional(result.best, a) == apply_positional(named_vector("plurality", 4), a));
            CHECK(apply_positional(result.best, b) == apply_positional(named_vector("plurality", 4), b));
        }
    }
}
