#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "helpers.hpp"
#include "rulepick/data.hpp"
#include "rulepick/error.hpp"

using namespace rulepick;

namespace {

std::string fixture(const std::string& name) { return std::string(RULEPICK_FIXTURES) + "/" + name; }

std::map<std::vector<AlternativeId>, double> frequencies(const Profile& p) {
    std::map<std::vector<AlternativeId>, double> out;
    for (const auto& b : p.ballots()) out[{b.order().begin(), b.order().end()}] += 1.0 / p.num_voters();
    return out;
}

DistributionSpec spec_of(Distribution kind, std::size_t m, std::size_t n) {
    DistributionSpec s;
    s.kind = kind;
    s.m = m;
    s.n = n;
    return s;
}

// Each prefix of a single-peaked order on the axis 0..m-1 covers a contiguous interval.
bool single_peaked(const StrictRanking& r) {
    std::size_t lo = r[0], hi = r[0];
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (r[i] + 1 == lo) lo = r[i];
        else if (r[i] == hi + 1) hi = r[i];
        else return false;
    }
    return true;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::domain;
}

}  // namespace

TEST_CASE("sampling is deterministic per seed") {
    for (auto kind : {Distribution::mallows, Distribution::plackett_luce, Distribution::impartial_culture,
                      Distribution::urn, Distribution::single_peaked}) {
        auto s = spec_of(kind, 6, 40);
        CHECK(sample_profile(s, 3) == sample_profile(s, 3));
        CHECK_FALSE(sample_profile(s, 3) == sample_profile(s, 4));
        CHECK(sample_profile(s, 3).is_full());
        CHECK(distribution_by_name(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(distribution_by_name("gaussian"), Error);
}

TEST_CASE("mallows center probability matches the closed-form normalizer") {
    auto s = spec_of(Distribution::mallows, 4, 100000);
    s.phi = 0.4;
    const Profile p = sample_profile(s, 11);
    double z = 1.0;
    for (int j = 1; j <= 4; ++j) {
        double row = 0.0;
        for (int i = 0; i < j; ++i) row += std::pow(0.4, i);
        z *= row;
    }
    const double expected = 1.0 / z;
    const double se = std::sqrt(expected * (1 - expected) / 100000.0);
    CHECK(std::abs(frequencies(p)[{0, 1, 2, 3}] - expected) < 3 * se);

    // Every order at KT distance d has probability phi^d / z.
    const auto f = frequencies(p);
    CHECK(std::abs(f.at({1, 0, 2, 3}) - 0.4 / z) < 0.01);
    CHECK(std::abs(f.at({3, 2, 1, 0}) - std::pow(0.4, 6) / z) < 0.005);

    auto tight = spec_of(Distribution::mallows, 5, 200);
    tight.phi = 1e-6;
    tight.center = StrictRanking{4, 2, 0, 1, 3};
    const Profile concentrated = sample_profile(tight, 2);
    for (const auto& b : concentrated.ballots()) CHECK(b == StrictRanking{4, 2, 0, 1, 3});
    CHECK(ground_truth(tight) == StrictRanking{4, 2, 0, 1, 3});
}

TEST_CASE("impartial culture is uniform") {
    const auto f = frequencies(sample_profile(spec_of(Distribution::impartial_culture, 3, 60000), 5));
    CHECK(f.size() == 6);
    for (const auto& [order, q] : f) CHECK(std::abs(q - 1.0 / 6) < 0.01);
}

TEST_CASE("plackett-luce order probabilities") {
    auto s = spec_of(Distribution::plackett_luce, 3, 60000);
    s.alpha = {3.0, 2.0, 1.0};
    const auto f = frequencies(sample_profile(s, 6));
    for (const auto& order : testutil::all_orders(3)) {
        double prob = 1.0, rest = 6.0;
        for (std::size_t i = 0; i < 2; ++i) {
            prob *= s.alpha[order[i]] / rest;
            rest -= s.alpha[order[i]];
        }
        CHECK(std::abs(f.at(order) - prob) < 0.01);
    }
    const auto alpha = default_pl_strengths(6);
    CHECK(alpha[0] == doctest::Approx(std::exp(2.5)));
    CHECK(alpha[5] == doctest::Approx(1.0));
    auto d = spec_of(Distribution::plackett_luce, 6, 10000);
    const Profile p = sample_profile(d, 7);
    double top0 = 0.0, sum = 0.0;
    for (double a : alpha) sum += a;
    for (const auto& b : p.ballots()) top0 += b[0] == 0;
    CHECK(std::abs(top0 / 10000 - alpha[0] / sum) < 0.02);
    CHECK(ground_truth(d) == StrictRanking{0, 1, 2, 3, 4, 5});
    CHECK_THROWS_AS(ground_truth(spec_of(Distribution::urn, 3, 3)), Error);
}

TEST_CASE("single-peaked orders are uniform over the single-peaked set") {
    const Profile p = sample_profile(spec_of(Distribution::single_peaked, 4, 40000), 8);
    for (const auto& b : p.ballots()) CHECK(single_peaked(b));
    const auto f = frequencies(p);
    CHECK(f.size() == 8);
    for (const auto& [order, q] : f) CHECK(std::abs(q - 1.0 / 8) < 0.012);
}

TEST_CASE("urn") {
    auto s = spec_of(Distribution::urn, 4, 3000);
    s.urn_alpha = 0.0;
    const auto f = frequencies(sample_profile(s, 1));
    for (const auto& [order, q] : f) CHECK(std::abs(q - 1.0 / 24) < 0.02);
    s.urn_alpha = 1e9;
    s.n = 50;
    const Profile copies = sample_profile(s, 2);
    CHECK(frequencies(copies).size() <= 3);
}

TEST_CASE("balanced partial assignment") {
    const Profile full = sample_profile(spec_of(Distribution::impartial_culture, 100, 100), 3);
    const Profile partial = assign_partial(full, 10, 10, 4);
    CHECK(partial.num_voters() == 100);
    std::vector<int> coverage(100, 0);
    for (std::size_t v = 0; v < 100; ++v) {
        const auto& b = partial[v];
        REQUIRE(b.size() == 10);
        for (auto a : b.order()) ++coverage[a];
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            CHECK(rank_of(WeakRanking::from_strict(full[v]), b[i]) < rank_of(WeakRanking::from_strict(full[v]), b[i + 1]));
        }
    }
    for (int c : coverage) CHECK(c == 10);

    const Profile small = sample_profile(spec_of(Distribution::impartial_culture, 5, 5), 1);
    const Profile matching = assign_partial(small, 1, 1, 2);
    std::set<AlternativeId> seen;
    for (const auto& b : matching.ballots()) seen.insert(b[0]);
    CHECK(seen.size() == 5);
    CHECK(kind_of([&] { assign_partial(small, 2, 3, 0); }) == ErrorKind::config);

    auto s = spec_of(Distribution::mallows, 20, 30);
    s.ballot_length = 4;
    s.coverage = 6;
    const Profile sp = sample_profile(s, 9);
    CHECK(sp == sample_profile(s, 9));
    for (const auto& b : sp.ballots()) CHECK(b.size() == 4);
    s.coverage = 5;
    CHECK(kind_of([&] { sample_profile(s, 9); }) == ErrorKind::config);
}

TEST_CASE("preflib") {
    const auto soc = parse_preflib(read_text(fixture("small.soc")));
    CHECK(soc.profile.num_alternatives() == 3);
    CHECK(soc.profile.num_voters() == 3);
    CHECK(soc.profile[2] == StrictRanking{2, 1, 0});
    CHECK(soc.names == std::vector<std::string>{"red", "green", "blue"});

    const auto soi = parse_preflib(read_text(fixture("small.soi")));
    CHECK(soi.profile.num_alternatives() == 4);
    CHECK(soi.profile.num_voters() == 6);
    CHECK(soi.profile[0] == StrictRanking{0, 1});
    CHECK(load_profile(fixture("small.soi")).profile == soi.profile);

    CHECK(kind_of([&] { parse_preflib(read_text(fixture("ties.toc"))); }) == ErrorKind::input);
    const auto weak = parse_preflib_weak(read_text(fixture("ties.toc")));
    CHECK(weak.ballots.size() == 3);
    CHECK(weak.ballots[0] == WeakRanking{{0, 1}, {2}});

    const auto bare = parse_preflib("2: 1,2,3\n1: 3,2,1\n");
    CHECK(bare.profile.num_alternatives() == 3);
    CHECK(bare.profile.num_voters() == 3);
    CHECK(kind_of([] { parse_preflib("# NUMBER ALTERNATIVES: 3\n1: 1,2\n", PreflibFormat::soc); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_preflib("# NUMBER ALTERNATIVES: 2\n1: 1,3\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_preflib("1 1,2\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_preflib("x: 1,2\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_preflib("1: 1,1\n"); }) == ErrorKind::input);
    try {
        parse_preflib("1: 1,2\n1: 2,x\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("review scores") {
    const auto t = parse_scores_csv(read_text(fixture("reviews.csv")), 6);
    CHECK(t.items == std::vector<std::string>{"p1", "p2", "p3"});
    CHECK(t.dropped == std::vector<std::string>{"p4"});
    CHECK(t.scores[2].size() == 7);
    CHECK(parse_scores_csv("a,r1,1\na,r2,2\na,r3,3\n").scores[0] == std::vector<double>{1, 2, 3});
    CHECK(parse_scores_csv("").items.empty());
    CHECK(kind_of([] { parse_scores_csv("a,r1,x\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_scores_csv("a,r1,1\na,r1,2\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_scores_csv("a,r1\n"); }) == ErrorKind::input);
}

TEST_CASE("medal tables") {
    const auto medals = parse_medals_csv(read_text(fixture("medals.csv")));
    CHECK(medals.profile.num_voters() == 3);
    REQUIRE(medals.names.size() == 7);
    CHECK(medals.names[medals.profile[1][0]] == "KEN");
    CHECK(medals.names[medals.profile[1][1]] == "ETH");
    for (const auto& b : medals.profile.ballots()) CHECK(b.size() == 3);
    CHECK(kind_of([] { parse_medals_csv("e,1,A\ne,1,B\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_medals_csv("e,1,A\ne,2,A\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_medals_csv("e,0,A\n"); }) == ErrorKind::input);
}

TEST_CASE("profile json") {
    const auto p = parse_profile_json(read_text(fixture("three_groups_k2.json")));
    CHECK(p.profile.num_voters() == 6);
    CHECK(p.names == std::vector<std::string>{"a", "b", "c"});
    CHECK(parse_profile_json(profile_to_json(p)).profile == p.profile);
    CHECK(load_profile(fixture("three_groups_k2.json")).profile == p.profile);

    const auto sided = parse_sided_json(read_text(fixture("perfpos_yes.json")));
    CHECK(sided.split.side == std::vector<std::uint8_t>{1, 1, 1, 2, 2, 2});
    const auto again = parse_sided_json(sided_to_json(sided));
    CHECK(again.profile.profile == sided.profile.profile);
    CHECK(again.split == sided.split);

    CHECK(kind_of([] { parse_profile_json("{"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_profile_json(R"({"m": 2})"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_profile_json(R"({"m": 2, "ballots": [[0, 0]]})"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_profile_json(R"({"m": 2, "ballots": [[0, 2]]})"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_sided_json(R"({"m": 2, "ballots": [[0, 1]], "sides": [3]})"); }) == ErrorKind::input);
    CHECK(kind_of([] { parse_sided_json(R"({"m": 2, "ballots": [[0, 1]]})"); }) == ErrorKind::input);
    CHECK(kind_of([] { read_text("/nonexistent/file.json"); }) == ErrorKind::input);
}
