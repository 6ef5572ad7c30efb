#include <doctest.h>

#include "helpers.hpp"
#include "rulepick/distance.hpp"
#include "rulepick/error.hpp"

using namespace rulepick;

TEST_CASE("kendall tau with ties on small cases") {
    const WeakRanking abc{{0}, {1}, {2}};
    CHECK(kt_with_ties(abc, abc) == 0.0);
    CHECK(kt_with_ties(abc, reverse(abc)) == 3.0);
    CHECK(kt_with_ties(abc, WeakRanking{{1}, {0}, {2}}) == 1.0);
    CHECK(kt_with_ties(abc, WeakRanking::all_tied(3)) == 1.5);
    CHECK(kt_with_ties(WeakRanking{{0, 1}, {2}}, WeakRanking{{0, 1}, {2}}) == 0.5);
    CHECK_THROWS_AS(kt_with_ties(abc, WeakRanking{{0}, {1}}), Error);
}

TEST_CASE("kendall tau agrees with the pair oracle") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const std::size_t m = 1 + t % 8;
        const auto r1 = testutil::random_weak(m, rng);
        const auto r2 = testutil::random_weak(m, rng);
        CHECK(kt_with_ties(r1, r2) == testutil::kt_oracle(r1, r2, m));
        std::vector<double> w(m);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& x : w) x = u(rng);
        CHECK(weighted_kt(r1, r2, w) == doctest::Approx(testutil::kt_oracle(r1, r2, m, &w)).epsilon(1e-12));
    }
}

TEST_CASE("normalized disagreement") {
    const WeakRanking abc{{0}, {1}, {2}};
    const std::vector<double> ones(3, 1.0);
    CHECK(max_weighted_kt(ones) == 3.0);
    CHECK(normalized_disagreement(abc, reverse(abc), ones) == 1.0);
    CHECK(normalized_disagreement(abc, WeakRanking{{1}, {0}, {2}}, ones) == doctest::Approx(1.0 / 3.0));
    const std::vector<double> zeros(3, 0.0);
    CHECK(normalized_disagreement(abc, reverse(abc), zeros) == 0.0);
    const std::vector<double> one_hot{1.0, 0.0, 0.0};
    CHECK(max_weighted_kt(one_hot) == 0.0);
}

TEST_CASE("jaccard dissimilarity") {
    CHECK(jaccard_dissimilarity({0, 1}, {1, 0}) == 0.0);
    CHECK(jaccard_dissimilarity({0, 1}, {2, 3}) == 1.0);
    CHECK(jaccard_dissimilarity({0, 1, 2}, {1, 2, 3}) == doctest::Approx(0.5));
    CHECK(jaccard_dissimilarity({}, {1}) == 1.0);
    CHECK_THROWS_AS(jaccard_dissimilarity({}, {}), Error);
}

TEST_CASE("top_k cuts through tie-groups by id") {
    const WeakRanking r{{3}, {2, 0, 4}, {1}};
    CHECK(top_k(r, 1) == std::vector<AlternativeId>{3});
    CHECK(top_k(r, 2) == std::vector<AlternativeId>{0, 3});
    CHECK(top_k(r, 3) == std::vector<AlternativeId>{0, 2, 3});
    CHECK(top_k(r, 5).size() == 5);
    CHECK_THROWS_AS(top_k(r, 6), Error);
}
