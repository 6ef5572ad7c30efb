#pragma once

// Generators and independent oracles shared by the unit tests.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "rulepick/core.hpp"

namespace testutil {

using rulepick::AlternativeId;
using rulepick::Profile;
using rulepick::StrictRanking;
using rulepick::WeakRanking;

inline StrictRanking random_strict(std::size_t m, std::mt19937_64& rng, std::size_t length = 0) {
    std::vector<AlternativeId> order(m);
    std::iota(order.begin(), order.end(), AlternativeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    if (length) order.resize(length);
    return StrictRanking(std::move(order));
}

inline WeakRanking random_weak(std::size_t m, std::mt19937_64& rng) {
    std::vector<AlternativeId> order(m);
    std::iota(order.begin(), order.end(), AlternativeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<AlternativeId>> groups;
    std::bernoulli_distribution cut(0.5);
    for (std::size_t i = 0; i < m; ++i) {
        if (groups.empty() || cut(rng)) groups.emplace_back();
        groups.back().push_back(order[i]);
    }
    return WeakRanking(std::move(groups));
}

inline Profile random_profile(std::size_t m, std::size_t n, std::mt19937_64& rng, bool partial = false) {
    std::vector<StrictRanking> ballots;
    std::uniform_int_distribution<std::size_t> len(std::min<std::size_t>(2, m), m);
    for (std::size_t v = 0; v < n; ++v) ballots.push_back(random_strict(m, rng, partial ? len(rng) : 0));
    return Profile(m, std::move(ballots));
}

inline Profile make_profile(std::size_t m, std::initializer_list<std::pair<std::size_t, StrictRanking>> groups) {
    std::vector<StrictRanking> ballots;
    for (const auto& [count, ballot] : groups) ballots.insert(ballots.end(), count, ballot);
    return Profile(m, std::move(ballots));
}

// Position of each alternative in a weak ranking, by linear search.
inline int level(const WeakRanking& r, AlternativeId a) {
    for (std::size_t g = 0; g < r.groups().size(); ++g) {
        for (AlternativeId x : r.groups()[g]) {
            if (x == a) return static_cast<int>(g);
        }
    }
    return -1;
}

// Kendall-Tau with ties written directly from the pair definition.
inline double kt_oracle(const WeakRanking& r1, const WeakRanking& r2, std::size_t m,
                        const std::vector<double>* w = nullptr) {
    double total = 0.0;
    for (AlternativeId a = 0; a < m; ++a) {
        for (AlternativeId b = a + 1; b < m; ++b) {
            const int d1 = level(r1, a) - level(r1, b);
            const int d2 = level(r2, a) - level(r2, b);
            double cost = 0.0;
            if (d1 == 0 || d2 == 0) cost = 0.5;
            else if ((d1 < 0) != (d2 < 0)) cost = 1.0;
            total += cost * (w ? (*w)[a] * (*w)[b] : 1.0);
        }
    }
    return total;
}

// All strict orders of {0..m-1} in lexicographic order.
inline std::vector<std::vector<AlternativeId>> all_orders(std::size_t m) {
    std::vector<AlternativeId> order(m);
    std::iota(order.begin(), order.end(), AlternativeId{0});
    std::vector<std::vector<AlternativeId>> out;
    do out.push_back(order);
    while (std::next_permutation(order.begin(), order.end()));
    return out;
}

}  // namespace testutil
