#include "rulepick/distance.hpp"

#include <algorithm>
#include <iterator>

#include "rulepick/error.hpp"

namespace rulepick {

namespace {

struct Domain {
    std::vector<AlternativeId> ids;
    std::vector<int> g1;
    std::vector<int> g2;
};

Domain shared_domain(const WeakRanking& r1, const WeakRanking& r2) {
    Domain d;
    d.ids = r1.alternatives();
    if (d.ids != r2.alternatives()) fail(ErrorKind::domain, "domain mismatch");
    const std::size_t bound = d.ids.empty() ? 0 : d.ids.back() + 1;
    d.g1 = r1.group_index(bound);
    d.g2 = r2.group_index(bound);
    return d;
}

// Cost of one pair in units of 1/2 so it stays integral.
inline int pair_half_units(int a1, int b1, int a2, int b2) {
    if (a1 == b1 || a2 == b2) return 1;
    return ((a1 < b1) != (a2 < b2)) ? 2 : 0;
}

}  // namespace

double kt_with_ties(const WeakRanking& r1, const WeakRanking& r2) {
    const Domain d = shared_domain(r1, r2);
    std::size_t half_units = 0;
    for (std::size_t i = 0; i < d.ids.size(); ++i) {
        const AlternativeId a = d.ids[i];
        for (std::size_t j = i + 1; j < d.ids.size(); ++j) {
            const AlternativeId b = d.ids[j];
            half_units += static_cast<std::size_t>(pair_half_units(d.g1[a], d.g1[b], d.g2[a], d.g2[b]));
        }
    }
    return 0.5 * static_cast<double>(half_units);
}

double weighted_kt(const WeakRanking& r1, const WeakRanking& r2, const AlternativeWeights& w) {
    const Domain d = shared_domain(r1, r2);
    if (!d.ids.empty() && w.size() <= d.ids.back()) fail(ErrorKind::domain, "domain mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < d.ids.size(); ++i) {
        const AlternativeId a = d.ids[i];
        if (w[a] == 0.0) continue;
        for (std::size_t j = i + 1; j < d.ids.size(); ++j) {
            const AlternativeId b = d.ids[j];
            const int units = pair_half_units(d.g1[a], d.g1[b], d.g2[a], d.g2[b]);
            if (units) total += 0.5 * units * (w[a] * w[b]);
        }
    }
    return total;
}

double max_weighted_kt(const AlternativeWeights& w) {
    // sum_{a<b} w_a w_b accumulated in the same pair order as weighted_kt.
    double total = 0.0;
    for (std::size_t a = 0; a < w.size(); ++a) {
        if (w[a] == 0.0) continue;
        for (std::size_t b = a + 1; b < w.size(); ++b) total += w[a] * w[b];
    }
    return total;
}

double normalized_disagreement(const WeakRanking& r1, const WeakRanking& r2,
                               const AlternativeWeights& w) {
    const double divisor = max_weighted_kt(w);
    if (divisor <= 0.0) return 0.0;
    return weighted_kt(r1, r2, w) / divisor;
}

double jaccard_dissimilarity(std::vector<AlternativeId> a, std::vector<AlternativeId> b) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (a.empty() && b.empty()) fail(ErrorKind::domain, "undefined for empty sets");
    std::vector<AlternativeId> sym, uni;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(sym));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    return static_cast<double>(sym.size()) / static_cast<double>(uni.size());
}

std::vector<AlternativeId> top_k(const WeakRanking& r, std::size_t k) {
    if (k > r.size()) fail(ErrorKind::domain, "k exceeds number of ranked alternatives");
    std::vector<AlternativeId> out;
    out.reserve(k);
    for (const auto& g : r.groups()) {
        if (out.size() >= k) break;
        const std::size_t take = std::min(g.size(), k - out.size());
        out.insert(out.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(take));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rulepick
