#pragma once

// Disagreement measures between rule outputs.

#include <cstddef>
#include <vector>

#include "rulepick/core.hpp"

namespace rulepick {

/// One nonnegative weight per alternative id.
using AlternativeWeights = std::vector<double>;

/// Kendall-Tau with ties: each unordered pair costs 1 if the rankings order it
/// strictly and oppositely, 1/2 if either ranking ties it, 0 otherwise.
/// Both rankings must rank the same alternative set.
double kt_with_ties(const WeakRanking& r1, const WeakRanking& r2);

/// kt_with_ties with each pair's cost scaled by w[a] * w[b].
double weighted_kt(const WeakRanking& r1, const WeakRanking& r2, const AlternativeWeights& w);

/// Sum of w[a] * w[b] over unordered pairs: the weighted distance between a
/// strict ranking and its reverse.
double max_weighted_kt(const AlternativeWeights& w);

/// weighted_kt / max_weighted_kt, or 0 when the divisor vanishes.
double normalized_disagreement(const WeakRanking& r1, const WeakRanking& r2,
                               const AlternativeWeights& w);

/// |A xor B| / |A union B|. Inputs need not be sorted. Throws when both are empty.
double jaccard_dissimilarity(std::vector<AlternativeId> a, std::vector<AlternativeId> b);

/// The first k alternatives of r. A tie-group straddling the cut contributes
/// its smallest ids. Returned in ascending id order.
std::vector<AlternativeId> top_k(const WeakRanking& r, std::size_t k);

}  // namespace rulepick
