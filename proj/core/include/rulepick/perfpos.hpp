#pragma once

// Deciding whether some positional scoring rule makes the two sides of a
// split agree perfectly, and building instances of that problem.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rulepick/abc.hpp"
#include "rulepick/core.hpp"
#include "rulepick/rules.hpp"

namespace rulepick {

/// Ballots plus a side per voter. decide_perfpos needs full ballots;
/// decide_k_perfpos needs every ballot to have the same length k.
struct PerfPosInstance {
    Profile profile;
    Split split;
};

struct PerfPosAnswer {
    bool yes = false;
    std::optional<ScoringVector> witness;
    /// The order both sides produce under the witness.
    std::optional<StrictRanking> order;
    /// Largest strict score gap achieved for `order` (capped at 1).
    double margin = 0.0;
    /// Linear programs solved.
    std::size_t explored = 0;
};

/// Margins at or below this count as infeasible.
inline constexpr double kPerfPosMargin = 1e-9;

/// Per-side position counts over the first `positions` positions.
std::pair<PositionCounts, PositionCounts> side_position_counts(const Profile& p, const Split& split,
                                                               std::size_t positions);

/// Searches orders depth-first in id order; each prefix is kept only if a
/// vector can separate it with positive margin on both sides. Returns the
/// lexicographically smallest certifying order. Throws ErrorKind::limit when
/// m exceeds `enumeration_limit` and ErrorKind::domain for unequal sides.
PerfPosAnswer decide_k_perfpos(const PositionCounts& side1, const PositionCounts& side2,
                               std::size_t enumeration_limit = 8, std::size_t jobs = 1);
PerfPosAnswer decide_k_perfpos(const PerfPosInstance& inst, std::size_t enumeration_limit = 8,
                               std::size_t jobs = 1);
PerfPosAnswer decide_perfpos(const PerfPosInstance& inst, std::size_t enumeration_limit = 8, std::size_t jobs = 1);

/// Exact rational check that every pair of alternatives is ordered strictly
/// and identically by the totals of both sides.
bool verify_witness(const ScoringVector& s, const PositionCounts& side1, const PositionCounts& side2);
bool verify_witness(const ScoringVector& s, const PerfPosInstance& inst);

/// Completes every length-k ballot with its missing alternatives in ascending
/// id order, then 1-shuffles positions [k, m]. Each copy keeps its voter's side.
PerfPosInstance reduce_k_perfpos(const PerfPosInstance& partial);

/// Literals are +v for x_v and -v for not x_v, with v in [1, num_vars].
struct CnfFormula {
    std::size_t num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

/// Instance built from a 3-CNF formula; some vector separates it perfectly
/// iff the formula is satisfiable.
struct HardInstance {
    std::size_t k = 0;
    PositionCounts side1;
    PositionCounts side2;
    std::vector<std::string> names;
    std::size_t voters_per_side = 0;
};

HardInstance generate_hard_instance(const CnfFormula& formula);
/// The length-k ballots realizing a hard instance's counts.
PerfPosInstance hard_instance_ballots(const HardInstance& h);

}  // namespace rulepick
