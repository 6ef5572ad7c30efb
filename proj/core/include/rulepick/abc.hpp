#pragma once

// Aggregation by consistency: score every candidate rule by how much its
// outputs on the two halves of a random voter split disagree, then pick the
// rule with the least expected disagreement.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rulepick/core.hpp"
#include "rulepick/distance.hpp"
#include "rulepick/rules.hpp"

namespace rulepick {

/// Side tag (1 or 2) per voter.
struct Split {
    std::vector<std::uint8_t> side;

    std::size_t size() const noexcept { return side.size(); }
    std::size_t count(std::uint8_t s) const noexcept;
    friend bool operator==(const Split&, const Split&) = default;
};

/// Each voter independently on side 1 or 2 with probability 1/2.
Split random_split(std::size_t num_voters, std::uint64_t seed);
Split random_split(const Profile& p, std::uint64_t seed);
/// Split number `index` of the sequence generated from `seed`.
Split split_from_sequence(std::size_t num_voters, std::uint64_t seed, std::size_t index);
/// Split whose voter v sits on side 2 iff bit v of `mask` is set.
Split split_from_mask(std::size_t num_voters, std::uint64_t mask);

std::pair<Profile, Profile> side_profiles(const Profile& p, const Split& split);

/// w_a = (gamma^{m_a} - 1) / (gamma^{t_a / 2} - 1), where t_a counts ballots
/// ranking a and m_a is the smaller per-side count. 0 when m_a or t_a is 0.
AlternativeWeights alternative_weights(const Profile& p, const Split& split, double gamma = 2.0);

enum class Weighting { automatic, on, off };

struct DisagreementOptions {
    /// automatic: on for profiles containing partial ballots, off otherwise.
    Weighting weighting = Weighting::automatic;
    double gamma = 2.0;
    /// Divide by the weighted distance between reversed strict rankings.
    bool normalized = true;
    /// Leave splits with an empty side out of every average.
    bool skip_empty = false;
};

bool weighting_enabled(const DisagreementOptions& options, const Profile& p);

/// Weights used for one split: the formula weights when weighting is on,
/// otherwise 1 for every alternative ranked on both sides (or on the only
/// nonempty side when one side is empty) and 0 elsewhere.
AlternativeWeights split_weights(const Profile& p, const Split& split, const DisagreementOptions& options);

/// Disagreement between the rule's outputs on the two sides.
double split_disagreement(const Rule& rule, const Profile& p, const Split& split,
                          const DisagreementOptions& options = {});

enum class SplitMode {
    monte_carlo,    ///< n_splits seeded splits
    exhaustive,     ///< all 2^n assignments, n <= 20
    grouped_exact,  ///< exact expectation by counting voters per distinct ballot
};

std::string_view to_string(SplitMode mode);
SplitMode split_mode_by_name(std::string_view name);

struct AbcConfig {
    SplitMode mode = SplitMode::monte_carlo;
    std::size_t n_splits = 10;
    std::uint64_t seed = 0;
    DisagreementOptions options;
    /// Rules whose mean is within this of the minimum share the argmin.
    double tie_epsilon = 0.0;
    /// Worker threads; results do not depend on it.
    std::size_t jobs = 1;
};

struct Estimate {
    std::string label;
    double mean = 0.0;
    double sem = 0.0;
    /// Per-split values in split order (empty in grouped_exact mode).
    std::vector<double> values;
};

struct DisagreementReport {
    std::vector<Estimate> rules;
    SplitMode mode = SplitMode::monte_carlo;
    std::uint64_t seed = 0;
    std::size_t n_splits = 0;     ///< splits requested (monte_carlo)
    std::size_t evaluated = 0;    ///< splits (or split classes) actually averaged
    bool weighting = false;
    DisagreementOptions options;
    std::vector<std::string> notes;
};

/// Evaluates all rules on one common split set.
DisagreementReport evaluate_rules(std::span<const Rule> rules, const Profile& p, const AbcConfig& cfg);

/// Monte Carlo estimate for one rule.
Estimate estimate_disagreement(const Rule& rule, const Profile& p, std::size_t n_splits, std::uint64_t seed,
                               const DisagreementOptions& options = {});
/// Exact expectation over all 2^n splits. Throws ErrorKind::limit for n > 20.
double exact_disagreement(const Rule& rule, const Profile& p, const DisagreementOptions& options = {});
/// Exact expectation computed per distinct-ballot multiplicity vector.
double grouped_exact_disagreement(const Rule& rule, const Profile& p, const DisagreementOptions& options = {});

struct PickResult {
    std::vector<std::size_t> argmin;  ///< candidate indices, ascending
    std::size_t chosen = 0;
    DisagreementReport report;
};

PickResult pick_rule(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg);

// ------------------------------------------------------------- score data

/// Scores per item; index = item.
using ItemScores = std::vector<std::vector<double>>;

struct ScoreHalves {
    std::vector<std::vector<double>> side1;
    std::vector<std::vector<double>> side2;
};

/// Per item: equal random halves; one random score dropped when the count is odd.
ScoreHalves score_split(const ItemScores& items, std::uint64_t seed);

struct AggregatorPick {
    std::vector<ScoreAggregator> aggregators;
    std::vector<Estimate> estimates;
    std::vector<std::size_t> argmin;
    std::size_t chosen = 0;
    std::uint64_t seed = 0;
    std::size_t n_trials = 0;
};

AggregatorPick pick_aggregator(std::span<const ScoreAggregator> aggregators, const ItemScores& items,
                               std::size_t n_trials = 1000, std::uint64_t seed = 0, double tie_epsilon = 0.0);

// ---------------------------------------------------------------- helpers

/// Arithmetic mean computed from the exact sum, so it does not depend on the
/// order of the values.
double exact_mean(std::span<const double> values);
/// Standard error of the mean (0 for fewer than two values).
double standard_error(std::span<const double> values);

}  // namespace rulepick
