#pragma once

// Candidate aggregation rules: positional scoring rules, Kemeny, the
// Plackett-Luce MLE, IRV as a welfare function, Trimmed Borda, and the
// score aggregators used on cardinal review data.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rulepick/core.hpp"

namespace rulepick {

/// A positional score vector in normalized form 1 = s_1 >= ... >= s_L = 0.
class ScoringVector {
public:
    /// Affinely maps a non-increasing raw vector onto [1, ..., 0].
    /// Throws for constant, increasing, or too-short input.
    static ScoringVector normalize(std::span<const double> raw);
    static ScoringVector normalize(std::initializer_list<double> raw) {
        return normalize(std::span<const double>(raw.begin(), raw.size()));
    }
    /// Accepts an already-normalized vector; throws if the invariant fails.
    static ScoringVector from_normalized(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }

    /// rev(s)_j = 1 - s_{L+1-j}; plurality and veto are each other's reverse.
    ScoringVector reversed() const;
    std::string to_string() const;

    friend bool operator==(const ScoringVector&, const ScoringVector&) = default;

private:
    explicit ScoringVector(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

/// Raw (pre-normalization) vector of a named family at the given length.
/// Families: plurality, veto, borda, two_approval, plurality_veto, f1_1991,
/// f1_2003, f1_2010, leximax, medal_count.
std::vector<double> named_raw_vector(std::string_view family, std::size_t length);
bool is_named_vector(std::string_view family);
/// The family's vector for full ballots over m alternatives, normalized.
ScoringVector named_vector(std::string_view family, std::size_t m);

/// Positional rule: either a named family, re-instantiated per ballot length,
/// or one fixed vector.
struct PositionalRule {
    std::string family;
    std::optional<ScoringVector> fixed;

    /// Per-position weights for a ballot of the given length when the profile
    /// has m alternatives. Unranked alternatives always score 0.
    std::vector<double> weights_for(std::size_t ballot_length, std::size_t m) const;

    friend bool operator==(const PositionalRule&, const PositionalRule&) = default;
};

struct KemenyRule {
    double time_budget_seconds = 10.0;
    /// Profiles with at most this many alternatives are solved exactly.
    std::size_t exact_threshold = 10;
    friend bool operator==(const KemenyRule&, const KemenyRule&) = default;
};

struct PlackettLuceRule {
    /// Convergence threshold on the log-likelihood gradient; also the
    /// log-strength gap below which alternatives are reported tied.
    double tolerance = 1e-7;
    std::size_t max_iterations = 100000;
    /// Pseudo-count of virtual pairwise wins in each direction for every pair.
    double prior = 1e-6;
    friend bool operator==(const PlackettLuceRule&, const PlackettLuceRule&) = default;
};

struct IrvRule {
    friend bool operator==(const IrvRule&, const IrvRule&) = default;
};

struct TrimmedBordaRule {
    friend bool operator==(const TrimmedBordaRule&, const TrimmedBordaRule&) = default;
};

using RuleVariant = std::variant<PositionalRule, KemenyRule, PlackettLuceRule, IrvRule, TrimmedBordaRule>;

/// A labelled candidate rule descriptor.
class Rule {
public:
    Rule(std::string label, RuleVariant variant);

    static Rule positional(std::string_view family);
    static Rule fixed_vector(ScoringVector s, std::string label = {});
    static Rule kemeny(KemenyRule params = {});
    static Rule pl_mle(PlackettLuceRule params = {});
    static Rule irv();
    static Rule trimmed_borda();

    const std::string& label() const noexcept { return label_; }
    const RuleVariant& variant() const noexcept { return variant_; }
    const PositionalRule* as_positional() const { return std::get_if<PositionalRule>(&variant_); }

    friend bool operator==(const Rule&, const Rule&) = default;

private:
    std::string label_;
    RuleVariant variant_;
};

/// Looks up a rule by CLI name: any named vector family, kemeny, pl_mle, irv,
/// trimmed_borda, or "vector:1,0.5,0". Throws ErrorKind::config otherwise.
Rule rule_by_name(std::string_view name);
std::vector<std::string> known_rule_names();

/// Notes produced while applying a rule (tie-breaks, skipped trimming, ...).
struct RuleDiagnostics {
    std::vector<std::string> notes;
};

/// Applies any rule. An empty profile yields the all-tied ranking.
WeakRanking apply_rule(const Rule& rule, const Profile& p, RuleDiagnostics* diag = nullptr);

/// Position counts stratified by ballot length; the input of every
/// positional score computation.
class BallotLengthCounts {
public:
    explicit BallotLengthCounts(const Profile& p);

    struct Stratum {
        std::size_t length;
        PositionCounts counts;
    };
    std::size_t num_alternatives() const noexcept { return m_; }
    std::size_t num_ballots() const noexcept { return ballots_; }
    const std::vector<Stratum>& strata() const noexcept { return strata_; }

private:
    std::size_t m_;
    std::size_t ballots_;
    std::vector<Stratum> strata_;
};

/// Total score per alternative, accumulated stratum by stratum.
std::vector<double> positional_totals(const PositionalRule& rule, const BallotLengthCounts& counts);
/// Groups totals (descending) whose consecutive gaps are within tolerance.
WeakRanking ranking_from_totals(std::span<const double> totals, double tolerance);
/// Gap below which positional totals are treated as tied.
double positional_tie_tolerance(std::size_t num_ballots);

WeakRanking apply_positional(const PositionalRule& rule, const Profile& p);
WeakRanking apply_positional(const ScoringVector& s, const Profile& p);

/// Exact Kemeny order by subset dynamic programming; lexicographically
/// smallest among co-optimal orders. `pairwise` is row-major m x m.
StrictRanking kemeny_exact(std::span<const std::int64_t> pairwise, std::size_t m);
/// Insertion-move local search from a net-wins order, stopping at a local
/// optimum or when the budget runs out.
StrictRanking kemeny_local_search(std::span<const std::int64_t> pairwise, std::size_t m,
                                  double budget_seconds);
/// Sum over voters of pairwise disagreements with `order` (partial ballots
/// count only the pairs they rank).
std::int64_t kemeny_cost(const StrictRanking& order, std::span<const std::int64_t> pairwise, std::size_t m);

struct PlackettLuceFit {
    std::vector<double> strengths;  // normalized to geometric mean 1
    std::size_t iterations = 0;
    double max_gradient = 0.0;      // |d loglik / d log strength|, max over alternatives
    bool converged = false;
};

/// Minorize-maximize fit of Plackett-Luce strengths. Each ballot is read as a
/// sequence of choices among its own remaining items.
PlackettLuceFit fit_plackett_luce(const Profile& p, const PlackettLuceRule& params);

WeakRanking irv(const Profile& p, RuleDiagnostics* diag = nullptr);
WeakRanking trimmed_borda(const Profile& p, RuleDiagnostics* diag = nullptr);

enum class ScoreAggregator { mean, min, max, median, geometric_mean, trimmed_mean };

std::string_view to_string(ScoreAggregator agg);
ScoreAggregator aggregator_by_name(std::string_view name);
double aggregate_scores(ScoreAggregator agg, std::span<const double> xs);
/// Decreasing score order; exactly equal scores share a tie-group.
WeakRanking scores_to_ranking(std::span<const double> scores);

}  // namespace rulepick
