#include "rulepick/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "rulepick/error.hpp"
#include "rulepick/random.hpp"

namespace rulepick {

namespace {

constexpr std::string_view kDefaultStarts[] = {"plurality", "veto", "borda", "two_approval", "plurality_veto"};

// Per-split data that does not depend on the scoring vector.
struct PreparedSplit {
    BallotLengthCounts side1;
    BallotLengthCounts side2;
    AlternativeWeights weights;
    bool has_empty;
};

class Objective {
public:
    Objective(const Profile& p, std::span<const Split> splits, const DisagreementOptions& options)
        : options_(options) {
        prepared_.reserve(splits.size());
        for (const auto& split : splits) {
            auto [s1, s2] = side_profiles(p, split);
            const bool empty = s1.empty() || s2.empty();
            if (options.skip_empty && empty) continue;
            prepared_.push_back({BallotLengthCounts(s1), BallotLengthCounts(s2), split_weights(p, split, options),
                                 empty});
        }
    }

    double operator()(const PositionalRule& rule) const {
        values_.clear();
        for (const auto& s : prepared_) {
            const WeakRanking r1 = side_ranking(rule, s.side1);
            const WeakRanking r2 = side_ranking(rule, s.side2);
            values_.push_back(options_.normalized ? normalized_disagreement(r1, r2, s.weights)
                                                  : weighted_kt(r1, r2, s.weights));
        }
        return exact_mean(values_);
    }

private:
    static WeakRanking side_ranking(const PositionalRule& rule, const BallotLengthCounts& counts) {
        if (counts.num_ballots() == 0) return WeakRanking::all_tied(counts.num_alternatives());
        const auto totals = positional_totals(rule, counts);
        return ranking_from_totals(totals, positional_tie_tolerance(counts.num_ballots()));
    }

    DisagreementOptions options_;
    std::vector<PreparedSplit> prepared_;
    mutable std::vector<double> values_;
};

PositionalRule fixed(const ScoringVector& s) { return PositionalRule{std::string{}, s}; }

// A proposal: one interior entry moved by +-delta; empty when monotonicity breaks.
std::optional<std::vector<double>> propose(const std::vector<double>& state, std::mt19937_64& rng,
                                           const AnnealConfig& cfg) {
    std::uniform_int_distribution<std::size_t> index(1, state.size() - 2);
    std::uniform_real_distribution<double> magnitude(cfg.delta_min, cfg.delta_max);
    std::bernoulli_distribution up(0.5);
    const std::size_t j = index(rng);
    const double delta = magnitude(rng);
    std::vector<double> next = state;
    next[j] += up(rng) ? delta : -delta;
    if (next[j] > next[j - 1] || next[j] < next[j + 1]) return std::nullopt;
    return next;
}

}  // namespace

std::vector<Split> split_sequence(std::size_t num_voters, std::size_t n_splits, std::uint64_t seed) {
    std::vector<Split> splits;
    splits.reserve(n_splits);
    for (std::size_t i = 0; i < n_splits; ++i) splits.push_back(split_from_sequence(num_voters, seed, i));
    return splits;
}

double mean_split_disagreement(const PositionalRule& rule, const Profile& p, std::span<const Split> splits,
                               const DisagreementOptions& options) {
    if (!(options.gamma > 1.0)) fail(ErrorKind::config, "gamma must exceed 1");
    return Objective(p, splits, options)(rule);
}

std::size_t anneal_vector_length(const Profile& p) { return p.max_ballot_length(); }

AnnealResult anneal(const Profile& p, std::span<const Split> splits, const AnnealConfig& cfg,
                    const DisagreementOptions& options) {
    if (splits.empty()) fail(ErrorKind::config, "annealing needs at least one split");
    if (cfg.steps == 0) fail(ErrorKind::config, "steps must be at least 1");
    if (!(cfg.delta_min > 0.0 && cfg.delta_min <= cfg.delta_max && cfg.delta_max <= 1.0)) {
        fail(ErrorKind::config, "delta range must satisfy 0 < min <= max <= 1");
    }
    if (!(options.gamma > 1.0)) fail(ErrorKind::config, "gamma must exceed 1");

    const std::size_t length = anneal_vector_length(p);
    std::vector<ScoringVector> starts = cfg.starts;
    if (starts.empty()) {
        if (length < 2) fail(ErrorKind::domain, "annealing needs ballots of length at least 2");
        for (auto family : kDefaultStarts) starts.push_back(named_vector(family, length));
    }
    for (const auto& s : starts) {
        if (s.size() != length) fail(ErrorKind::config, "start vector length must equal the longest ballot");
    }

    const Objective objective(p, splits, options);
    AnnealResult result{starts.front(), std::numeric_limits<double>::infinity(), {}, {}};
    for (const auto& s : starts) {
        const double f = objective(fixed(s));
        result.start_objectives.push_back(f);
        if (f < result.objective) {
            result.objective = f;
            result.best = s;
        }
    }
    if (length < 3) return result;  // no interior entries to move

    for (std::size_t chain = 0; chain < starts.size(); ++chain) {
        std::vector<double> state(starts[chain].values().begin(), starts[chain].values().end());
        double current = result.start_objectives[chain];

        std::mt19937_64 calibration = stream_rng(cfg.seed, 2 * chain);
        std::vector<double> sample;
        for (std::size_t i = 0; i < cfg.calibration_proposals; ++i) {
            if (auto next = propose(state, calibration, cfg)) {
                sample.push_back(std::abs(objective(fixed(ScoringVector::from_normalized(*next))) - current));
            }
        }
        double t0 = 0.0;
        if (!sample.empty()) {
            std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(sample.size() / 2),
                             sample.end());
            t0 = sample[sample.size() / 2] / std::numbers::ln2;
        }

        std::mt19937_64 rng = stream_rng(cfg.seed, 2 * chain + 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t t = 0; t < cfg.steps; ++t) {
            AnnealStep row{chain, t, std::numeric_limits<double>::quiet_NaN(), false, result.objective};
            if (auto next = propose(state, rng, cfg)) {
                ScoringVector candidate = ScoringVector::from_normalized(*next);
                const double f = objective(fixed(candidate));
                const double delta = f - current;
                const double temperature = t0 * (1.0 - static_cast<double>(t) / static_cast<double>(cfg.steps));
                const double u = unit(rng);
                row.delta = delta;
                row.accepted = delta <= 0.0 || (temperature > 0.0 && u < std::exp(-delta / temperature));
                if (row.accepted) {
                    state = std::move(*next);
                    current = f;
                    if (f < result.objective) {
                        result.objective = f;
                        result.best = std::move(candidate);
                    }
                }
                row.best = result.objective;
            }
            result.trace.push_back(row);
        }
    }
    return result;
}

}  // namespace rulepick
