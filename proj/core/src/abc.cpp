#include "rulepick/abc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rulepick/error.hpp"
#include "rulepick/random.hpp"
#include "parallel.hpp"

namespace rulepick {

namespace {

namespace mp = boost::multiprecision;
// Wide enough to hold any sum of count * double with values in [2^-1074, 2^80]
// without rounding.
using Wide = mp::number<mp::cpp_bin_float<1280, mp::digit_base_2>, mp::et_off>;

class ExactSum {
public:
    void add(double value, std::uint64_t count = 1) {
        if (value != 0.0 && count != 0) total_ += Wide(value) * Wide(count);
    }
    double divided_by(double divisor) const { return static_cast<double>(total_ / Wide(divisor)); }

private:
    Wide total_{0};
};

constexpr std::size_t kMaxExhaustiveVoters = 20;
constexpr std::size_t kMaxGroupedVoters = 62;
constexpr double kMaxGroupedAssignments = 2e7;

struct Sides {
    Profile side1;
    Profile side2;
    AlternativeWeights weights;
    bool has_empty = false;
};

AlternativeWeights weights_from_counts(const std::vector<std::size_t>& c1, const std::vector<std::size_t>& c2,
                                       bool formula, double gamma) {
    const std::size_t m = c1.size();
    AlternativeWeights w(m, 0.0);
    const bool one_side_empty = std::all_of(c1.begin(), c1.end(), [](auto c) { return c == 0; }) ||
                                std::all_of(c2.begin(), c2.end(), [](auto c) { return c == 0; });
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t total = c1[a] + c2[a];
        const std::size_t least = std::min(c1[a], c2[a]);
        if (formula) {
            if (total == 0 || least == 0) continue;
            w[a] = (std::pow(gamma, static_cast<double>(least)) - 1.0) /
                   (std::pow(gamma, static_cast<double>(total) / 2.0) - 1.0);
        } else if (one_side_empty ? total > 0 : least > 0) {
            w[a] = 1.0;
        }
    }
    return w;
}

Sides make_sides(Profile side1, Profile side2, bool formula, double gamma) {
    Sides s{std::move(side1), std::move(side2), {}, false};
    s.has_empty = s.side1.empty() || s.side2.empty();
    s.weights = weights_from_counts(s.side1.appearance_counts(), s.side2.appearance_counts(), formula, gamma);
    return s;
}

double disagreement_on(const Rule& rule, const Sides& s, const DisagreementOptions& options,
                       RuleDiagnostics* diag) {
    const WeakRanking r1 = apply_rule(rule, s.side1, diag);
    const WeakRanking r2 = apply_rule(rule, s.side2, diag);
    return options.normalized ? normalized_disagreement(r1, r2, s.weights) : weighted_kt(r1, r2, s.weights);
}

void check_gamma(const DisagreementOptions& options) {
    if (!(options.gamma > 1.0)) fail(ErrorKind::config, "gamma must exceed 1");
}

struct SplitOutcome {
    bool skipped = false;
    std::vector<double> values;  // per rule
    std::vector<std::string> notes;
};

SplitOutcome evaluate_split(std::span<const Rule> rules, const Profile& p, const Split& split, bool formula,
                            const DisagreementOptions& options) {
    SplitOutcome out;
    auto [s1, s2] = side_profiles(p, split);
    const Sides sides = make_sides(std::move(s1), std::move(s2), formula, options.gamma);
    if (options.skip_empty && sides.has_empty) {
        out.skipped = true;
        return out;
    }
    out.values.reserve(rules.size());
    for (const auto& rule : rules) {
        RuleDiagnostics diag;
        out.values.push_back(disagreement_on(rule, sides, options, &diag));
        for (auto& note : diag.notes) out.notes.push_back(rule.label() + ": " + note);
    }
    return out;
}

void add_note(std::vector<std::string>& notes, std::string note) {
    if (std::find(notes.begin(), notes.end(), note) == notes.end()) notes.push_back(std::move(note));
}

DisagreementReport evaluate_enumerated(std::span<const Rule> rules, const Profile& p, const AbcConfig& cfg,
                                       bool formula) {
    DisagreementReport report;
    const std::size_t n = p.num_voters();
    const bool exhaustive = cfg.mode == SplitMode::exhaustive;
    if (exhaustive && n > kMaxExhaustiveVoters) {
        fail(ErrorKind::limit, "exhaustive split enumeration limited to " + std::to_string(kMaxExhaustiveVoters) +
                                   " voters");
    }
    if (!exhaustive && cfg.n_splits == 0) fail(ErrorKind::config, "n_splits must be at least 1");
    const std::size_t count = exhaustive ? (std::size_t{1} << n) : cfg.n_splits;

    std::vector<SplitOutcome> outcomes(count);
    detail::parallel_for(count, cfg.jobs, [&](std::size_t i) {
        const Split split = exhaustive ? split_from_mask(n, i) : split_from_sequence(n, cfg.seed, i);
        outcomes[i] = evaluate_split(rules, p, split, formula, cfg.options);
    });

    report.rules.resize(rules.size());
    for (std::size_t r = 0; r < rules.size(); ++r) report.rules[r].label = rules[r].label();
    for (const auto& o : outcomes) {
        if (o.skipped) continue;
        ++report.evaluated;
        for (std::size_t r = 0; r < rules.size(); ++r) report.rules[r].values.push_back(o.values[r]);
        for (const auto& note : o.notes) add_note(report.notes, note);
    }
    for (auto& est : report.rules) {
        est.mean = exact_mean(est.values);
        est.sem = exhaustive ? 0.0 : standard_error(est.values);
    }
    if (report.evaluated == 0) add_note(report.notes, "every split had an empty side; means reported as 0");
    return report;
}

__extension__ using u128 = unsigned __int128;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    k = std::min(k, n - k);
    u128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;  // exact at every step
    return static_cast<std::uint64_t>(r);
}

DisagreementReport evaluate_grouped(std::span<const Rule> rules, const Profile& p, const AbcConfig& cfg,
                                    bool formula) {
    const std::size_t n = p.num_voters();
    if (n > kMaxGroupedVoters) {
        fail(ErrorKind::limit, "grouped exact enumeration limited to " + std::to_string(kMaxGroupedVoters) +
                                   " voters");
    }
    std::map<StrictRanking, std::size_t> multiplicity;
    for (const auto& b : p.ballots()) ++multiplicity[b];
    std::vector<StrictRanking> types;
    std::vector<std::size_t> counts;
    double assignments = 1.0;
    for (const auto& [ballot, c] : multiplicity) {
        types.push_back(ballot);
        counts.push_back(c);
        assignments *= static_cast<double>(c + 1);
    }
    if (assignments > kMaxGroupedAssignments) {
        fail(ErrorKind::limit, "grouped exact enumeration would visit too many multiplicity vectors");
    }

    DisagreementReport report;
    std::vector<ExactSum> sums(rules.size());
    std::uint64_t total_weight = 0;
    std::vector<std::size_t> x(types.size(), 0);
    while (true) {
        std::vector<StrictRanking> b1, b2;
        std::uint64_t weight = 1;
        for (std::size_t t = 0; t < types.size(); ++t) {
            b1.insert(b1.end(), x[t], types[t]);
            b2.insert(b2.end(), counts[t] - x[t], types[t]);
            weight *= binomial(counts[t], x[t]);
        }
        const Sides sides = make_sides(Profile(p.num_alternatives(), std::move(b1)),
                                       Profile(p.num_alternatives(), std::move(b2)), formula, cfg.options.gamma);
        if (!(cfg.options.skip_empty && sides.has_empty)) {
            ++report.evaluated;
            total_weight += weight;
            for (std::size_t r = 0; r < rules.size(); ++r) {
                RuleDiagnostics diag;
                sums[r].add(disagreement_on(rules[r], sides, cfg.options, &diag), weight);
                for (auto& note : diag.notes) add_note(report.notes, rules[r].label() + ": " + note);
            }
        }
        std::size_t t = 0;
        while (t < x.size() && x[t] == counts[t]) x[t++] = 0;
        if (t == x.size()) break;
        ++x[t];
    }
    report.rules.resize(rules.size());
    for (std::size_t r = 0; r < rules.size(); ++r) {
        report.rules[r].label = rules[r].label();
        report.rules[r].mean = total_weight ? sums[r].divided_by(static_cast<double>(total_weight)) : 0.0;
    }
    return report;
}

}  // namespace

// ------------------------------------------------------------------ splits

std::size_t Split::count(std::uint8_t s) const noexcept {
    return static_cast<std::size_t>(std::count(side.begin(), side.end(), s));
}

Split random_split(std::size_t num_voters, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Split split;
    split.side.resize(num_voters);
    std::uint64_t bits = 0;
    for (std::size_t v = 0; v < num_voters; ++v) {
        if (v % 64 == 0) bits = rng();
        split.side[v] = static_cast<std::uint8_t>(1 + ((bits >> (v % 64)) & 1u));
    }
    return split;
}

Split random_split(const Profile& p, std::uint64_t seed) { return random_split(p.num_voters(), seed); }

Split split_from_sequence(std::size_t num_voters, std::uint64_t seed, std::size_t index) {
    return random_split(num_voters, stream_seed(seed, index));
}

Split split_from_mask(std::size_t num_voters, std::uint64_t mask) {
    Split split;
    split.side.resize(num_voters);
    for (std::size_t v = 0; v < num_voters; ++v) {
        split.side[v] = static_cast<std::uint8_t>(1 + ((mask >> v) & 1u));
    }
    return split;
}

std::pair<Profile, Profile> side_profiles(const Profile& p, const Split& split) {
    if (split.size() != p.num_voters()) fail(ErrorKind::domain, "split size differs from voter count");
    std::vector<StrictRanking> b1, b2;
    for (std::size_t v = 0; v < p.num_voters(); ++v) {
        const auto s = split.side[v];
        if (s != 1 && s != 2) fail(ErrorKind::domain, "split side must be 1 or 2");
        (s == 1 ? b1 : b2).push_back(p[v]);
    }
    return {Profile(p.num_alternatives(), std::move(b1)), Profile(p.num_alternatives(), std::move(b2))};
}

AlternativeWeights alternative_weights(const Profile& p, const Split& split, double gamma) {
    if (!(gamma > 1.0)) fail(ErrorKind::config, "gamma must exceed 1");
    auto [s1, s2] = side_profiles(p, split);
    return weights_from_counts(s1.appearance_counts(), s2.appearance_counts(), true, gamma);
}

bool weighting_enabled(const DisagreementOptions& options, const Profile& p) {
    switch (options.weighting) {
        case Weighting::on: return true;
        case Weighting::off: return false;
        case Weighting::automatic: return !p.is_full();
    }
    return false;
}

AlternativeWeights split_weights(const Profile& p, const Split& split, const DisagreementOptions& options) {
    check_gamma(options);
    auto [s1, s2] = side_profiles(p, split);
    return weights_from_counts(s1.appearance_counts(), s2.appearance_counts(), weighting_enabled(options, p),
                               options.gamma);
}

double split_disagreement(const Rule& rule, const Profile& p, const Split& split,
                          const DisagreementOptions& options) {
    check_gamma(options);
    auto [s1, s2] = side_profiles(p, split);
    const Sides sides = make_sides(std::move(s1), std::move(s2), weighting_enabled(options, p), options.gamma);
    return disagreement_on(rule, sides, options, nullptr);
}

// -------------------------------------------------------------- estimation

std::string_view to_string(SplitMode mode) {
    switch (mode) {
        case SplitMode::monte_carlo: return "monte_carlo";
        case SplitMode::exhaustive: return "exhaustive";
        case SplitMode::grouped_exact: return "grouped_exact";
    }
    return "unknown";
}

SplitMode split_mode_by_name(std::string_view name) {
    for (auto mode : {SplitMode::monte_carlo, SplitMode::exhaustive, SplitMode::grouped_exact}) {
        if (to_string(mode) == name) return mode;
    }
    fail(ErrorKind::config, "unknown split mode: " + std::string(name));
}

DisagreementReport evaluate_rules(std::span<const Rule> rules, const Profile& p, const AbcConfig& cfg) {
    check_gamma(cfg.options);
    const bool formula = weighting_enabled(cfg.options, p);
    DisagreementReport report = cfg.mode == SplitMode::grouped_exact ? evaluate_grouped(rules, p, cfg, formula)
                                                                     : evaluate_enumerated(rules, p, cfg, formula);
    report.mode = cfg.mode;
    report.seed = cfg.seed;
    report.n_splits = cfg.mode == SplitMode::monte_carlo ? cfg.n_splits : 0;
    report.weighting = formula;
    report.options = cfg.options;
    return report;
}

Estimate estimate_disagreement(const Rule& rule, const Profile& p, std::size_t n_splits, std::uint64_t seed,
                               const DisagreementOptions& options) {
    AbcConfig cfg;
    cfg.n_splits = n_splits;
    cfg.seed = seed;
    cfg.options = options;
    return evaluate_rules(std::span<const Rule>(&rule, 1), p, cfg).rules.front();
}

double exact_disagreement(const Rule& rule, const Profile& p, const DisagreementOptions& options) {
    AbcConfig cfg;
    cfg.mode = SplitMode::exhaustive;
    cfg.options = options;
    return evaluate_rules(std::span<const Rule>(&rule, 1), p, cfg).rules.front().mean;
}

double grouped_exact_disagreement(const Rule& rule, const Profile& p, const DisagreementOptions& options) {
    AbcConfig cfg;
    cfg.mode = SplitMode::grouped_exact;
    cfg.options = options;
    return evaluate_rules(std::span<const Rule>(&rule, 1), p, cfg).rules.front().mean;
}

namespace {

std::vector<std::size_t> argmin_within(const std::vector<Estimate>& estimates, double tie_epsilon) {
    if (estimates.empty()) fail(ErrorKind::config, "candidate list is empty");
    if (!(tie_epsilon >= 0.0)) fail(ErrorKind::config, "tie_epsilon must be nonnegative");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : estimates) best = std::min(best, e.mean);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (estimates[i].mean <= best + tie_epsilon) out.push_back(i);
    }
    return out;
}

}  // namespace

PickResult pick_rule(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg) {
    if (candidates.empty()) fail(ErrorKind::config, "candidate list is empty");
    PickResult result;
    result.report = evaluate_rules(candidates, p, cfg);
    result.argmin = argmin_within(result.report.rules, cfg.tie_epsilon);
    result.chosen = result.argmin.front();
    return result;
}

// ------------------------------------------------------------- score data

ScoreHalves score_split(const ItemScores& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ScoreHalves halves;
    halves.side1.reserve(items.size());
    halves.side2.reserve(items.size());
    for (const auto& scores : items) {
        if (scores.size() < 2) fail(ErrorKind::domain, "every item needs at least 2 scores to split");
        std::vector<double> pool = scores;
        if (pool.size() % 2) {
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
        }
        std::shuffle(pool.begin(), pool.end(), rng);
        const auto half = static_cast<std::ptrdiff_t>(pool.size() / 2);
        halves.side1.emplace_back(pool.begin(), pool.begin() + half);
        halves.side2.emplace_back(pool.begin() + half, pool.end());
    }
    return halves;
}

AggregatorPick pick_aggregator(std::span<const ScoreAggregator> aggregators, const ItemScores& items,
                               std::size_t n_trials, std::uint64_t seed, double tie_epsilon) {
    if (aggregators.empty()) fail(ErrorKind::config, "aggregator list is empty");
    if (n_trials == 0) fail(ErrorKind::config, "n_trials must be at least 1");
    AggregatorPick out;
    out.aggregators.assign(aggregators.begin(), aggregators.end());
    out.seed = seed;
    out.n_trials = n_trials;
    out.estimates.resize(aggregators.size());
    for (std::size_t g = 0; g < aggregators.size(); ++g) out.estimates[g].label = std::string(to_string(aggregators[g]));

    const double pairs = 0.5 * static_cast<double>(items.size()) * static_cast<double>(items.size() - (items.empty() ? 0 : 1));
    std::vector<double> a1(items.size()), a2(items.size());
    for (std::size_t t = 0; t < n_trials; ++t) {
        const ScoreHalves halves = score_split(items, stream_seed(seed, t));
        for (std::size_t g = 0; g < aggregators.size(); ++g) {
            for (std::size_t i = 0; i < items.size(); ++i) {
                a1[i] = aggregate_scores(aggregators[g], halves.side1[i]);
                a2[i] = aggregate_scores(aggregators[g], halves.side2[i]);
            }
            const double kt = kt_with_ties(scores_to_ranking(a1), scores_to_ranking(a2));
            out.estimates[g].values.push_back(pairs > 0.0 ? kt / pairs : 0.0);
        }
    }
    for (auto& e : out.estimates) {
        e.mean = exact_mean(e.values);
        e.sem = standard_error(e.values);
    }
    out.argmin = argmin_within(out.estimates, tie_epsilon);
    out.chosen = out.argmin.front();
    return out;
}

// ---------------------------------------------------------------- helpers

double exact_mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    ExactSum sum;
    for (double v : values) sum.add(v);
    return sum.divided_by(static_cast<double>(values.size()));
}

double standard_error(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double mean = exact_mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace rulepick
