#include "rulepick/rules.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "rulepick/error.hpp"

namespace rulepick {

namespace {

constexpr std::string_view kFamilies[] = {
    "plurality", "veto",    "borda",   "two_approval", "plurality_veto",
    "f1_1991",   "f1_2003", "f1_2010", "leximax",      "medal_count",
};

std::vector<double> padded(std::initializer_list<double> head, std::size_t length) {
    std::vector<double> v(head);
    v.resize(length, 0.0);
    return v;
}

// Affine map of v onto [1, ..., 0] by its first and last entries; a constant
// vector maps to all ones (every position scores the same).
std::vector<double> affine_unit(std::vector<double> v) {
    if (v.empty()) return v;
    const double first = v.front();
    const double last = v.back();
    if (first == last) {
        std::fill(v.begin(), v.end(), 1.0);
        return v;
    }
    for (double& x : v) x = (x - last) / (first - last);
    return v;
}

}  // namespace

// ---------------------------------------------------------------- vectors

ScoringVector ScoringVector::normalize(std::span<const double> raw) {
    if (raw.size() < 2) fail(ErrorKind::config, "scoring vector needs at least two positions");
    for (std::size_t j = 1; j < raw.size(); ++j) {
        if (raw[j] > raw[j - 1]) fail(ErrorKind::config, "scoring vector must be non-increasing");
    }
    if (raw.front() == raw.back()) fail(ErrorKind::config, "degenerate (constant) scoring vector");
    return ScoringVector(affine_unit(std::vector<double>(raw.begin(), raw.end())));
}

ScoringVector ScoringVector::from_normalized(std::vector<double> values) {
    if (values.size() < 2 || values.front() != 1.0 || values.back() != 0.0) {
        fail(ErrorKind::config, "scoring vector must start at 1 and end at 0");
    }
    for (std::size_t j = 1; j < values.size(); ++j) {
        if (values[j] > values[j - 1]) fail(ErrorKind::config, "scoring vector must be non-increasing");
    }
    return ScoringVector(std::move(values));
}

ScoringVector ScoringVector::reversed() const {
    const std::size_t len = values_.size();
    std::vector<double> r(len);
    for (std::size_t j = 0; j < len; ++j) r[j] = 1.0 - values_[len - 1 - j];
    return ScoringVector(std::move(r));
}

std::string ScoringVector::to_string() const {
    std::ostringstream out;
    out << std::setprecision(6) << '(';
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (j) out << ',';
        out << values_[j];
    }
    out << ')';
    return out.str();
}

bool is_named_vector(std::string_view family) {
    return std::find(std::begin(kFamilies), std::end(kFamilies), family) != std::end(kFamilies);
}

std::vector<double> named_raw_vector(std::string_view family, std::size_t length) {
    if (length == 0) return {};
    if (family == "plurality") return padded({1.0}, length);
    if (family == "veto") {
        std::vector<double> v(length, 1.0);
        v.back() = 0.0;
        return v;
    }
    if (family == "borda") {
        std::vector<double> v(length);
        for (std::size_t j = 0; j < length; ++j) v[j] = static_cast<double>(length - 1 - j);
        return v;
    }
    if (family == "two_approval") return padded({1.0, 1.0}, length);
    if (family == "plurality_veto") {
        if (length == 1) return {1.0};
        std::vector<double> v(length, 0.5);
        v.front() = 1.0;
        v.back() = 0.0;
        return v;
    }
    if (family == "f1_1991") return padded({10, 6, 4, 3, 2, 1}, length);
    if (family == "f1_2003") return padded({10, 8, 6, 5, 4, 3, 2, 1}, length);
    if (family == "f1_2010") return padded({25, 18, 15, 12, 10, 8, 6, 4, 2, 1}, length);
    if (family == "leximax") return padded({1e6, 1e3, 1.0}, length);
    if (family == "medal_count") return padded({1.0, 1.0, 1.0}, length);
    fail(ErrorKind::config, "unknown scoring vector: " + std::string(family));
}

ScoringVector named_vector(std::string_view family, std::size_t m) {
    return ScoringVector::normalize(named_raw_vector(family, m));
}

std::vector<double> PositionalRule::weights_for(std::size_t ballot_length, std::size_t m) const {
    if (ballot_length == 0) return {};
    if (!fixed) {
        std::vector<double> raw = named_raw_vector(family, ballot_length);
        if (ballot_length < m) {
            // Unranked alternatives occupy an implicit trailing slot worth 0.
            raw.push_back(0.0);
            auto w = affine_unit(std::move(raw));
            w.pop_back();
            return w;
        }
        return affine_unit(std::move(raw));
    }
    const auto s = fixed->values();
    if (ballot_length == s.size()) return {s.begin(), s.end()};
    if (ballot_length > s.size()) {
        std::vector<double> w(s.begin(), s.end());
        w.resize(ballot_length, 0.0);
        return w;
    }
    return affine_unit(std::vector<double>(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(ballot_length)));
}

// ------------------------------------------------------------------ rules

Rule::Rule(std::string label, RuleVariant variant)
    : label_(std::move(label)), variant_(std::move(variant)) {
    if (const auto* k = std::get_if<KemenyRule>(&variant_); k && !(k->time_budget_seconds > 0.0)) {
        fail(ErrorKind::config, "kemeny time budget must be positive");
    }
    if (const auto* pl = std::get_if<PlackettLuceRule>(&variant_);
        pl && (!(pl->tolerance > 0.0) || !(pl->prior > 0.0) || pl->max_iterations == 0)) {
        fail(ErrorKind::config, "pl_mle needs positive tolerance, prior and iteration cap");
    }
    if (const auto* pos = std::get_if<PositionalRule>(&variant_);
        pos && !pos->fixed && !is_named_vector(pos->family)) {
        fail(ErrorKind::config, "unknown scoring vector: " + pos->family);
    }
}

Rule Rule::positional(std::string_view family) {
    return Rule(std::string(family), PositionalRule{std::string(family), std::nullopt});
}

Rule Rule::fixed_vector(ScoringVector s, std::string label) {
    if (label.empty()) label = "vector" + s.to_string();
    return Rule(std::move(label), PositionalRule{std::string{}, std::move(s)});
}

Rule Rule::kemeny(KemenyRule params) { return Rule("kemeny", params); }
Rule Rule::pl_mle(PlackettLuceRule params) { return Rule("pl_mle", params); }
Rule Rule::irv() { return Rule("irv", IrvRule{}); }
Rule Rule::trimmed_borda() { return Rule("trimmed_borda", TrimmedBordaRule{}); }

Rule rule_by_name(std::string_view name) {
    if (is_named_vector(name)) return Rule::positional(name);
    if (name == "kemeny") return Rule::kemeny();
    if (name == "pl_mle") return Rule::pl_mle();
    if (name == "irv") return Rule::irv();
    if (name == "trimmed_borda") return Rule::trimmed_borda();
    constexpr std::string_view prefix = "vector:";
    if (name.substr(0, prefix.size()) == prefix) {
        std::vector<double> raw;
        std::string body(name.substr(prefix.size()));
        std::stringstream in(body);
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                std::size_t used = 0;
                raw.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                fail(ErrorKind::config, "bad number in scoring vector: " + item);
            }
        }
        return Rule::fixed_vector(ScoringVector::normalize(raw), std::string(name));
    }
    fail(ErrorKind::config, "unknown rule: " + std::string(name));
}

std::vector<std::string> known_rule_names() {
    std::vector<std::string> names(std::begin(kFamilies), std::end(kFamilies));
    for (const char* n : {"kemeny", "pl_mle", "irv", "trimmed_borda"}) names.emplace_back(n);
    return names;
}

// ------------------------------------------------------------- positional

BallotLengthCounts::BallotLengthCounts(const Profile& p)
    : m_(p.num_alternatives()), ballots_(p.num_voters()) {
    std::map<std::size_t, PositionCounts> by_length;
    for (const auto& b : p.ballots()) {
        const std::size_t len = b.size();
        if (len == 0) continue;
        auto it = by_length.try_emplace(len, m_, len).first;
        for (std::size_t j = 0; j < len; ++j) ++it->second.at(b[j], j);
    }
    strata_.reserve(by_length.size());
    for (auto& [len, counts] : by_length) strata_.push_back({len, std::move(counts)});
}

std::vector<double> positional_totals(const PositionalRule& rule, const BallotLengthCounts& counts) {
    const std::size_t m = counts.num_alternatives();
    std::vector<double> totals(m, 0.0);
    for (const auto& stratum : counts.strata()) {
        if (!rule.fixed && rule.family == "leximax") {
            // (1e6, 1e3, 1) encodes lexicographic medal order only below 1000 per position.
            for (AlternativeId a = 0; a < m; ++a) {
                for (std::size_t j = 1; j < std::min<std::size_t>(3, stratum.length); ++j) {
                    if (stratum.counts.at(a, j) >= 1000) {
                        fail(ErrorKind::domain, "leximax needs fewer than 1000 ballots per position");
                    }
                }
            }
        }
        const auto w = rule.weights_for(stratum.length, m);
        for (AlternativeId a = 0; a < m; ++a) {
            double t = totals[a];
            for (std::size_t j = 0; j < stratum.length; ++j) {
                t += w[j] * static_cast<double>(stratum.counts.at(a, j));
            }
            totals[a] = t;
        }
    }
    return totals;
}

WeakRanking ranking_from_totals(std::span<const double> totals, double tolerance) {
    std::vector<AlternativeId> order(totals.size());
    std::iota(order.begin(), order.end(), AlternativeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](AlternativeId x, AlternativeId y) { return totals[x] > totals[y]; });
    std::vector<std::vector<AlternativeId>> groups;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || totals[order[i - 1]] - totals[order[i]] > tolerance) groups.emplace_back();
        groups.back().push_back(order[i]);
    }
    return WeakRanking(std::move(groups));
}

double positional_tie_tolerance(std::size_t num_ballots) {
    return 1e-9 * static_cast<double>(std::max<std::size_t>(1, num_ballots));
}

WeakRanking apply_positional(const PositionalRule& rule, const Profile& p) {
    const BallotLengthCounts counts(p);
    const auto totals = positional_totals(rule, counts);
    return ranking_from_totals(totals, positional_tie_tolerance(p.num_voters()));
}

WeakRanking apply_positional(const ScoringVector& s, const Profile& p) {
    return apply_positional(PositionalRule{std::string{}, s}, p);
}

// ----------------------------------------------------------------- kemeny

std::int64_t kemeny_cost(const StrictRanking& order, std::span<const std::int64_t> pairwise, std::size_t m) {
    std::int64_t cost = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) cost += pairwise[order[j] * m + order[i]];
    }
    return cost;
}

StrictRanking kemeny_exact(std::span<const std::int64_t> pairwise, std::size_t m) {
    if (m == 0) return StrictRanking{};
    if (m > 24) fail(ErrorKind::limit, "exact Kemeny limited to 24 alternatives");
    const std::uint32_t full = (std::uint32_t{1} << m) - 1;
    // best[S]: least disagreement of any order of the alternatives in S.
    std::vector<std::int64_t> best(std::size_t{full} + 1, 0);
    auto lead_cost = [&](AlternativeId a, std::uint32_t set) {
        std::int64_t c = 0;
        for (AlternativeId b = 0; b < m; ++b) {
            if (b != a && (set >> b & 1u)) c += pairwise[b * m + a];
        }
        return c;
    };
    for (std::uint32_t set = 1; set <= full; ++set) {
        std::int64_t v = std::numeric_limits<std::int64_t>::max();
        for (AlternativeId a = 0; a < m; ++a) {
            if (set >> a & 1u) v = std::min(v, lead_cost(a, set) + best[set & ~(1u << a)]);
        }
        best[set] = v;
    }
    std::vector<AlternativeId> order;
    order.reserve(m);
    std::uint32_t set = full;
    while (set) {
        for (AlternativeId a = 0; a < m; ++a) {
            if ((set >> a & 1u) && lead_cost(a, set) + best[set & ~(1u << a)] == best[set]) {
                order.push_back(a);
                set &= ~(1u << a);
                break;
            }
        }
    }
    return StrictRanking(std::move(order));
}

StrictRanking kemeny_local_search(std::span<const std::int64_t> pairwise, std::size_t m,
                                  double budget_seconds) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration<double>(budget_seconds);

    std::vector<std::int64_t> net(m, 0);
    for (AlternativeId a = 0; a < m; ++a) {
        for (AlternativeId b = 0; b < m; ++b) net[a] += pairwise[a * m + b] - pairwise[b * m + a];
    }
    std::vector<AlternativeId> order(m);
    std::iota(order.begin(), order.end(), AlternativeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](AlternativeId x, AlternativeId y) { return net[x] > net[y]; });

    auto n = [&](AlternativeId x, AlternativeId y) { return pairwise[x * m + y]; };
    bool improved = true;
    while (improved && clock::now() < deadline) {
        improved = false;
        for (std::size_t i = 0; i < m; ++i) {
            const AlternativeId x = order[i];
            std::int64_t best_delta = 0;
            std::size_t best_pos = i;
            std::int64_t delta = 0;
            for (std::size_t j = i; j-- > 0;) {
                const AlternativeId y = order[j];
                delta += n(y, x) - n(x, y);
                if (delta < best_delta) best_delta = delta, best_pos = j;
            }
            delta = 0;
            for (std::size_t j = i + 1; j < m; ++j) {
                const AlternativeId y = order[j];
                delta += n(x, y) - n(y, x);
                if (delta < best_delta) best_delta = delta, best_pos = j;
            }
            if (best_pos != i) {
                order.erase(order.begin() + static_cast<std::ptrdiff_t>(i));
                order.insert(order.begin() + static_cast<std::ptrdiff_t>(best_pos), x);
                improved = true;
            }
        }
    }
    return StrictRanking(std::move(order));
}

namespace {

WeakRanking apply_kemeny(const KemenyRule& params, const Profile& p) {
    const std::size_t m = p.num_alternatives();
    const auto pairwise = pairwise_counts(p);
    const StrictRanking order = m <= params.exact_threshold
                                    ? kemeny_exact(pairwise, m)
                                    : kemeny_local_search(pairwise, m, params.time_budget_seconds);
    return WeakRanking::from_strict(order);
}

}  // namespace

// ---------------------------------------------------------- plackett-luce

PlackettLuceFit fit_plackett_luce(const Profile& p, const PlackettLuceRule& params) {
    const std::size_t m = p.num_alternatives();
    PlackettLuceFit fit;
    fit.strengths.assign(m, 1.0);
    if (m == 0) {
        fit.converged = true;
        return fit;
    }

    std::vector<double> wins(m, params.prior * static_cast<double>(m - 1));
    for (const auto& b : p.ballots()) {
        for (std::size_t t = 0; t + 1 < b.size(); ++t) wins[b[t]] += 1.0;
    }

    std::vector<double>& gamma = fit.strengths;
    std::vector<double> denom(m);
    std::vector<double> suffix;
    for (fit.iterations = 0; fit.iterations < params.max_iterations; ++fit.iterations) {
        std::fill(denom.begin(), denom.end(), 0.0);
        for (const auto& b : p.ballots()) {
            const std::size_t k = b.size();
            if (k < 2) continue;
            suffix.assign(k + 1, 0.0);
            for (std::size_t u = k; u-- > 0;) suffix[u] = suffix[u + 1] + gamma[b[u]];
            // Item at position u sits in the choice sets of events 0..min(u, k-2).
            double acc = 0.0;
            for (std::size_t u = 0; u < k; ++u) {
                if (u + 1 < k) acc += 1.0 / suffix[u];
                denom[b[u]] += acc;
            }
        }
        for (AlternativeId i = 0; i < m; ++i) {
            for (AlternativeId j = i + 1; j < m; ++j) {
                const double c = 2.0 * params.prior / (gamma[i] + gamma[j]);
                denom[i] += c;
                denom[j] += c;
            }
        }
        double worst = 0.0;
        for (AlternativeId i = 0; i < m; ++i) worst = std::max(worst, std::abs(wins[i] - gamma[i] * denom[i]));
        fit.max_gradient = worst;
        if (worst < params.tolerance) {
            fit.converged = true;
            break;
        }
        double log_sum = 0.0;
        for (AlternativeId i = 0; i < m; ++i) {
            gamma[i] = wins[i] / denom[i];
            log_sum += std::log(gamma[i]);
        }
        const double scale = std::exp(log_sum / static_cast<double>(m));
        for (double& g : gamma) g /= scale;
    }
    return fit;
}

namespace {

WeakRanking apply_pl_mle(const PlackettLuceRule& params, const Profile& p, RuleDiagnostics* diag) {
    const auto fit = fit_plackett_luce(p, params);
    if (!fit.converged && diag) {
        diag->notes.push_back("pl_mle stopped at the iteration cap before reaching tolerance");
    }
    std::vector<double> log_strength(fit.strengths.size());
    std::transform(fit.strengths.begin(), fit.strengths.end(), log_strength.begin(),
                   [](double g) { return std::log(g); });
    return ranking_from_totals(log_strength, params.tolerance);
}

}  // namespace

// -------------------------------------------------------------------- irv

WeakRanking irv(const Profile& p, RuleDiagnostics* diag) {
    const std::size_t m = p.num_alternatives();
    if (!p.is_full()) fail(ErrorKind::domain, "IRV requires full rankings");
    std::vector<bool> alive(m, true);
    std::vector<AlternativeId> eliminated;
    eliminated.reserve(m);
    bool broke_tie = false;
    for (std::size_t round = 0; round < m; ++round) {
        std::vector<std::size_t> score(m, 0);
        for (const auto& b : p.ballots()) {
            for (AlternativeId a : b.order()) {
                if (alive[a]) {
                    ++score[a];
                    break;
                }
            }
        }
        std::size_t least = std::numeric_limits<std::size_t>::max();
        std::size_t tied = 0;
        AlternativeId loser = 0;
        for (AlternativeId a = 0; a < m; ++a) {
            if (!alive[a]) continue;
            if (score[a] < least) {
                least = score[a];
                loser = a;
                tied = 1;
            } else if (score[a] == least) {
                ++tied;
            }
        }
        if (tied > 1 && round + 1 < m) broke_tie = true;
        alive[loser] = false;
        eliminated.push_back(loser);
    }
    if (broke_tie && diag) diag->notes.push_back("irv: least-plurality tie eliminated the smallest id");
    return WeakRanking::from_strict(StrictRanking(std::vector<AlternativeId>(eliminated.rbegin(), eliminated.rend())));
}

// ---------------------------------------------------------- trimmed borda

WeakRanking trimmed_borda(const Profile& p, RuleDiagnostics* diag) {
    const std::size_t m = p.num_alternatives();
    const PositionalRule borda{"borda", std::nullopt};
    std::vector<std::vector<double>> received(m);
    std::map<std::size_t, std::vector<double>> weights;
    for (const auto& b : p.ballots()) {
        auto it = weights.find(b.size());
        if (it == weights.end()) it = weights.emplace(b.size(), borda.weights_for(b.size(), m)).first;
        for (std::size_t j = 0; j < b.size(); ++j) received[b[j]].push_back(it->second[j]);
    }
    std::vector<double> totals(m, 0.0);
    std::size_t untrimmed = 0;
    for (AlternativeId a = 0; a < m; ++a) {
        auto& v = received[a];
        std::sort(v.begin(), v.end());
        std::size_t lo = 0, hi = v.size();
        if (v.size() >= 3) {
            ++lo;  // one lowest score (worst position)
            --hi;  // one highest score (best position)
        } else if (!v.empty()) {
            ++untrimmed;
        }
        double t = 0.0;
        for (std::size_t i = lo; i < hi; ++i) t += v[i];
        totals[a] = t;
    }
    if (untrimmed && diag) {
        diag->notes.push_back("trimmed_borda: " + std::to_string(untrimmed) +
                              " alternative(s) ranked fewer than 3 times were left untrimmed");
    }
    return ranking_from_totals(totals, positional_tie_tolerance(p.num_voters()));
}

// ---------------------------------------------------------------- dispatch

WeakRanking apply_rule(const Rule& rule, const Profile& p, RuleDiagnostics* diag) {
    if (p.empty()) return WeakRanking::all_tied(p.num_alternatives());
    return std::visit(
        [&](const auto& r) -> WeakRanking {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, PositionalRule>) return apply_positional(r, p);
            else if constexpr (std::is_same_v<T, KemenyRule>) return apply_kemeny(r, p);
            else if constexpr (std::is_same_v<T, PlackettLuceRule>) return apply_pl_mle(r, p, diag);
            else if constexpr (std::is_same_v<T, IrvRule>) return irv(p, diag);
            else return trimmed_borda(p, diag);
        },
        rule.variant());
}

// ------------------------------------------------------------ score data

std::string_view to_string(ScoreAggregator agg) {
    switch (agg) {
        case ScoreAggregator::mean: return "mean";
        case ScoreAggregator::min: return "min";
        case ScoreAggregator::max: return "max";
        case ScoreAggregator::median: return "median";
        case ScoreAggregator::geometric_mean: return "geometric_mean";
        case ScoreAggregator::trimmed_mean: return "trimmed_mean";
    }
    return "unknown";
}

ScoreAggregator aggregator_by_name(std::string_view name) {
    for (auto agg : {ScoreAggregator::mean, ScoreAggregator::min, ScoreAggregator::max,
                     ScoreAggregator::median, ScoreAggregator::geometric_mean, ScoreAggregator::trimmed_mean}) {
        if (to_string(agg) == name) return agg;
    }
    fail(ErrorKind::config, "unknown aggregator: " + std::string(name));
}

double aggregate_scores(ScoreAggregator agg, std::span<const double> xs) {
    if (xs.empty()) fail(ErrorKind::domain, std::string(to_string(agg)) + ": empty score set");
    std::vector<double> v(xs.begin(), xs.end());
    auto mean_of = [](auto first, auto last) {
        double s = 0.0;
        for (auto it = first; it != last; ++it) s += *it;
        return s / static_cast<double>(last - first);
    };
    switch (agg) {
        case ScoreAggregator::mean: return mean_of(v.begin(), v.end());
        case ScoreAggregator::min: return *std::min_element(v.begin(), v.end());
        case ScoreAggregator::max: return *std::max_element(v.begin(), v.end());
        case ScoreAggregator::median: {
            std::sort(v.begin(), v.end());
            const std::size_t n = v.size();
            return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        }
        case ScoreAggregator::geometric_mean: {
            double s = 0.0;
            for (double x : v) {
                if (!(x > 0.0)) fail(ErrorKind::domain, "geometric_mean requires positive scores");
                s += std::log(x);
            }
            return std::exp(s / static_cast<double>(v.size()));
        }
        case ScoreAggregator::trimmed_mean: {
            if (v.size() < 3) fail(ErrorKind::domain, "trimmed_mean requires at least 3 scores");
            std::sort(v.begin(), v.end());
            return mean_of(v.begin() + 1, v.end() - 1);
        }
    }
    return 0.0;
}

WeakRanking scores_to_ranking(std::span<const double> scores) {
    return ranking_from_totals(scores, 0.0);
}

}  // namespace rulepick
