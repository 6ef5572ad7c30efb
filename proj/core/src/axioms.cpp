#include "rulepick/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "rulepick/error.hpp"
#include "rulepick/random.hpp"
#include "parallel.hpp"

namespace rulepick {

namespace {

constexpr std::size_t kMaxShuffledBallots = 50'000'000;

std::size_t factorial(std::size_t m) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= m; ++i) f *= i;
    return f;
}

std::vector<std::size_t> argmin_of(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg) {
    return pick_rule(candidates, p, cfg).argmin;
}

std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::string join_indices(std::span<const Rule> candidates, const std::vector<std::size_t>& idx) {
    std::string out = "{";
    for (std::size_t i = 0; i < idx.size(); ++i) out += (i ? "," : "") + candidates[idx[i]].label();
    return out + "}";
}

AxiomOutcome outcome(std::string axiom, const Profile& p) {
    AxiomOutcome o;
    o.axiom = std::move(axiom);
    o.m = p.num_alternatives();
    o.n = p.num_voters();
    return o;
}

// Promotes `a` for a U(0.2, 0.8) fraction of voters sampled without replacement.
Profile promote_random_fraction(const Profile& p, AlternativeId a, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> fraction(0.2, 0.8);
    const double q = fraction(rng);
    const auto count = static_cast<std::size_t>(std::llround(q * static_cast<double>(p.num_voters())));
    std::vector<std::size_t> voters(p.num_voters());
    std::iota(voters.begin(), voters.end(), std::size_t{0});
    std::shuffle(voters.begin(), voters.end(), rng);
    voters.resize(count);
    std::sort(voters.begin(), voters.end());
    return promote(p, a, voters);
}

AlternativeId top_alternative(const WeakRanking& r) {
    if (r.num_groups() == 0) fail(ErrorKind::domain, "ranking is empty");
    return r.groups().front().front();
}

bool same_reversed(const ScoringVector& s, const ScoringVector& t) {
    if (s.size() != t.size()) return false;
    const auto rev = s.reversed();
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (std::abs(rev[j] - t[j]) > 1e-12) return false;
    }
    return true;
}

std::string reversed_family(std::string_view family) {
    if (family == "plurality") return "veto";
    if (family == "veto") return "plurality";
    if (family == "borda" || family == "plurality_veto") return std::string(family);
    return {};
}

// Index in `list` of the reverse of `rule`. A named family matches a fixed
// vector through the family's vector at that vector's length.
// Entries already marked in `taken` are skipped.
std::optional<std::size_t> find_reverse(const Rule& rule, std::span<const Rule> list, const std::vector<bool>& taken) {
    const PositionalRule* r = rule.as_positional();
    if (!r) fail(ErrorKind::config, "reversal symmetry needs positional candidates: " + rule.label());
    for (std::size_t j = 0; j < list.size(); ++j) {
        const PositionalRule* o = list[j].as_positional();
        if (!o || taken[j]) continue;
        bool match = false;
        if (r->fixed && o->fixed) {
            match = same_reversed(*r->fixed, *o->fixed);
        } else if (!r->fixed && !o->fixed) {
            const std::string rev = reversed_family(r->family);
            match = !rev.empty() && rev == o->family;
        } else if (r->fixed) {
            match = r->fixed->size() >= 2 && same_reversed(*r->fixed, named_vector(o->family, r->fixed->size()));
        } else {
            match = o->fixed->size() >= 2 && same_reversed(named_vector(r->family, o->fixed->size()), *o->fixed);
        }
        if (match) return j;
    }
    return std::nullopt;
}

}  // namespace

// -------------------------------------------------------------- shuffling

Profile shuffle(const Profile& p, const ShuffleSpec& spec) {
    const std::size_t m = p.num_alternatives();
    if (!p.is_full()) fail(ErrorKind::domain, "shuffling needs full rankings");
    if (spec.k == 0) fail(ErrorKind::config, "shuffle multiplier k must be positive");
    std::vector<std::size_t> positions = spec.positions;
    std::sort(positions.begin(), positions.end());
    if (std::adjacent_find(positions.begin(), positions.end()) != positions.end()) {
        fail(ErrorKind::config, "shuffle positions must be distinct");
    }
    if (positions.size() < 2) fail(ErrorKind::config, "shuffle needs at least two positions");
    if (positions.front() < 1 || positions.back() > m) fail(ErrorKind::config, "shuffle position outside [1, m]");
    if (m > 12) fail(ErrorKind::limit, "shuffle needs m! copies; m is too large");
    const std::size_t copies = spec.k * factorial(m);
    if (copies * p.num_voters() > kMaxShuffledBallots) fail(ErrorKind::limit, "shuffled profile is too large");

    const std::size_t s = positions.size();
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> perm(s);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    const std::size_t per_group = copies / perms.size();

    std::vector<StrictRanking> out;
    out.reserve(copies * p.num_voters());
    for (const auto& ballot : p.ballots()) {
        for (const auto& pi : perms) {
            std::vector<AlternativeId> order(ballot.order().begin(), ballot.order().end());
            for (std::size_t i = 0; i < s; ++i) order[positions[i] - 1] = ballot[positions[pi[i]] - 1];
            const StrictRanking permuted(std::move(order));
            out.insert(out.end(), per_group, permuted);
        }
    }
    return Profile(m, std::move(out));
}

Profile shuffle_from(const Profile& p, std::size_t first_position, std::size_t k) {
    ShuffleSpec spec{{}, k};
    for (std::size_t j = first_position; j <= p.num_alternatives(); ++j) spec.positions.push_back(j);
    return shuffle(p, spec);
}

WeakRanking induced_swf(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg) {
    const auto pick = pick_rule(candidates, p, cfg);
    return apply_rule(candidates[pick.chosen], p);
}

// ------------------------------------------------------------ rpr axioms

std::vector<std::size_t> reversal_pairing(std::span<const Rule> candidates) {
    std::vector<std::size_t> pair(candidates.size());
    std::vector<bool> taken(candidates.size(), false);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (taken[i]) continue;
        taken[i] = true;
        auto j = find_reverse(candidates[i], candidates, taken);
        if (!j && find_reverse(candidates[i], std::span(&candidates[i], 1), {false})) j = i;
        if (!j) fail(ErrorKind::config, "candidate set is not closed under reversal: " + candidates[i].label());
        taken[*j] = true;
        pair[i] = *j;
        pair[*j] = i;
    }
    return pair;
}

std::vector<Rule> reversal_closure(std::span<const Rule> candidates, std::size_t m) {
    std::vector<Rule> out(candidates.begin(), candidates.end());
    std::vector<bool> taken(candidates.size(), false);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (taken[i]) continue;
        taken[i] = true;
        const Rule& rule = candidates[i];
        if (const auto j = find_reverse(rule, candidates, taken)) {
            taken[*j] = true;
            continue;
        }
        if (find_reverse(rule, std::span(&rule, 1), {false})) continue;
        const PositionalRule* r = rule.as_positional();
        const ScoringVector s = r->fixed ? *r->fixed : named_vector(r->family, m);
        out.push_back(Rule::fixed_vector(s.reversed(), "reverse(" + rule.label() + ")"));
    }
    return out;
}

AxiomOutcome check_reversal_symmetry(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg) {
    const auto pair = reversal_pairing(candidates);
    AxiomOutcome o = outcome("reversal_symmetry", p);
    const auto forward = argmin_of(candidates, p, cfg);
    const auto backward = argmin_of(candidates, reverse(p), cfg);
    std::vector<std::size_t> expected;
    for (std::size_t i : forward) expected.push_back(pair[i]);
    std::sort(expected.begin(), expected.end());
    o.instances = 1;
    if (backward != expected) {
        o.violations = 1;
        o.notes.push_back("reversed profile picks " + join_indices(candidates, backward) + ", expected " +
                          join_indices(candidates, expected));
    }
    return o;
}

AxiomOutcome check_union_consistency(std::span<const Rule> candidates, const Profile& pa, const Profile& pb,
                                     const AbcConfig& cfg) {
    AxiomOutcome o = outcome("union_consistency", pa.concat(pb));
    const auto za = argmin_of(candidates, pa, cfg);
    const auto zb = argmin_of(candidates, pb, cfg);
    const auto common = intersect(za, zb);
    if (common.empty()) {
        o.notes.push_back("argmin sets are disjoint; no instance");
        return o;
    }
    o.instances = 1;
    const auto zu = argmin_of(candidates, pa.concat(pb), cfg);
    if (zu != common) {
        o.violations = 1;
        o.notes.push_back("union picks " + join_indices(candidates, zu) + ", intersection is " +
                          join_indices(candidates, common));
    }
    return o;
}

Profile promote(const Profile& p, AlternativeId a, std::span<const std::size_t> voters) {
    std::vector<StrictRanking> ballots = p.ballots();
    for (std::size_t v : voters) {
        if (v >= ballots.size()) fail(ErrorKind::domain, "voter index out of range");
        std::vector<AlternativeId> order(ballots[v].order().begin(), ballots[v].order().end());
        auto it = std::find(order.begin(), order.end(), a);
        if (it == order.end() || it == order.begin()) continue;
        std::iter_swap(it, it - 1);
        ballots[v] = StrictRanking(std::move(order));
    }
    return Profile(p.num_alternatives(), std::move(ballots));
}

AxiomOutcome check_monotonicity_pair(std::span<const Rule> candidates, const Profile& before, const Profile& after,
                                     AlternativeId a, const AbcConfig& cfg) {
    AxiomOutcome o = outcome("monotonicity", before);
    o.instances = 1;
    const std::size_t rank_before = rank_of(induced_swf(candidates, before, cfg), a);
    const std::size_t rank_after = rank_of(induced_swf(candidates, after, cfg), a);
    if (rank_after > rank_before) {
        o.violations = 1;
        o.notes.push_back("alternative " + std::to_string(a) + " fell from rank " + std::to_string(rank_before) +
                          " to " + std::to_string(rank_after));
    }
    return o;
}

AxiomOutcome check_monotonicity(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg,
                                std::uint64_t rng_seed) {
    if (!p.is_full()) fail(ErrorKind::domain, "monotonicity check needs full rankings");
    const AlternativeId a = top_alternative(induced_swf(candidates, p, cfg));
    return check_monotonicity_pair(candidates, p, promote_random_fraction(p, a, rng_seed), a, cfg);
}

bool check_psc(std::span<const Rule> candidates, const Profile& p, std::size_t k, const AbcConfig& cfg) {
    std::optional<std::size_t> plurality;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const PositionalRule* r = candidates[i].as_positional();
        if (r && !r->fixed && r->family == "plurality") {
            plurality = i;
            break;
        }
    }
    if (!plurality) fail(ErrorKind::config, "plurality must be among the candidates");
    if (!apply_rule(candidates[*plurality], p).is_strict()) {
        fail(ErrorKind::domain, "plurality ranking of the profile has ties");
    }
    const auto z = argmin_of(candidates, shuffle_from(p, 2, k), cfg);
    return z == std::vector<std::size_t>{*plurality};
}

std::vector<std::size_t> welfare_pick(std::span<const Rule> candidates, const Profile& p) {
    if (candidates.empty()) fail(ErrorKind::config, "candidate list is empty");
    if (!p.is_full()) fail(ErrorKind::domain, "welfare utility needs full rankings");
    std::vector<double> welfare;
    for (const auto& rule : candidates) {
        const WeakRanking out = apply_rule(rule, p);
        double total = 0.0;
        for (const auto& ballot : p.ballots()) total -= kt_with_ties(WeakRanking::from_strict(ballot), out);
        welfare.push_back(total);
    }
    const double best = *std::max_element(welfare.begin(), welfare.end());
    std::vector<std::size_t> winners;
    for (std::size_t i = 0; i < welfare.size(); ++i) {
        if (welfare[i] == best) winners.push_back(i);
    }
    return winners;
}

std::string_view to_string(AxiomKind axiom) {
    switch (axiom) {
        case AxiomKind::reversal_symmetry: return "reversal_symmetry";
        case AxiomKind::union_consistency: return "union_consistency";
        case AxiomKind::monotonicity: return "monotonicity";
    }
    return "unknown";
}

AxiomKind axiom_by_name(std::string_view name) {
    for (auto a : {AxiomKind::reversal_symmetry, AxiomKind::union_consistency, AxiomKind::monotonicity}) {
        if (to_string(a) == name) return a;
    }
    fail(ErrorKind::config, "unknown axiom: " + std::string(name));
}

AxiomOutcome violation_rate(AxiomKind axiom, const DistributionSpec& source, std::span<const Rule> candidates,
                            std::size_t n_profiles, const AbcConfig& cfg, std::uint64_t seed) {
    if (n_profiles == 0) fail(ErrorKind::config, "need at least one profile");
    const std::size_t given = candidates.size();
    std::vector<Rule> closed;
    if (axiom == AxiomKind::reversal_symmetry) {
        closed = reversal_closure(candidates, source.m);
        candidates = closed;
    }
    std::vector<AxiomOutcome> rows(n_profiles);
    AbcConfig inner = cfg;
    inner.jobs = 1;
    detail::parallel_for(n_profiles, cfg.jobs, [&](std::size_t i) {
        const Profile p = sample_profile(source, stream_seed(seed, 3 * i));
        AbcConfig local = inner;
        local.seed = stream_seed(seed, 3 * i + 1);
        switch (axiom) {
            case AxiomKind::reversal_symmetry:
                rows[i] = check_reversal_symmetry(candidates, p, local);
                break;
            case AxiomKind::union_consistency: {
                std::vector<std::size_t> even, odd;
                for (std::size_t v = 0; v < p.num_voters(); ++v) (v % 2 ? odd : even).push_back(v);
                rows[i] = check_union_consistency(candidates, p.subset(even), p.subset(odd), local);
                break;
            }
            case AxiomKind::monotonicity:
                rows[i] = check_monotonicity(candidates, p, local, stream_seed(seed, 3 * i + 2));
                break;
        }
    });
    AxiomOutcome total;
    total.axiom = std::string(to_string(axiom));
    total.source = std::string(to_string(source.kind));
    total.m = source.m;
    total.n = source.n;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        total.instances += rows[i].instances;
        total.violations += rows[i].violations;
        if (rows[i].violations) total.notes.push_back("profile " + std::to_string(i) + ": " + rows[i].notes.front());
    }
    if (axiom == AxiomKind::union_consistency) total.notes.push_back("pairs formed by voter index parity");
    for (std::size_t i = given; i < closed.size(); ++i) total.notes.push_back("added " + closed[i].label());
    return total;
}

std::vector<Rule> default_axiom_candidates() {
    std::vector<Rule> out;
    for (auto family : {"plurality", "plurality_veto", "veto", "two_approval", "borda"}) {
        out.push_back(Rule::positional(family));
    }
    return out;
}

// ------------------------------------------------------ swf predicates

std::string_view to_string(Predicate which) {
    switch (which) {
        case Predicate::smith: return "smith";
        case Predicate::condorcet: return "condorcet";
        case Predicate::majority_winner: return "majority_winner";
        case Predicate::pmc: return "pmc";
        case Predicate::unanimity: return "unanimity";
    }
    return "unknown";
}

Predicate predicate_by_name(std::string_view name) {
    for (auto p : {Predicate::smith, Predicate::condorcet, Predicate::majority_winner, Predicate::pmc,
                   Predicate::unanimity}) {
        if (to_string(p) == name) return p;
    }
    fail(ErrorKind::config, "unknown predicate: " + std::string(name));
}

std::optional<WeakRanking> pairwise_majority_ranking(const Profile& p) {
    const std::size_t m = p.num_alternatives();
    std::vector<std::vector<char>> beats(m, std::vector<char>(m, 0));
    std::vector<std::size_t> wins(m, 0);
    for (AlternativeId a = 0; a < m; ++a) {
        for (AlternativeId b = 0; b < m; ++b) {
            if (a != b && pairwise_defeats(p, a, b)) {
                beats[a][b] = 1;
                ++wins[a];
            }
        }
    }
    std::map<std::size_t, std::vector<AlternativeId>, std::greater<>> by_wins;
    for (AlternativeId a = 0; a < m; ++a) by_wins[wins[a]].push_back(a);
    std::vector<std::vector<AlternativeId>> groups;
    for (auto& [w, g] : by_wins) groups.push_back(std::move(g));
    WeakRanking r(std::move(groups));
    const auto idx = r.group_index(m);
    for (AlternativeId a = 0; a < m; ++a) {
        for (AlternativeId b = 0; b < m; ++b) {
            if (a != b && static_cast<bool>(beats[a][b]) != (idx[a] < idx[b])) return std::nullopt;
        }
    }
    return r;
}

bool satisfies(Predicate which, const WeakRanking& r, const Profile& p) {
    const std::size_t m = p.num_alternatives();
    if (r.num_groups() == 0) return m == 0;
    const auto& top = r.groups().front();
    switch (which) {
        case Predicate::smith: {
            const auto smith = smith_set(p);
            return std::includes(smith.begin(), smith.end(), top.begin(), top.end());
        }
        case Predicate::condorcet: {
            const auto smith = smith_set(p);
            if (smith.size() != 1) return true;
            return top == smith;
        }
        case Predicate::majority_winner: {
            std::vector<std::size_t> firsts(m, 0);
            for (const auto& b : p.ballots()) {
                if (!b.empty()) ++firsts[b[0]];
            }
            for (AlternativeId a = 0; a < m; ++a) {
                if (2 * firsts[a] > p.num_voters()) return top == std::vector<AlternativeId>{a};
            }
            return true;
        }
        case Predicate::pmc: {
            const auto pm = pairwise_majority_ranking(p);
            return !pm || r == *pm;
        }
        case Predicate::unanimity: {
            if (p.empty() || !p.is_full()) return true;
            for (const auto& b : p.ballots()) {
                if (b != p[0]) return true;
            }
            return r == WeakRanking::from_strict(p[0]);
        }
    }
    return true;
}

bool monotone_spot_check(const std::function<WeakRanking(const Profile&)>& swf, const Profile& p,
                         std::uint64_t seed) {
    const WeakRanking before = swf(p);
    const AlternativeId a = top_alternative(before);
    const WeakRanking after = swf(promote_random_fraction(p, a, seed));
    return rank_of(after, a) <= rank_of(before, a);
}

}  // namespace rulepick
