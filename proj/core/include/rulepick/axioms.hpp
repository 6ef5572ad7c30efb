#pragma once

// Shuffled profiles, the SWF induced by rule picking, checkers for the
// rule-picking axioms, and predicates for axioms a picked rule inherits.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rulepick/abc.hpp"
#include "rulepick/data.hpp"

namespace rulepick {

struct ShuffleSpec {
    std::vector<std::size_t> positions;  ///< 1-based positions to permute
    std::size_t k = 1;                   ///< copies multiplier
};

/// k * m! copies of every ballot, split into |S|! equal groups; each group
/// permutes the alternatives at positions S by its own permutation
/// (lexicographic order of permutations). Requires a full profile.
Profile shuffle(const Profile& p, const ShuffleSpec& spec);
/// Shuffle with respect to positions [first, m].
Profile shuffle_from(const Profile& p, std::size_t first_position, std::size_t k);

/// The picked rule applied to the whole profile.
WeakRanking induced_swf(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg);

struct AxiomOutcome {
    std::string axiom;
    std::string source;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t instances = 0;
    std::size_t violations = 0;
    std::vector<std::string> notes;

    double rate() const noexcept {
        return instances ? static_cast<double>(violations) / static_cast<double>(instances) : 0.0;
    }
};

/// Index of each candidate's reversed rule within the list; throws
/// ErrorKind::config when the list is not closed under reversal.
std::vector<std::size_t> reversal_pairing(std::span<const Rule> candidates);
/// The candidates followed by the reversed vector (at length m) of every
/// candidate whose reverse is missing.
std::vector<Rule> reversal_closure(std::span<const Rule> candidates, std::size_t m);

/// One instance: the argmin on reverse(p), computed with the same split
/// sequence, must be the reversal of the argmin on p.
AxiomOutcome check_reversal_symmetry(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg);

/// One instance when the argmin sets of pa and pb intersect (else zero
/// instances): the argmin on pa + pb must equal that intersection.
AxiomOutcome check_union_consistency(std::span<const Rule> candidates, const Profile& pa, const Profile& pb,
                                     const AbcConfig& cfg);

/// Copy of p in which each listed voter moves `a` up one position.
Profile promote(const Profile& p, AlternativeId a, std::span<const std::size_t> voters);

/// Promotes the induced top alternative for a U(0.2, 0.8) fraction of
/// voters; a violation is a worse rank afterwards. Requires a full profile.
AxiomOutcome check_monotonicity(std::span<const Rule> candidates, const Profile& p, const AbcConfig& cfg,
                                std::uint64_t rng_seed);
/// Monotonicity on a given pair: `after` is `before` with `a` promoted.
AxiomOutcome check_monotonicity_pair(std::span<const Rule> candidates, const Profile& before, const Profile& after,
                                     AlternativeId a, const AbcConfig& cfg);

/// True iff the picker selects exactly {plurality} on the [2, m]
/// k-shuffle of p. Requires plurality among the candidates and an untied
/// plurality ranking of p.
bool check_psc(std::span<const Rule> candidates, const Profile& p, std::size_t k, const AbcConfig& cfg);

/// Candidates maximizing total utility -KT(ballot, rule output) over voters.
std::vector<std::size_t> welfare_pick(std::span<const Rule> candidates, const Profile& p);

enum class AxiomKind { reversal_symmetry, union_consistency, monotonicity };
std::string_view to_string(AxiomKind axiom);
AxiomKind axiom_by_name(std::string_view name);

/// Samples n_profiles profiles and runs one instance per profile. Union
/// consistency splits each profile's voters by index parity; reversal
/// symmetry runs on reversal_closure(candidates, m).
AxiomOutcome violation_rate(AxiomKind axiom, const DistributionSpec& source, std::span<const Rule> candidates,
                            std::size_t n_profiles, const AbcConfig& cfg, std::uint64_t seed);

/// The candidate set used for violation rates: plurality, plurality_veto,
/// veto, two_approval, borda.
std::vector<Rule> default_axiom_candidates();

enum class Predicate { smith, condorcet, majority_winner, pmc, unanimity };
std::string_view to_string(Predicate which);
Predicate predicate_by_name(std::string_view name);

/// Whether output r on profile p meets the axiom's requirement; vacuously
/// true when the axiom's premise does not hold for p.
bool satisfies(Predicate which, const WeakRanking& r, const Profile& p);

/// The weak ranking whose strict part is pairwise defeat, if one exists.
std::optional<WeakRanking> pairwise_majority_ranking(const Profile& p);

/// Promotes the swf's top alternative (smallest id in the top group) for a
/// random subset of voters and checks that its rank does not worsen.
bool monotone_spot_check(const std::function<WeakRanking(const Profile&)>& swf, const Profile& p,
                         std::uint64_t seed);

}  // namespace rulepick
