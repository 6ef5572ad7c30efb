#pragma once

// Synthetic profile generators and readers/writers for profile, PrefLib,
// review-score and medal-table files.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rulepick/abc.hpp"
#include "rulepick/core.hpp"

namespace rulepick {

enum class Distribution { mallows, plackett_luce, impartial_culture, urn, single_peaked };

std::string_view to_string(Distribution d);
Distribution distribution_by_name(std::string_view name);

struct DistributionSpec {
    Distribution kind = Distribution::impartial_culture;
    std::size_t m = 0;
    std::size_t n = 0;
    /// Mallows dispersion, 0 < phi <= 1.
    double phi = 0.4;
    /// Mallows center; identity when absent.
    std::optional<StrictRanking> center;
    /// Plackett-Luce strengths; default_pl_strengths(m) when empty.
    std::vector<double> alpha;
    /// Urn replacement parameter; drawn from Gamma(0.8, 1) per profile when absent.
    std::optional<double> urn_alpha;
    /// When nonzero, every voter keeps ballot_length items and every item is
    /// kept by `coverage` voters (see assign_partial).
    std::size_t ballot_length = 0;
    std::size_t coverage = 0;
};

/// alpha_i = exp(0.5 (m - i)) for 1-based i.
std::vector<double> default_pl_strengths(std::size_t m);

/// The distribution's reference order: the Mallows center, or alternatives
/// by decreasing Plackett-Luce strength (ties by id). Throws for other kinds.
StrictRanking ground_truth(const DistributionSpec& spec);

Profile sample_profile(const DistributionSpec& spec, std::uint64_t seed);

/// Keeps, for every voter, a ballot_length-subset of its ranking so that each
/// item is kept exactly `coverage` times. Requires n * ballot_length = m * coverage.
Profile assign_partial(const Profile& full, std::size_t ballot_length, std::size_t coverage, std::uint64_t seed);

// ------------------------------------------------------------------ files

struct NamedProfile {
    Profile profile;
    std::vector<std::string> names;  ///< may be empty
};

enum class PreflibFormat { soc, soi, toc };

/// Reads "count: ranking" lines with optional "# KEY: value" headers; ids are
/// 1-based. Ties are rejected. Without a NUMBER ALTERNATIVES header, m is the
/// largest id seen. soc requires every ballot to rank all alternatives. When
/// `format` is absent it comes from the DATA TYPE header, else soi.
NamedProfile parse_preflib(std::string_view text, std::optional<PreflibFormat> format = std::nullopt);

struct WeakBallots {
    std::size_t m = 0;
    std::vector<std::string> names;
    std::vector<WeakRanking> ballots;
};
/// Like parse_preflib but keeps tie-groups (toc files).
WeakBallots parse_preflib_weak(std::string_view text);

struct ScoreTable {
    std::vector<std::string> items;    ///< in order of first appearance
    ItemScores scores;                 ///< parallel to items
    std::vector<std::string> dropped;  ///< items below min_reviews
};

/// Rows item,reviewer,score with an optional header row.
ScoreTable parse_scores_csv(std::string_view text, std::size_t min_reviews = 0);

/// Rows event_id,rank,country: one ballot per event, ordered by rank.
NamedProfile parse_medals_csv(std::string_view text);

/// {"m": int, "names": [...], "ballots": [[ids...], ...]}
NamedProfile parse_profile_json(std::string_view text);
std::string profile_to_json(const NamedProfile& p);

/// Profile JSON plus "sides": [1|2 per voter].
struct SidedProfile {
    NamedProfile profile;
    Split split;
};
SidedProfile parse_sided_json(std::string_view text);
std::string sided_to_json(const SidedProfile& p);

/// Whole file, or standard input for "-".
std::string read_text(const std::string& path);

/// Chooses the reader by extension: .json, .soc/.soi/.toc, else tries JSON.
NamedProfile load_profile(const std::string& path);

}  // namespace rulepick
