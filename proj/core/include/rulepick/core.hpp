#pragma once

// Domain types shared by every module: alternatives, strict (possibly
// partial) ballots, weak rankings as ordered tie-groups, and profiles.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rulepick {

/// Dense index of an alternative, in [0, m).
using AlternativeId = std::uint32_t;

/// A strict order over a subset of the alternatives. A ballot covering fewer
/// than m alternatives is a partial (top-truncated style) ranking.
class StrictRanking {
public:
    StrictRanking() = default;
    explicit StrictRanking(std::vector<AlternativeId> order);
    StrictRanking(std::initializer_list<AlternativeId> order)
        : StrictRanking(std::vector<AlternativeId>(order)) {}

    std::span<const AlternativeId> order() const noexcept { return order_; }
    std::size_t size() const noexcept { return order_.size(); }
    bool empty() const noexcept { return order_.empty(); }
    AlternativeId operator[](std::size_t position) const { return order_[position]; }
    bool contains(AlternativeId a) const;

    friend bool operator==(const StrictRanking&, const StrictRanking&) = default;
    friend auto operator<=>(const StrictRanking&, const StrictRanking&) = default;

private:
    std::vector<AlternativeId> order_;
};

/// Ordered tie-groups; a is above b iff a's group precedes b's group.
/// Ids inside a group are kept sorted so equality is structural.
class WeakRanking {
public:
    WeakRanking() = default;
    explicit WeakRanking(std::vector<std::vector<AlternativeId>> groups);
    WeakRanking(std::initializer_list<std::vector<AlternativeId>> groups)
        : WeakRanking(std::vector<std::vector<AlternativeId>>(groups)) {}

    /// The "empty ranking": every alternative in [0, m) tied in one group.
    static WeakRanking all_tied(std::size_t m);
    static WeakRanking from_strict(const StrictRanking& r);

    const std::vector<std::vector<AlternativeId>>& groups() const noexcept { return groups_; }
    std::size_t num_groups() const noexcept { return groups_.size(); }
    /// Number of ranked alternatives.
    std::size_t size() const noexcept;
    /// Ranked alternatives in ascending id order.
    std::vector<AlternativeId> alternatives() const;
    bool is_strict() const noexcept;
    /// Group index per alternative id in [0, m); -1 for unranked ids.
    std::vector<int> group_index(std::size_t m) const;
    std::string to_string() const;

    friend bool operator==(const WeakRanking&, const WeakRanking&) = default;

private:
    std::vector<std::vector<AlternativeId>> groups_;
};

/// A sequence of ballots over m alternatives; index = voter id.
class Profile {
public:
    Profile() = default;
    Profile(std::size_t m, std::vector<StrictRanking> ballots);

    std::size_t num_alternatives() const noexcept { return m_; }
    std::size_t num_voters() const noexcept { return ballots_.size(); }
    bool empty() const noexcept { return ballots_.empty(); }
    const std::vector<StrictRanking>& ballots() const noexcept { return ballots_; }
    const StrictRanking& operator[](std::size_t voter) const { return ballots_[voter]; }

    /// True iff every ballot ranks all m alternatives.
    bool is_full() const noexcept;
    std::size_t max_ballot_length() const noexcept;
    /// Number of ballots containing each alternative.
    std::vector<std::size_t> appearance_counts() const;
    /// Restriction to the listed voters, in the listed order.
    Profile subset(std::span<const std::size_t> voters) const;
    /// Concatenation of two profiles over the same alternatives.
    Profile concat(const Profile& other) const;

    friend bool operator==(const Profile&, const Profile&) = default;

private:
    std::size_t m_ = 0;
    std::vector<StrictRanking> ballots_;
};

/// counts[a][j]: number of ballots placing a at 0-based position j.
class PositionCounts {
public:
    PositionCounts(std::size_t m, std::size_t positions)
        : m_(m), positions_(positions), counts_(m * positions, 0) {}

    std::size_t num_alternatives() const noexcept { return m_; }
    std::size_t num_positions() const noexcept { return positions_; }
    std::uint64_t at(AlternativeId a, std::size_t position) const {
        return counts_[a * positions_ + position];
    }
    std::uint64_t& at(AlternativeId a, std::size_t position) {
        return counts_[a * positions_ + position];
    }
    std::uint64_t row_sum(AlternativeId a) const;
    std::uint64_t column_sum(std::size_t position) const;

private:
    std::size_t m_;
    std::size_t positions_;
    std::vector<std::uint64_t> counts_;
};

/// 1 + number of alternatives strictly above a. Throws if a is unranked.
std::size_t rank_of(const WeakRanking& r, AlternativeId a);

StrictRanking reverse(const StrictRanking& r);
WeakRanking reverse(const WeakRanking& r);
Profile reverse(const Profile& p);

/// Position counts over m columns; partial ballots fill only their prefix.
PositionCounts position_counts(const Profile& p);

/// Row-major m x m matrix: entry (a, b) counts voters ranking both with a above b.
std::vector<std::int64_t> pairwise_counts(const Profile& p);

/// Strict majority among voters that rank both a and b.
bool pairwise_defeats(const Profile& p, AlternativeId a, AlternativeId b);

/// Smallest set whose members each pairwise defeat every non-member.
/// Returned in ascending id order; never empty for m >= 1.
std::vector<AlternativeId> smith_set(const Profile& p);

}  // namespace rulepick
