#include "rulepick/core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rulepick/error.hpp"

namespace rulepick {

StrictRanking::StrictRanking(std::vector<AlternativeId> order) : order_(std::move(order)) {
    std::vector<AlternativeId> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        fail(ErrorKind::domain, "duplicate alternative in strict ranking");
    }
}

bool StrictRanking::contains(AlternativeId a) const {
    return std::find(order_.begin(), order_.end(), a) != order_.end();
}

WeakRanking::WeakRanking(std::vector<std::vector<AlternativeId>> groups)
    : groups_(std::move(groups)) {
    std::vector<AlternativeId> all;
    for (auto& g : groups_) {
        if (g.empty()) fail(ErrorKind::domain, "empty tie-group in weak ranking");
        std::sort(g.begin(), g.end());
        all.insert(all.end(), g.begin(), g.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        fail(ErrorKind::domain, "alternative appears in two tie-groups");
    }
}

WeakRanking WeakRanking::all_tied(std::size_t m) {
    if (m == 0) return WeakRanking{};
    std::vector<AlternativeId> ids(m);
    std::iota(ids.begin(), ids.end(), AlternativeId{0});
    WeakRanking r;
    r.groups_.push_back(std::move(ids));
    return r;
}

WeakRanking WeakRanking::from_strict(const StrictRanking& r) {
    WeakRanking out;
    out.groups_.reserve(r.size());
    for (AlternativeId a : r.order()) out.groups_.push_back({a});
    return out;
}

std::size_t WeakRanking::size() const noexcept {
    std::size_t total = 0;
    for (const auto& g : groups_) total += g.size();
    return total;
}

std::vector<AlternativeId> WeakRanking::alternatives() const {
    std::vector<AlternativeId> all;
    all.reserve(size());
    for (const auto& g : groups_) all.insert(all.end(), g.begin(), g.end());
    std::sort(all.begin(), all.end());
    return all;
}

bool WeakRanking::is_strict() const noexcept {
    return std::all_of(groups_.begin(), groups_.end(),
                       [](const auto& g) { return g.size() == 1; });
}

std::vector<int> WeakRanking::group_index(std::size_t m) const {
    std::vector<int> index(m, -1);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        for (AlternativeId a : groups_[g]) {
            if (a >= m) fail(ErrorKind::domain, "alternative id out of range");
            index[a] = static_cast<int>(g);
        }
    }
    return index;
}

std::string WeakRanking::to_string() const {
    std::ostringstream out;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (g) out << " > ";
        if (groups_[g].size() == 1) {
            out << groups_[g][0];
            continue;
        }
        out << '{';
        for (std::size_t i = 0; i < groups_[g].size(); ++i) {
            if (i) out << ',';
            out << groups_[g][i];
        }
        out << '}';
    }
    return out.str();
}

Profile::Profile(std::size_t m, std::vector<StrictRanking> ballots)
    : m_(m), ballots_(std::move(ballots)) {
    for (const auto& b : ballots_) {
        for (AlternativeId a : b.order()) {
            if (a >= m_) fail(ErrorKind::domain, "ballot mentions alternative outside [0, m)");
        }
    }
}

bool Profile::is_full() const noexcept {
    return std::all_of(ballots_.begin(), ballots_.end(),
                       [this](const StrictRanking& b) { return b.size() == m_; });
}

std::size_t Profile::max_ballot_length() const noexcept {
    std::size_t len = 0;
    for (const auto& b : ballots_) len = std::max(len, b.size());
    return len;
}

std::vector<std::size_t> Profile::appearance_counts() const {
    std::vector<std::size_t> counts(m_, 0);
    for (const auto& b : ballots_) {
        for (AlternativeId a : b.order()) ++counts[a];
    }
    return counts;
}

Profile Profile::subset(std::span<const std::size_t> voters) const {
    Profile out;
    out.m_ = m_;
    out.ballots_.reserve(voters.size());
    for (std::size_t v : voters) out.ballots_.push_back(ballots_.at(v));
    return out;
}

Profile Profile::concat(const Profile& other) const {
    if (other.m_ != m_) fail(ErrorKind::domain, "profiles over different alternative counts");
    Profile out = *this;
    out.ballots_.insert(out.ballots_.end(), other.ballots_.begin(), other.ballots_.end());
    return out;
}

std::uint64_t PositionCounts::row_sum(AlternativeId a) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < positions_; ++j) s += at(a, j);
    return s;
}

std::uint64_t PositionCounts::column_sum(std::size_t position) const {
    std::uint64_t s = 0;
    for (AlternativeId a = 0; a < m_; ++a) s += at(a, position);
    return s;
}

std::size_t rank_of(const WeakRanking& r, AlternativeId a) {
    std::size_t above = 0;
    for (const auto& g : r.groups()) {
        if (std::binary_search(g.begin(), g.end(), a)) return above + 1;
        above += g.size();
    }
    fail(ErrorKind::domain, "unranked alternative");
}

StrictRanking reverse(const StrictRanking& r) {
    std::vector<AlternativeId> order(r.order().rbegin(), r.order().rend());
    return StrictRanking(std::move(order));
}

WeakRanking reverse(const WeakRanking& r) {
    std::vector<std::vector<AlternativeId>> groups(r.groups().rbegin(), r.groups().rend());
    return WeakRanking(std::move(groups));
}

Profile reverse(const Profile& p) {
    std::vector<StrictRanking> ballots;
    ballots.reserve(p.num_voters());
    for (const auto& b : p.ballots()) ballots.push_back(reverse(b));
    return Profile(p.num_alternatives(), std::move(ballots));
}

PositionCounts position_counts(const Profile& p) {
    const std::size_t m = p.num_alternatives();
    PositionCounts counts(m, m);
    for (const auto& b : p.ballots()) {
        for (std::size_t j = 0; j < b.size(); ++j) ++counts.at(b[j], j);
    }
    return counts;
}

std::vector<std::int64_t> pairwise_counts(const Profile& p) {
    const std::size_t m = p.num_alternatives();
    std::vector<std::int64_t> n(m * m, 0);
    for (const auto& b : p.ballots()) {
        const auto order = b.order();
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (std::size_t j = i + 1; j < order.size(); ++j) {
                ++n[order[i] * m + order[j]];
            }
        }
    }
    return n;
}

bool pairwise_defeats(const Profile& p, AlternativeId a, AlternativeId b) {
    std::int64_t ab = 0, ba = 0;
    for (const auto& ballot : p.ballots()) {
        const auto order = ballot.order();
        auto ia = std::find(order.begin(), order.end(), a);
        auto ib = std::find(order.begin(), order.end(), b);
        if (ia == order.end() || ib == order.end()) continue;
        (ia < ib ? ab : ba) += 1;
    }
    return ab > ba;
}

std::vector<AlternativeId> smith_set(const Profile& p) {
    const std::size_t m = p.num_alternatives();
    if (m == 0) return {};
    const auto n = pairwise_counts(p);
    auto defeats = [&](AlternativeId a, AlternativeId b) { return n[a * m + b] > n[b * m + a]; };

    // Smith members strictly out-win non-members on Copeland wins, so the set
    // is a prefix of the win-sorted order.
    std::vector<std::size_t> wins(m, 0);
    for (AlternativeId a = 0; a < m; ++a) {
        for (AlternativeId b = 0; b < m; ++b) {
            if (a != b && defeats(a, b)) ++wins[a];
        }
    }
    std::vector<AlternativeId> order(m);
    std::iota(order.begin(), order.end(), AlternativeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](AlternativeId x, AlternativeId y) { return wins[x] > wins[y]; });

    for (std::size_t k = 1; k <= m; ++k) {
        bool dominating = true;
        for (std::size_t i = 0; i < k && dominating; ++i) {
            for (std::size_t j = k; j < m; ++j) {
                if (!defeats(order[i], order[j])) {
                    dominating = false;
                    break;
                }
            }
        }
        if (dominating) {
            std::vector<AlternativeId> s(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(s.begin(), s.end());
            return s;
        }
    }
    return order;  // unreachable: k = m always dominates vacuously
}

}  // namespace rulepick
