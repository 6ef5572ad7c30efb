#include "rulepick/perfpos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "rulepick/axioms.hpp"
#include "rulepick/error.hpp"
#include "parallel.hpp"

namespace rulepick {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kPivotTolerance = 1e-10;

// Dense simplex for max c.x subject to A x <= b, x >= 0, b >= 0, with
// Bland's rule so degenerate pivots cannot cycle.
class Simplex {
public:
    Simplex(std::size_t vars) : vars_(vars) {}

    void add(std::vector<double> coeffs, double rhs) {
        rows_.push_back(std::move(coeffs));
        rhs_.push_back(rhs);
    }

    /// Returns the optimum and writes the primal solution; +inf when unbounded.
    double maximize(const std::vector<double>& objective, std::vector<double>& x) const {
        const std::size_t m = rows_.size(), n = vars_, width = n + m + 1;
        std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
        std::vector<std::size_t> basis(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) t[i][j] = rows_[i][j];
            t[i][n + i] = 1.0;
            t[i][width - 1] = rhs_[i];
            basis[i] = n + i;
        }
        for (std::size_t j = 0; j < n; ++j) t[m][j] = -objective[j];

        while (true) {
            std::size_t enter = width;
            for (std::size_t j = 0; j + 1 < width; ++j) {
                if (t[m][j] < -kPivotTolerance) {
                    enter = j;
                    break;
                }
            }
            if (enter == width) break;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][enter] > kPivotTolerance) best = std::min(best, t[i][width - 1] / t[i][enter]);
            }
            if (best == std::numeric_limits<double>::infinity()) return best;
            std::size_t leave = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][enter] <= kPivotTolerance) continue;
                if (t[i][width - 1] / t[i][enter] > best + kPivotTolerance) continue;
                if (leave == m || basis[i] < basis[leave]) leave = i;
            }
            const double pivot = t[leave][enter];
            for (double& v : t[leave]) v /= pivot;
            for (std::size_t i = 0; i <= m; ++i) {
                if (i == leave || t[i][enter] == 0.0) continue;
                const double f = t[i][enter];
                for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
            }
            basis[leave] = enter;
        }
        x.assign(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n) x[basis[i]] = t[i][width - 1];
        }
        return t[m][width - 1];
    }

private:
    std::size_t vars_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> rhs_;
};

class Search {
public:
    Search(const PositionCounts& s1, const PositionCounts& s2)
        : s1_(s1), s2_(s2), m_(s1.num_alternatives()), length_(s1.num_positions()),
          offset_(static_cast<double>(std::max(s1.column_sum(0), s2.column_sum(0))) + 1.0) {}

    // Depth-first search below a fixed first alternative.
    PerfPosAnswer run(AlternativeId first) {
        PerfPosAnswer answer;
        std::vector<AlternativeId> prefix{first};
        std::vector<char> used(m_, 0);
        used[first] = 1;
        dfs(prefix, used, answer);
        return answer;
    }

private:
    bool dfs(std::vector<AlternativeId>& prefix, std::vector<char>& used, PerfPosAnswer& answer) {
        std::vector<double> s;
        const double margin = solve(prefix, used, s);
        ++answer.explored;
        if (!(margin > kPerfPosMargin)) return false;
        if (prefix.size() == m_) {
            std::vector<double> values{1.0};
            for (double v : s) values.push_back(std::clamp(std::min(v, values.back()), 0.0, 1.0));
            values.push_back(0.0);
            ScoringVector witness = ScoringVector::from_normalized(std::move(values));
            if (!verify_witness(witness, s1_, s2_)) return false;
            answer.yes = true;
            answer.witness = std::move(witness);
            answer.order = StrictRanking(prefix);
            answer.margin = margin;
            return true;
        }
        for (AlternativeId a = 0; a < m_; ++a) {
            if (used[a]) continue;
            used[a] = 1;
            prefix.push_back(a);
            const bool found = dfs(prefix, used, answer);
            prefix.pop_back();
            used[a] = 0;
            if (found) return true;
        }
        return false;
    }

    // Maximum margin by which a vector can order the prefix consecutively and
    // place its last element above every unused alternative, on both sides.
    double solve(const std::vector<AlternativeId>& prefix, const std::vector<char>& used, std::vector<double>& s) {
        const std::size_t interior = length_ - 2;
        const std::size_t vars = interior + 1;  // s_2..s_{L-1}, then margin + offset
        Simplex lp(vars);
        for (std::size_t j = 0; j + 1 < interior; ++j) {
            std::vector<double> row(vars, 0.0);
            row[j + 1] = 1.0;
            row[j] = -1.0;
            lp.add(std::move(row), 0.0);
        }
        if (interior > 0) {
            std::vector<double> row(vars, 0.0);
            row[0] = 1.0;
            lp.add(std::move(row), 1.0);
        }
        auto above = [&](AlternativeId a, AlternativeId b) {
            for (const PositionCounts* side : {&s1_, &s2_}) {
                std::vector<double> row(vars, 0.0);
                for (std::size_t j = 0; j < interior; ++j) {
                    row[j] = -(static_cast<double>(side->at(a, j + 1)) - static_cast<double>(side->at(b, j + 1)));
                }
                row[interior] = 1.0;
                lp.add(std::move(row),
                       offset_ + static_cast<double>(side->at(a, 0)) - static_cast<double>(side->at(b, 0)));
            }
        };
        for (std::size_t i = 0; i + 1 < prefix.size(); ++i) above(prefix[i], prefix[i + 1]);
        for (AlternativeId b = 0; b < m_; ++b) {
            if (!used[b]) above(prefix.back(), b);
        }
        std::vector<double> cap(vars, 0.0);
        cap[interior] = 1.0;
        lp.add(std::move(cap), offset_ + 1.0);

        std::vector<double> objective(vars, 0.0);
        objective[interior] = 1.0;
        std::vector<double> x;
        const double best = lp.maximize(objective, x);
        s.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(interior));
        return best - offset_;
    }

    const PositionCounts& s1_;
    const PositionCounts& s2_;
    std::size_t m_;
    std::size_t length_;
    double offset_;
};

void require_uniform_length(const Profile& p, std::size_t k) {
    for (const auto& b : p.ballots()) {
        if (b.size() != k) fail(ErrorKind::domain, "every ballot must have the same length");
    }
}

void require_equal_sides(const Split& split, std::size_t n) {
    if (split.size() != n) fail(ErrorKind::domain, "split size differs from the number of voters");
    if (split.count(1) != split.count(2)) fail(ErrorKind::domain, "sides must have equal size");
}

}  // namespace

std::pair<PositionCounts, PositionCounts> side_position_counts(const Profile& p, const Split& split,
                                                               std::size_t positions) {
    if (split.size() != p.num_voters()) fail(ErrorKind::domain, "split size differs from the number of voters");
    PositionCounts c1(p.num_alternatives(), positions), c2(p.num_alternatives(), positions);
    for (std::size_t v = 0; v < p.num_voters(); ++v) {
        PositionCounts& c = split.side[v] == 1 ? c1 : c2;
        const auto& b = p[v];
        for (std::size_t j = 0; j < std::min(positions, b.size()); ++j) ++c.at(b[j], j);
    }
    return {std::move(c1), std::move(c2)};
}

PerfPosAnswer decide_k_perfpos(const PositionCounts& side1, const PositionCounts& side2,
                               std::size_t enumeration_limit, std::size_t jobs) {
    const std::size_t m = side1.num_alternatives();
    if (side2.num_alternatives() != m || side2.num_positions() != side1.num_positions()) {
        fail(ErrorKind::domain, "side count tables differ in shape");
    }
    if (side1.num_positions() < 2) fail(ErrorKind::domain, "scoring vectors need at least two positions");
    if (m > enumeration_limit) {
        fail(ErrorKind::limit, "enumeration limit exceeded: m = " + std::to_string(m) + " > " +
                                   std::to_string(enumeration_limit));
    }
    if (side1.column_sum(0) != side2.column_sum(0)) fail(ErrorKind::domain, "sides must have equal size");
    if (m == 0) return {};

    std::vector<PerfPosAnswer> branches(m);
    if (jobs <= 1) {
        PerfPosAnswer total;
        for (AlternativeId a = 0; a < m; ++a) {
            PerfPosAnswer branch = Search(side1, side2).run(a);
            branch.explored += total.explored;
            if (branch.yes) return branch;
            total.explored = branch.explored;
        }
        return total;
    }
    detail::parallel_for(m, jobs, [&](std::size_t a) {
        branches[a] = Search(side1, side2).run(static_cast<AlternativeId>(a));
    });
    std::size_t explored = 0;
    for (auto& branch : branches) {
        explored += branch.explored;
        if (branch.yes) {
            branch.explored = explored;
            return branch;
        }
    }
    PerfPosAnswer none;
    none.explored = explored;
    return none;
}

PerfPosAnswer decide_k_perfpos(const PerfPosInstance& inst, std::size_t enumeration_limit, std::size_t jobs) {
    const Profile& p = inst.profile;
    require_equal_sides(inst.split, p.num_voters());
    const std::size_t k = p.empty() ? p.num_alternatives() : p[0].size();
    require_uniform_length(p, k);
    auto [c1, c2] = side_position_counts(p, inst.split, k);
    return decide_k_perfpos(c1, c2, enumeration_limit, jobs);
}

PerfPosAnswer decide_perfpos(const PerfPosInstance& inst, std::size_t enumeration_limit, std::size_t jobs) {
    if (!inst.profile.is_full()) fail(ErrorKind::domain, "PerfPos needs full rankings");
    return decide_k_perfpos(inst, enumeration_limit, jobs);
}

bool verify_witness(const ScoringVector& s, const PositionCounts& side1, const PositionCounts& side2) {
    const std::size_t m = side1.num_alternatives();
    if (s.size() != side1.num_positions() || s.size() != side2.num_positions()) {
        fail(ErrorKind::domain, "witness length differs from the number of positions");
    }
    std::vector<Rational> weights;
    for (double v : s.values()) weights.emplace_back(v);
    auto totals = [&](const PositionCounts& c) {
        std::vector<Rational> t(m);
        for (AlternativeId a = 0; a < m; ++a) {
            for (std::size_t j = 0; j < s.size(); ++j) t[a] += weights[j] * c.at(a, j);
        }
        return t;
    };
    const auto t1 = totals(side1), t2 = totals(side2);
    for (AlternativeId a = 0; a < m; ++a) {
        for (AlternativeId b = a + 1; b < m; ++b) {
            const Rational d1 = t1[a] - t1[b], d2 = t2[a] - t2[b];
            if (d1 * d2 <= 0) return false;
        }
    }
    return true;
}

bool verify_witness(const ScoringVector& s, const PerfPosInstance& inst) {
    auto [c1, c2] = side_position_counts(inst.profile, inst.split, s.size());
    return verify_witness(s, c1, c2);
}

PerfPosInstance reduce_k_perfpos(const PerfPosInstance& partial) {
    const Profile& p = partial.profile;
    const std::size_t m = p.num_alternatives();
    if (partial.split.size() != p.num_voters()) fail(ErrorKind::domain, "split size differs from the number of voters");
    if (p.empty()) return partial;
    const std::size_t k = p[0].size();
    require_uniform_length(p, k);
    if (k < 2) fail(ErrorKind::domain, "ballots need length at least 2");

    std::vector<StrictRanking> completed;
    completed.reserve(p.num_voters());
    for (const auto& b : p.ballots()) {
        std::vector<AlternativeId> order(b.order().begin(), b.order().end());
        for (AlternativeId a = 0; a < m; ++a) {
            if (!b.contains(a)) order.push_back(a);
        }
        completed.emplace_back(std::move(order));
    }
    const Profile full(m, std::move(completed));

    PerfPosInstance out;
    if (k < m) {
        out.profile = shuffle_from(full, k, 1);
    } else {
        if (m > 12) fail(ErrorKind::limit, "shuffle needs m! copies; m is too large");
        std::size_t copies = 1;
        for (std::size_t i = 2; i <= m; ++i) copies *= i;
        std::vector<StrictRanking> ballots;
        for (const auto& b : full.ballots()) ballots.insert(ballots.end(), copies, b);
        out.profile = Profile(m, std::move(ballots));
    }
    const std::size_t copies = out.profile.num_voters() / p.num_voters();
    for (std::uint8_t side : partial.split.side) out.split.side.insert(out.split.side.end(), copies, side);
    return out;
}

HardInstance generate_hard_instance(const CnfFormula& formula) {
    const std::size_t t = formula.num_vars;
    const std::size_t q = formula.clauses.size();
    if (t == 0) fail(ErrorKind::config, "formula needs at least one variable");
    for (const auto& clause : formula.clauses) {
        if (clause.empty() || clause.size() > 3) fail(ErrorKind::config, "clauses need 1 to 3 literals");
        std::set<std::size_t> vars;
        for (int lit : clause) {
            const auto v = static_cast<std::size_t>(std::abs(lit));
            if (lit == 0 || v > t) fail(ErrorKind::config, "literal outside [1, num_vars]");
            if (!vars.insert(v).second) fail(ErrorKind::config, "a clause mentions a variable twice");
        }
    }
    const std::size_t k = t + 2;
    const std::size_t m = 3 * t + 2 * q + 2;
    const std::uint64_t inv_eps = 7 * (k + 2);
    auto a_id = [&](std::size_t i) { return static_cast<AlternativeId>(i - 1); };
    auto b_id = [&](std::size_t i) { return static_cast<AlternativeId>(t + i - 1); };
    auto c_id = [&](std::size_t i) { return static_cast<AlternativeId>(2 * t + i - 1); };
    auto d_id = [&](std::size_t i) { return static_cast<AlternativeId>(2 * t + q + i - 1); };
    auto e_id = [&](std::size_t j) { return static_cast<AlternativeId>(2 * t + 2 * q + j - 1); };

    HardInstance h{k, PositionCounts(m, k), PositionCounts(m, k), {}, 0};
    auto& m1 = h.side1;
    auto& m2 = h.side2;
    for (std::size_t i = 1; i <= t; ++i) {
        m1.at(a_id(i), 0) += 1 + (k + 3) * (i - 1);
        m1.at(a_id(i), i) += k + 2;
        m1.at(b_id(i), 0) += (k + 3) * (i - 1);
        m1.at(b_id(i), i - 1) += k + 2;
        m1.at(b_id(i), k - 1) += 1;
        m2.at(a_id(i), 0) += 1 + (inv_eps + 1) * (i - 1);
        m2.at(a_id(i), i) += inv_eps;
        m2.at(b_id(i), 0) += (inv_eps + 1) * (i - 1);
        m2.at(b_id(i), i - 1) += inv_eps;
        m2.at(b_id(i), k - 1) += 1;
    }
    for (std::size_t i = 1; i <= q; ++i) {
        const auto& clause = formula.clauses[i - 1];
        const auto z = static_cast<std::uint64_t>(std::count_if(clause.begin(), clause.end(), [](int l) { return l < 0; }));
        m1.at(c_id(i), 0) += t * (k + 3) + 2 * i;
        m1.at(d_id(i), 0) += t * (k + 3) + 2 * i - 1;
        m1.at(d_id(i), k - 1) += 1;
        m2.at(c_id(i), 0) += 2 * z + t * (inv_eps + 1) + 6 * (k + 3) * (i - 1);
        m2.at(c_id(i), k - 1) += 1;
        m2.at(d_id(i), 0) += 1 + t * (inv_eps + 1) + 6 * (k + 3) * (i - 1);
        m2.at(d_id(i), k - 1) += 2 * z;
        for (int lit : clause) {
            const auto j = static_cast<std::size_t>(std::abs(lit));
            if (lit > 0) {
                m2.at(c_id(i), j - 1) += 2 * (k + 2);
                m2.at(d_id(i), j) += 2 * (k + 2);
            } else {
                m2.at(c_id(i), j) += 2 * (k + 2);
                m2.at(d_id(i), j - 1) += 2 * (k + 2);
            }
        }
    }

    // Every listed voter fills its other k - 1 positions with e_j at position j.
    const std::size_t core = 2 * t + 2 * q;
    std::uint64_t n[2] = {0, 0};
    for (AlternativeId f = 0; f < core; ++f) {
        n[0] += m1.row_sum(f);
        n[1] += m2.row_sum(f);
    }
    const int big = n[1] > n[0] ? 1 : 0;
    std::uint64_t pad[2];
    pad[big] = (14 * k + 28) * n[big];
    pad[1 - big] = (14 * k + 29) * n[big] - n[1 - big];
    h.voters_per_side = (14 * k + 29) * n[big];
    PositionCounts* sides[2] = {&m1, &m2};
    for (int s = 0; s < 2; ++s) {
        for (std::size_t j = 1; j <= k; ++j) {
            std::uint64_t others = 0;
            for (AlternativeId f = 0; f < core; ++f) others += sides[s]->row_sum(f) - sides[s]->at(f, j - 1);
            sides[s]->at(e_id(j), j - 1) = others + pad[s];
        }
    }

    for (std::size_t i = 1; i <= t; ++i) h.names.push_back("a" + std::to_string(i));
    for (std::size_t i = 1; i <= t; ++i) h.names.push_back("b" + std::to_string(i));
    for (std::size_t i = 1; i <= q; ++i) h.names.push_back("c" + std::to_string(i));
    for (std::size_t i = 1; i <= q; ++i) h.names.push_back("d" + std::to_string(i));
    for (std::size_t j = 1; j <= k; ++j) h.names.push_back("e" + std::to_string(j));
    return h;
}

PerfPosInstance hard_instance_ballots(const HardInstance& h) {
    const std::size_t m = h.side1.num_alternatives();
    const std::size_t k = h.k;
    const std::size_t core = m - k;
    std::vector<StrictRanking> ballots;
    Split split;
    std::vector<AlternativeId> padding(k);
    std::iota(padding.begin(), padding.end(), static_cast<AlternativeId>(core));
    const PositionCounts* sides[2] = {&h.side1, &h.side2};
    for (std::uint8_t s = 0; s < 2; ++s) {
        std::uint64_t listed = 0;
        for (AlternativeId f = 0; f < core; ++f) {
            for (std::size_t i = 0; i < k; ++i) {
                std::vector<AlternativeId> order = padding;
                order[i] = f;
                const std::uint64_t count = sides[s]->at(f, i);
                ballots.insert(ballots.end(), count, StrictRanking(order));
                listed += count;
            }
        }
        const std::uint64_t pad = h.voters_per_side - listed;
        ballots.insert(ballots.end(), pad, StrictRanking(padding));
        split.side.insert(split.side.end(), h.voters_per_side, static_cast<std::uint8_t>(s + 1));
    }
    return {Profile(m, std::move(ballots)), std::move(split)};
}

}  // namespace rulepick
