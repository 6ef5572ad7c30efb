#include "rulepick/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rulepick/error.hpp"
#include "rulepick/random.hpp"

namespace rulepick {

namespace {

using json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        std::string_view line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        start = pos + 1;
    }
    return out;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::string buf(s);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

StrictRanking uniform_order(std::size_t m, std::mt19937_64& rng) {
    std::vector<AlternativeId> order(m);
    std::iota(order.begin(), order.end(), AlternativeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    return StrictRanking(std::move(order));
}

StrictRanking mallows_order(const StrictRanking& center, double phi, std::mt19937_64& rng) {
    // Repeated insertion: the i-th center item lands at slot j with weight phi^(i - j).
    std::vector<AlternativeId> order;
    order.reserve(center.size());
    std::vector<double> weights;
    for (std::size_t i = 0; i < center.size(); ++i) {
        weights.assign(i + 1, 0.0);
        for (std::size_t j = 0; j <= i; ++j) weights[j] = std::pow(phi, static_cast<double>(i - j));
        std::discrete_distribution<std::size_t> slot(weights.begin(), weights.end());
        order.insert(order.begin() + static_cast<std::ptrdiff_t>(slot(rng)), center[i]);
    }
    return StrictRanking(std::move(order));
}

StrictRanking pl_order(const std::vector<double>& alpha, std::mt19937_64& rng) {
    std::vector<AlternativeId> remaining(alpha.size());
    std::iota(remaining.begin(), remaining.end(), AlternativeId{0});
    std::vector<AlternativeId> order;
    order.reserve(alpha.size());
    std::vector<double> w;
    while (!remaining.empty()) {
        w.clear();
        for (AlternativeId a : remaining) w.push_back(alpha[a]);
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        const std::size_t i = pick(rng);
        order.push_back(remaining[i]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return StrictRanking(std::move(order));
}

StrictRanking single_peaked_order(std::size_t m, std::mt19937_64& rng) {
    // Peel the worst alternative off either end of the axis; the last one left is the peak.
    std::vector<AlternativeId> worst_first;
    worst_first.reserve(m);
    std::size_t lo = 0, hi = m;
    std::bernoulli_distribution left(0.5);
    while (hi - lo > 1) {
        if (left(rng)) worst_first.push_back(static_cast<AlternativeId>(lo++));
        else worst_first.push_back(static_cast<AlternativeId>(--hi));
    }
    if (m) worst_first.push_back(static_cast<AlternativeId>(lo));
    return StrictRanking(std::vector<AlternativeId>(worst_first.rbegin(), worst_first.rend()));
}

void validate(const DistributionSpec& spec) {
    if (spec.m == 0) fail(ErrorKind::config, "m must be positive");
    if (spec.kind == Distribution::mallows) {
        if (!(spec.phi > 0.0 && spec.phi <= 1.0)) fail(ErrorKind::config, "phi must lie in (0, 1]");
        if (spec.center && (spec.center->size() != spec.m)) fail(ErrorKind::config, "center must rank all m alternatives");
        if (spec.center) {
            for (AlternativeId a : spec.center->order()) {
                if (a >= spec.m) fail(ErrorKind::config, "center mentions an alternative outside [0, m)");
            }
        }
    }
    if (spec.kind == Distribution::plackett_luce && !spec.alpha.empty()) {
        if (spec.alpha.size() != spec.m) fail(ErrorKind::config, "alpha needs one strength per alternative");
        for (double a : spec.alpha) {
            if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::config, "alpha entries must be positive");
        }
    }
    if (spec.urn_alpha && !(*spec.urn_alpha >= 0.0)) fail(ErrorKind::config, "urn alpha must be nonnegative");
    if (spec.ballot_length || spec.coverage) {
        if (spec.ballot_length == 0 || spec.coverage == 0 || spec.ballot_length > spec.m ||
            spec.coverage > spec.n || spec.n * spec.ballot_length != spec.m * spec.coverage) {
            fail(ErrorKind::config, "infeasible coverage: need n * ballot_length = m * coverage");
        }
    }
}

std::vector<std::string> names_from_json(const json& j, std::size_t m) {
    std::vector<std::string> names;
    if (!j.contains("names")) return names;
    for (const auto& n : j.at("names")) names.push_back(n.get<std::string>());
    if (!names.empty() && names.size() != m) fail(ErrorKind::input, "names must list m entries");
    return names;
}

}  // namespace

// ------------------------------------------------------------- generators

std::string_view to_string(Distribution d) {
    switch (d) {
        case Distribution::mallows: return "mallows";
        case Distribution::plackett_luce: return "plackett_luce";
        case Distribution::impartial_culture: return "ic";
        case Distribution::urn: return "urn";
        case Distribution::single_peaked: return "single_peaked";
    }
    return "unknown";
}

Distribution distribution_by_name(std::string_view name) {
    for (auto d : {Distribution::mallows, Distribution::plackett_luce, Distribution::impartial_culture,
                   Distribution::urn, Distribution::single_peaked}) {
        if (to_string(d) == name) return d;
    }
    if (name == "pl") return Distribution::plackett_luce;
    if (name == "impartial_culture") return Distribution::impartial_culture;
    fail(ErrorKind::config, "unknown distribution: " + std::string(name));
}

std::vector<double> default_pl_strengths(std::size_t m) {
    std::vector<double> alpha(m);
    for (std::size_t i = 0; i < m; ++i) alpha[i] = std::exp(0.5 * static_cast<double>(m - (i + 1)));
    return alpha;
}

StrictRanking ground_truth(const DistributionSpec& spec) {
    if (spec.kind == Distribution::mallows) {
        if (spec.center) return *spec.center;
        std::vector<AlternativeId> id(spec.m);
        std::iota(id.begin(), id.end(), AlternativeId{0});
        return StrictRanking(std::move(id));
    }
    if (spec.kind == Distribution::plackett_luce) {
        const auto alpha = spec.alpha.empty() ? default_pl_strengths(spec.m) : spec.alpha;
        std::vector<AlternativeId> order(spec.m);
        std::iota(order.begin(), order.end(), AlternativeId{0});
        std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return alpha[x] > alpha[y]; });
        return StrictRanking(std::move(order));
    }
    fail(ErrorKind::config, "distribution has no reference ranking: " + std::string(to_string(spec.kind)));
}

Profile sample_profile(const DistributionSpec& spec, std::uint64_t seed) {
    validate(spec);
    std::mt19937_64 rng = stream_rng(seed, 0);
    std::vector<StrictRanking> ballots;
    ballots.reserve(spec.n);
    switch (spec.kind) {
        case Distribution::mallows: {
            const StrictRanking center = ground_truth(spec);
            for (std::size_t v = 0; v < spec.n; ++v) ballots.push_back(mallows_order(center, spec.phi, rng));
            break;
        }
        case Distribution::plackett_luce: {
            const auto alpha = spec.alpha.empty() ? default_pl_strengths(spec.m) : spec.alpha;
            for (std::size_t v = 0; v < spec.n; ++v) ballots.push_back(pl_order(alpha, rng));
            break;
        }
        case Distribution::impartial_culture:
            for (std::size_t v = 0; v < spec.n; ++v) ballots.push_back(uniform_order(spec.m, rng));
            break;
        case Distribution::urn: {
            double alpha = 0.0;
            if (spec.urn_alpha) {
                alpha = *spec.urn_alpha;
            } else {
                std::gamma_distribution<double> gamma(0.8, 1.0);
                alpha = gamma(rng);
            }
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (std::size_t v = 0; v < spec.n; ++v) {
                // Fresh order with probability 1 / (1 + v alpha), else copy an earlier ballot.
                if (v == 0 || unit(rng) * (1.0 + static_cast<double>(v) * alpha) < 1.0) {
                    ballots.push_back(uniform_order(spec.m, rng));
                } else {
                    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
                    ballots.push_back(ballots[pick(rng)]);
                }
            }
            break;
        }
        case Distribution::single_peaked:
            for (std::size_t v = 0; v < spec.n; ++v) ballots.push_back(single_peaked_order(spec.m, rng));
            break;
    }
    Profile full(spec.m, std::move(ballots));
    if (spec.ballot_length == 0) return full;
    return assign_partial(full, spec.ballot_length, spec.coverage, stream_seed(seed, 1));
}

Profile assign_partial(const Profile& full, std::size_t ballot_length, std::size_t coverage, std::uint64_t seed) {
    const std::size_t m = full.num_alternatives();
    const std::size_t n = full.num_voters();
    if (!full.is_full()) fail(ErrorKind::domain, "assign_partial needs full rankings");
    if (ballot_length == 0 || ballot_length > m || coverage > n || n * ballot_length != m * coverage) {
        fail(ErrorKind::config, "infeasible coverage: need n * ballot_length = m * coverage");
    }
    std::mt19937_64 rng(seed);
    std::vector<AlternativeId> cells;
    cells.reserve(m * coverage);
    for (std::size_t c = 0; c < coverage; ++c) {
        std::vector<AlternativeId> perm(m);
        std::iota(perm.begin(), perm.end(), AlternativeId{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        cells.insert(cells.end(), perm.begin(), perm.end());
    }
    auto cell = [&](std::size_t row, std::size_t col) -> AlternativeId& { return cells[row * ballot_length + col]; };
    auto row_has = [&](std::size_t row, AlternativeId a, std::size_t skip_col) {
        for (std::size_t c = 0; c < ballot_length; ++c) {
            if (c != skip_col && cell(row, c) == a) return true;
        }
        return false;
    };

    // Repair duplicates within a row by swapping with a cell elsewhere that
    // keeps both rows duplicate-free; item counts are unchanged by swaps.
    std::vector<std::size_t> other(n * ballot_length);
    std::iota(other.begin(), other.end(), std::size_t{0});
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t col = 0; col < ballot_length; ++col) {
            const AlternativeId x = cell(row, col);
            if (!row_has(row, x, col)) continue;
            std::shuffle(other.begin(), other.end(), rng);
            bool fixed = false;
            for (std::size_t idx : other) {
                const std::size_t r2 = idx / ballot_length, c2 = idx % ballot_length;
                if (r2 == row) continue;
                const AlternativeId y = cell(r2, c2);
                if (row_has(row, y, col) || row_has(r2, x, c2)) continue;
                std::swap(cell(row, col), cell(r2, c2));
                fixed = true;
                break;
            }
            if (!fixed) fail(ErrorKind::limit, "could not balance the partial assignment");
        }
    }

    std::vector<StrictRanking> ballots;
    ballots.reserve(n);
    std::vector<char> keep(m);
    for (std::size_t row = 0; row < n; ++row) {
        std::fill(keep.begin(), keep.end(), 0);
        for (std::size_t c = 0; c < ballot_length; ++c) keep[cell(row, c)] = 1;
        std::vector<AlternativeId> order;
        order.reserve(ballot_length);
        for (AlternativeId a : full[row].order()) {
            if (keep[a]) order.push_back(a);
        }
        ballots.emplace_back(std::move(order));
    }
    return Profile(m, std::move(ballots));
}

// ----------------------------------------------------------------- preflib

namespace {

struct PreflibRaw {
    std::optional<std::size_t> m;
    std::optional<std::string> data_type;
    std::map<std::size_t, std::string> names;
    std::vector<std::pair<std::size_t, std::vector<std::vector<std::size_t>>>> lines;  // count, groups (1-based ids)
};

PreflibRaw read_preflib(std::string_view text) {
    PreflibRaw raw;
    std::size_t line_no = 0;
    for (std::string_view line : lines_of(text)) {
        ++line_no;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body = trim(line.substr(1));
            const std::size_t colon = body.find(':');
            if (colon == std::string_view::npos) continue;  // free-form comment
            const std::string key = lower(trim(body.substr(0, colon)));
            const std::string_view value = trim(body.substr(colon + 1));
            if (key == "number alternatives") {
                auto v = parse_int<std::size_t>(value);
                if (!v) fail(ErrorKind::input, where + "malformed header: NUMBER ALTERNATIVES");
                raw.m = *v;
            } else if (key == "data type") {
                raw.data_type = lower(value);
            } else if (key.rfind("alternative name ", 0) == 0) {
                auto id = parse_int<std::size_t>(trim(std::string_view(key).substr(17)));
                if (!id || *id == 0) fail(ErrorKind::input, where + "malformed header: ALTERNATIVE NAME");
                raw.names[*id] = std::string(value);
            }
            continue;
        }
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) fail(ErrorKind::input, where + "expected 'count: ranking'");
        auto count = parse_int<std::size_t>(trim(line.substr(0, colon)));
        if (!count) fail(ErrorKind::input, where + "bad multiplicity");
        std::vector<std::vector<std::size_t>> groups;
        std::string_view rest = trim(line.substr(colon + 1));
        std::optional<std::vector<std::size_t>> open;
        std::size_t i = 0;
        auto read_id = [&](std::string_view token) {
            auto id = parse_int<std::size_t>(trim(token));
            if (!id || *id == 0) fail(ErrorKind::input, where + "bad alternative id '" + std::string(token) + "'");
            return *id;
        };
        while (i < rest.size()) {
            const char c = rest[i];
            if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '{') {
                if (open) fail(ErrorKind::input, where + "nested tie-group");
                open.emplace();
                ++i;
            } else if (c == '}') {
                if (!open || open->empty()) fail(ErrorKind::input, where + "unbalanced or empty tie-group");
                groups.push_back(std::move(*open));
                open.reset();
                ++i;
            } else {
                std::size_t j = i;
                while (j < rest.size() && rest[j] != ',' && rest[j] != '}' && rest[j] != '{') ++j;
                const std::size_t id = read_id(rest.substr(i, j - i));
                if (open) open->push_back(id);
                else groups.push_back({id});
                i = j;
            }
        }
        if (open) fail(ErrorKind::input, where + "unterminated tie-group");
        raw.lines.emplace_back(*count, std::move(groups));
    }
    std::size_t largest = 0;
    for (const auto& [count, groups] : raw.lines) {
        for (const auto& g : groups) {
            for (std::size_t id : g) largest = std::max(largest, id);
        }
    }
    if (raw.m && largest > *raw.m) fail(ErrorKind::input, "unknown alternative id " + std::to_string(largest));
    if (!raw.m) raw.m = largest;
    return raw;
}

std::vector<std::string> names_of(const PreflibRaw& raw) {
    if (raw.names.empty()) return {};
    std::vector<std::string> names(*raw.m);
    for (std::size_t i = 0; i < *raw.m; ++i) {
        auto it = raw.names.find(i + 1);
        names[i] = it != raw.names.end() ? it->second : std::to_string(i + 1);
    }
    return names;
}

}  // namespace

NamedProfile parse_preflib(std::string_view text, std::optional<PreflibFormat> format) {
    const PreflibRaw raw = read_preflib(text);
    if (!format) {
        if (raw.data_type == "soc") format = PreflibFormat::soc;
        else if (raw.data_type == "toc") format = PreflibFormat::toc;
        else format = PreflibFormat::soi;
    }
    const std::size_t m = *raw.m;
    std::vector<StrictRanking> ballots;
    for (const auto& [count, groups] : raw.lines) {
        std::vector<AlternativeId> order;
        for (const auto& g : groups) {
            if (g.size() > 1) fail(ErrorKind::input, "tie in a strict-only context");
            order.push_back(static_cast<AlternativeId>(g.front() - 1));
        }
        StrictRanking ballot = [&] {
            try {
                return StrictRanking(std::move(order));
            } catch (const Error& e) {
                fail(ErrorKind::input, e.what());
            }
        }();
        if (*format == PreflibFormat::soc && ballot.size() != m) {
            fail(ErrorKind::input, "soc ballot does not rank every alternative");
        }
        ballots.insert(ballots.end(), count, ballot);
    }
    return {Profile(m, std::move(ballots)), names_of(raw)};
}

WeakBallots parse_preflib_weak(std::string_view text) {
    const PreflibRaw raw = read_preflib(text);
    WeakBallots out;
    out.m = *raw.m;
    out.names = names_of(raw);
    for (const auto& [count, groups] : raw.lines) {
        std::vector<std::vector<AlternativeId>> g0;
        for (const auto& g : groups) {
            std::vector<AlternativeId> ids;
            for (std::size_t id : g) ids.push_back(static_cast<AlternativeId>(id - 1));
            g0.push_back(std::move(ids));
        }
        WeakRanking r = [&] {
            try {
                return WeakRanking(std::move(g0));
            } catch (const Error& e) {
                fail(ErrorKind::input, e.what());
            }
        }();
        out.ballots.insert(out.ballots.end(), count, r);
    }
    return out;
}

// ------------------------------------------------------------------- csv

ScoreTable parse_scores_csv(std::string_view text, std::size_t min_reviews) {
    ScoreTable table;
    std::map<std::string, std::size_t> index;
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t line_no = 0;
    bool first = true;
    for (std::string_view line : lines_of(text)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line, ',');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() != 3) fail(ErrorKind::input, where + "expected item,reviewer,score");
        if (first) {
            first = false;
            if (lower(fields[0]).rfind("item", 0) == 0 && lower(fields[2]).rfind("score", 0) == 0) continue;
        }
        const auto score = parse_double(fields[2]);
        if (!score) fail(ErrorKind::input, where + "non-numeric score '" + std::string(fields[2]) + "'");
        std::string item(fields[0]), reviewer(fields[1]);
        if (!seen.emplace(item, reviewer).second) {
            fail(ErrorKind::input, where + "duplicate (item, reviewer) pair " + item + "," + reviewer);
        }
        auto [it, inserted] = index.emplace(item, table.items.size());
        if (inserted) {
            table.items.push_back(item);
            table.scores.emplace_back();
        }
        table.scores[it->second].push_back(*score);
    }
    ScoreTable kept;
    for (std::size_t i = 0; i < table.items.size(); ++i) {
        if (table.scores[i].size() < min_reviews) {
            kept.dropped.push_back(table.items[i]);
            continue;
        }
        kept.items.push_back(std::move(table.items[i]));
        kept.scores.push_back(std::move(table.scores[i]));
    }
    return kept;
}

NamedProfile parse_medals_csv(std::string_view text) {
    std::vector<std::string> events;
    std::map<std::string, std::vector<std::pair<long, std::string>>> by_event;
    std::vector<std::string> countries;
    std::map<std::string, AlternativeId> country_id;
    std::size_t line_no = 0;
    bool first = true;
    for (std::string_view line : lines_of(text)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line, ',');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() != 3) fail(ErrorKind::input, where + "expected event_id,rank,country");
        const auto rank = parse_int<long>(fields[1]);
        if (first) {
            first = false;
            if (!rank && lower(fields[0]).rfind("event", 0) == 0) continue;
        }
        if (!rank || *rank < 1) fail(ErrorKind::input, where + "rank must be a positive integer");
        std::string event(fields[0]), country(fields[2]);
        if (!by_event.count(event)) events.push_back(event);
        by_event[event].emplace_back(*rank, country);
        if (country_id.emplace(country, static_cast<AlternativeId>(countries.size())).second) {
            countries.push_back(country);
        }
    }
    std::vector<StrictRanking> ballots;
    for (const auto& event : events) {
        auto rows = by_event[event];
        std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<AlternativeId> order;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i && rows[i].first == rows[i - 1].first) {
                fail(ErrorKind::input, "event " + event + " has two entries at rank " + std::to_string(rows[i].first));
            }
            order.push_back(country_id.at(rows[i].second));
        }
        try {
            ballots.emplace_back(std::move(order));
        } catch (const Error&) {
            fail(ErrorKind::input, "event " + event + " lists a country twice");
        }
    }
    return {Profile(countries.size(), std::move(ballots)), countries};
}

// ------------------------------------------------------------------ json

namespace {

NamedProfile profile_from_json(const json& j) {
    if (!j.is_object() || !j.contains("m") || !j.contains("ballots")) {
        fail(ErrorKind::input, "profile JSON needs \"m\" and \"ballots\"");
    }
    const auto m = j.at("m").get<std::size_t>();
    std::vector<StrictRanking> ballots;
    for (const auto& b : j.at("ballots")) ballots.emplace_back(b.get<std::vector<AlternativeId>>());
    return {Profile(m, std::move(ballots)), names_from_json(j, m)};
}

json profile_object(const NamedProfile& p) {
    json j;
    j["m"] = p.profile.num_alternatives();
    j["names"] = p.names;
    json ballots = json::array();
    for (const auto& b : p.profile.ballots()) ballots.push_back(std::vector<AlternativeId>(b.order().begin(), b.order().end()));
    j["ballots"] = std::move(ballots);
    return j;
}

template <class F>
auto guarded_json(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        fail(ErrorKind::input, std::string("invalid JSON: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::domain) fail(ErrorKind::input, e.what());
        throw;
    }
}

}  // namespace

NamedProfile parse_profile_json(std::string_view text) {
    return guarded_json([&] { return profile_from_json(json::parse(text)); });
}

std::string profile_to_json(const NamedProfile& p) { return profile_object(p).dump() + "\n"; }

SidedProfile parse_sided_json(std::string_view text) {
    return guarded_json([&] {
        const json j = json::parse(text);
        SidedProfile out{profile_from_json(j), {}};
        if (!j.contains("sides")) fail(ErrorKind::input, "instance JSON needs \"sides\"");
        for (const auto& s : j.at("sides")) {
            const int v = s.get<int>();
            if (v != 1 && v != 2) fail(ErrorKind::input, "sides entries must be 1 or 2");
            out.split.side.push_back(static_cast<std::uint8_t>(v));
        }
        if (out.split.size() != out.profile.profile.num_voters()) {
            fail(ErrorKind::input, "sides must list one entry per ballot");
        }
        return out;
    });
}

std::string sided_to_json(const SidedProfile& p) {
    json j = profile_object(p.profile);
    std::vector<int> sides(p.split.side.begin(), p.split.side.end());
    j["sides"] = sides;
    return j.dump() + "\n";
}

std::string read_text(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::input, "cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

NamedProfile load_profile(const std::string& path) {
    const std::string text = read_text(path);
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot + 1));
    if (ext == "soc") return parse_preflib(text, PreflibFormat::soc);
    if (ext == "soi") return parse_preflib(text, PreflibFormat::soi);
    if (ext == "toc") return parse_preflib(text, PreflibFormat::toc);
    if (ext == "json") return parse_profile_json(text);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_profile_json(text);
    return parse_preflib(text);
}

}  // namespace rulepick
