#include "rulepick/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "rulepick/error.hpp"

namespace rulepick {

namespace {

using json = nlohmann::ordered_json;

json number(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

double to_double(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string_view weighting_name(Weighting w) {
    switch (w) {
        case Weighting::automatic: return "auto";
        case Weighting::on: return "on";
        case Weighting::off: return "off";
    }
    return "auto";
}

Weighting weighting_from(std::string_view name) {
    if (name == "auto") return Weighting::automatic;
    if (name == "on") return Weighting::on;
    if (name == "off") return Weighting::off;
    fail(ErrorKind::input, "unknown weighting policy: " + std::string(name));
}

json envelope(std::string_view kind, const ConfigEcho& config) {
    json j;
    j["tool"] = "rulepick";
    j["version"] = kVersion;
    j["kind"] = kind;
    json c = json::object();
    for (const auto& [k, v] : config) c[k] = v;
    j["config"] = std::move(c);
    return j;
}

json estimate_json(const Estimate& e) {
    json j;
    j["label"] = e.label;
    j["mean"] = number(e.mean);
    j["sem"] = number(e.sem);
    json values = json::array();
    for (double v : e.values) values.push_back(number(v));
    j["values"] = std::move(values);
    return j;
}

json disagreement_json(const DisagreementReport& r) {
    json j;
    j["mode"] = to_string(r.mode);
    j["seed"] = r.seed;
    j["n_splits"] = r.n_splits;
    j["evaluated"] = r.evaluated;
    j["weighting"] = r.weighting;
    j["weighting_policy"] = weighting_name(r.options.weighting);
    j["gamma"] = number(r.options.gamma);
    j["normalized"] = r.options.normalized;
    j["skip_empty"] = r.options.skip_empty;
    json rules = json::array();
    for (const auto& e : r.rules) rules.push_back(estimate_json(e));
    j["rules"] = std::move(rules);
    j["notes"] = r.notes;
    return j;
}

DisagreementReport disagreement_from(const json& j) {
    DisagreementReport r;
    r.mode = split_mode_by_name(j.at("mode").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n_splits = j.at("n_splits").get<std::size_t>();
    r.evaluated = j.at("evaluated").get<std::size_t>();
    r.weighting = j.at("weighting").get<bool>();
    r.options.weighting = weighting_from(j.at("weighting_policy").get<std::string>());
    r.options.gamma = to_double(j.at("gamma"));
    r.options.normalized = j.at("normalized").get<bool>();
    r.options.skip_empty = j.at("skip_empty").get<bool>();
    for (const auto& e : j.at("rules")) {
        Estimate est;
        est.label = e.at("label").get<std::string>();
        est.mean = to_double(e.at("mean"));
        est.sem = to_double(e.at("sem"));
        for (const auto& v : e.at("values")) est.values.push_back(to_double(v));
        r.rules.push_back(std::move(est));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

template <class F>
auto parse_guarded(std::string_view text, F&& f) {
    try {
        return f(json::parse(text));
    } catch (const json::exception& e) {
        fail(ErrorKind::input, std::string("malformed report: ") + e.what());
    } catch (const Error& e) {
        fail(ErrorKind::input, std::string("malformed report: ") + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string report_json(const DisagreementReport& report, const ConfigEcho& config) {
    json j = envelope("disagreement", config);
    j["report"] = disagreement_json(report);
    return dump(j);
}

std::string report_json(const PickResult& pick, std::span<const Rule> candidates, const ConfigEcho& config) {
    json j = envelope("pick", config);
    j["chosen"] = pick.chosen < candidates.size() ? candidates[pick.chosen].label() : pick.report.rules.at(pick.chosen).label;
    j["chosen_index"] = pick.chosen;
    j["argmin"] = pick.argmin;
    j["report"] = disagreement_json(pick.report);
    return dump(j);
}

std::string report_json(const AxiomOutcome& o, const ConfigEcho& config) {
    json j = envelope("axiom", config);
    j["axiom"] = o.axiom;
    j["source"] = o.source;
    j["m"] = o.m;
    j["n"] = o.n;
    j["instances"] = o.instances;
    j["violations"] = o.violations;
    j["rate"] = number(o.rate());
    j["notes"] = o.notes;
    return dump(j);
}

std::string report_json(const AnnealResult& r, const ConfigEcho& config) {
    json j = envelope("anneal", config);
    j["best"] = std::vector<double>(r.best.values().begin(), r.best.values().end());
    j["objective"] = number(r.objective);
    json starts = json::array();
    for (double v : r.start_objectives) starts.push_back(number(v));
    j["start_objectives"] = std::move(starts);
    j["steps_recorded"] = r.trace.size();
    return dump(j);
}

std::string report_json(const AggregatorPick& pick, const ConfigEcho& config) {
    json j = envelope("scores", config);
    j["seed"] = pick.seed;
    j["n_trials"] = pick.n_trials;
    j["chosen"] = to_string(pick.aggregators.at(pick.chosen));
    json argmin = json::array();
    for (std::size_t i : pick.argmin) argmin.push_back(to_string(pick.aggregators[i]));
    j["argmin"] = std::move(argmin);
    json rows = json::array();
    for (const auto& e : pick.estimates) rows.push_back(estimate_json(e));
    j["aggregators"] = std::move(rows);
    return dump(j);
}

std::string report_json(const PerfPosAnswer& a, const ConfigEcho& config) {
    json j = envelope("perfpos", config);
    j["decision"] = a.yes ? "yes" : "no";
    if (a.witness) {
        j["witness"] = std::vector<double>(a.witness->values().begin(), a.witness->values().end());
    } else {
        j["witness"] = nullptr;
    }
    if (a.order) {
        j["order"] = std::vector<AlternativeId>(a.order->order().begin(), a.order->order().end());
    } else {
        j["order"] = nullptr;
    }
    j["margin"] = number(a.margin);
    j["explored"] = a.explored;
    return dump(j);
}

DisagreementReport parse_disagreement_report(std::string_view text) {
    return parse_guarded(text, [](const json& j) { return disagreement_from(j.at("report")); });
}

PickResult parse_pick_report(std::string_view text) {
    return parse_guarded(text, [](const json& j) {
        PickResult r;
        r.argmin = j.at("argmin").get<std::vector<std::size_t>>();
        r.chosen = j.at("chosen_index").get<std::size_t>();
        r.report = disagreement_from(j.at("report"));
        return r;
    });
}

AxiomOutcome parse_axiom_report(std::string_view text) {
    return parse_guarded(text, [](const json& j) {
        AxiomOutcome o;
        o.axiom = j.at("axiom").get<std::string>();
        o.source = j.at("source").get<std::string>();
        o.m = j.at("m").get<std::size_t>();
        o.n = j.at("n").get<std::size_t>();
        o.instances = j.at("instances").get<std::size_t>();
        o.violations = j.at("violations").get<std::size_t>();
        o.notes = j.at("notes").get<std::vector<std::string>>();
        return o;
    });
}

std::string estimates_csv(const DisagreementReport& report) {
    std::string out = "rule,mean,sem,splits\n";
    for (const auto& e : report.rules) {
        out += csv_field(e.label) + "," + format_double(e.mean) + "," + format_double(e.sem) + "," +
               std::to_string(report.evaluated) + "\n";
    }
    return out;
}

std::string split_values_csv(const DisagreementReport& report) {
    std::string out = "rule,split,value\n";
    for (const auto& e : report.rules) {
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            out += csv_field(e.label) + "," + std::to_string(i) + "," + format_double(e.values[i]) + "\n";
        }
    }
    return out;
}

std::string anneal_trace_csv(const AnnealResult& result) {
    std::string out = "start,step,delta,accepted,best\n";
    for (const auto& s : result.trace) {
        out += std::to_string(s.start) + "," + std::to_string(s.step) + "," + format_double(s.delta) + "," +
               (s.accepted ? "1" : "0") + "," + format_double(s.best) + "\n";
    }
    return out;
}

std::string axiom_csv(std::span<const AxiomOutcome> outcomes) {
    std::string out = "axiom,source,m,n,instances,violations,rate\n";
    for (const auto& o : outcomes) {
        out += csv_field(o.axiom) + "," + csv_field(o.source) + "," + std::to_string(o.m) + "," +
               std::to_string(o.n) + "," + std::to_string(o.instances) + "," + std::to_string(o.violations) + "," +
               format_double(o.rate()) + "\n";
    }
    return out;
}

std::string aggregator_csv(const AggregatorPick& pick) {
    std::string out = "aggregator,mean,sem,trials\n";
    for (const auto& e : pick.estimates) {
        out += csv_field(e.label) + "," + format_double(e.mean) + "," + format_double(e.sem) + "," +
               std::to_string(pick.n_trials) + "\n";
    }
    return out;
}

}  // namespace rulepick
