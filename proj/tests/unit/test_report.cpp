#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "rulepick/error.hpp"
#include "rulepick/report.hpp"

using namespace rulepick;

namespace {

DisagreementReport sample_report() {
    std::mt19937_64 rng(3);
    const Profile p = testutil::random_profile(5, 17, rng, true);
    AbcConfig cfg;
    cfg.n_splits = 9;
    cfg.seed = 12;
    const std::vector<Rule> rules{Rule::positional("borda"), Rule::positional("veto"), Rule::trimmed_borda()};
    return evaluate_rules(rules, p, cfg);
}

void check_same(const DisagreementReport& a, const DisagreementReport& b) {
    CHECK(a.mode == b.mode);
    CHECK(a.seed == b.seed);
    CHECK(a.n_splits == b.n_splits);
    CHECK(a.evaluated == b.evaluated);
    CHECK(a.weighting == b.weighting);
    CHECK(a.options.weighting == b.options.weighting);
    CHECK(a.options.gamma == b.options.gamma);
    CHECK(a.options.normalized == b.options.normalized);
    CHECK(a.options.skip_empty == b.options.skip_empty);
    CHECK(a.notes == b.notes);
    REQUIRE(a.rules.size() == b.rules.size());
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        CHECK(a.rules[i].label == b.rules[i].label);
        CHECK(a.rules[i].mean == b.rules[i].mean);
        CHECK(a.rules[i].sem == b.rules[i].sem);
        CHECK(a.rules[i].values == b.rules[i].values);
    }
}

}  // namespace

TEST_CASE("disagreement reports round-trip exactly") {
    const auto r = sample_report();
    const std::string text = report_json(r, {{"seed", "12"}});
    check_same(parse_disagreement_report(text), r);
    CHECK(report_json(sample_report(), {{"seed", "12"}}) == text);

    const auto j = nlohmann::ordered_json::parse(text);
    CHECK(j["tool"] == "rulepick");
    CHECK(j["version"] == std::string(kVersion));
    CHECK(j["kind"] == "disagreement");
    CHECK(j["config"]["seed"] == "12");
    CHECK(j["report"]["weighting_policy"] == "auto");
    CHECK(j["report"]["rules"][0]["values"].size() == 9);
}

TEST_CASE("pick reports round-trip") {
    std::mt19937_64 rng(4);
    const Profile p = testutil::random_profile(4, 10, rng);
    const std::vector<Rule> rules{Rule::positional("plurality"), Rule::positional("borda")};
    const auto pick = pick_rule(rules, p, {});
    const std::string text = report_json(pick, rules);
    const auto back = parse_pick_report(text);
    CHECK(back.argmin == pick.argmin);
    CHECK(back.chosen == pick.chosen);
    check_same(back.report, pick.report);
    CHECK(nlohmann::ordered_json::parse(text)["chosen"] == rules[pick.chosen].label());
}

TEST_CASE("axiom reports round-trip") {
    AxiomOutcome o{"monotonicity", "mallows", 10, 100, 20, 3, {"note"}};
    const auto back = parse_axiom_report(report_json(o));
    CHECK(back.axiom == o.axiom);
    CHECK(back.source == o.source);
    CHECK(back.m == 10);
    CHECK(back.n == 100);
    CHECK(back.instances == 20);
    CHECK(back.violations == 3);
    CHECK(back.notes == o.notes);
    CHECK(axiom_csv(std::vector<AxiomOutcome>{o}) ==
          "axiom,source,m,n,instances,violations,rate\nmonotonicity,mallows,10,100,20,3,0.15\n");
}

TEST_CASE("malformed reports are input errors") {
    for (const char* text : {"", "{", "{\"report\": 3}", "[1, 2]"}) {
        try {
            parse_disagreement_report(text);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::input);
        }
    }
}

TEST_CASE("NaN becomes null and reads back as NaN") {
    auto r = sample_report();
    r.rules[0].values[0] = std::numeric_limits<double>::quiet_NaN();
    const std::string text = report_json(r);
    CHECK(text.find("null") != std::string::npos);
    CHECK(std::isnan(parse_disagreement_report(text).rules[0].values[0]));
}

TEST_CASE("doubles are written in shortest round-trip form") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double x = i % 2 ? u(rng) : u(rng) * 1e-12;
        const std::string s = format_double(x);
        double y = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), y);
        CHECK(y == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("csv tables") {
    const auto r = sample_report();
    const std::string est = estimates_csv(r);
    std::istringstream lines(est);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "rule,mean,sem,splits");
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 3);

    // Per-split rows reproduce the reported mean.
    const std::string per = split_values_csv(r);
    std::istringstream in(per);
    std::getline(in, line);
    CHECK(line == "rule,split,value");
    std::vector<double> borda;
    while (std::getline(in, line)) {
        if (line.rfind("borda,", 0) == 0) borda.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    }
    CHECK(exact_mean(borda) == r.rules[0].mean);

    AnnealResult a{named_vector("borda", 3), 0.25, {0.5}, {{0, 0, 0.125, true, 0.25}}};
    CHECK(anneal_trace_csv(a) == "start,step,delta,accepted,best\n0,0,0.125,1,0.25\n");
    const std::string json = report_json(a);
    CHECK(nlohmann::json::parse(json)["best"] == nlohmann::json::array({1.0, 0.5, 0.0}));
}

TEST_CASE("labels with commas are quoted") {
    DisagreementReport r;
    r.rules.push_back({"vector:1,0.5,0", 0.25, 0.0, {0.25}});
    r.evaluated = 1;
    CHECK(estimates_csv(r) == "rule,mean,sem,splits\n\"vector:1,0.5,0\",0.25,0,1\n");
}

TEST_CASE("perfpos and aggregator reports") {
    PerfPosAnswer yes;
    yes.yes = true;
    yes.witness = named_vector("borda", 3);
    yes.order = StrictRanking{1, 0, 2};
    yes.margin = 0.5;
    const auto j = nlohmann::ordered_json::parse(report_json(yes));
    CHECK(j["decision"] == "yes");
    CHECK(j["order"] == nlohmann::json::array({1, 0, 2}));
    CHECK(nlohmann::ordered_json::parse(report_json(PerfPosAnswer{}))["witness"].is_null());

    const std::vector<ScoreAggregator> aggs{ScoreAggregator::mean, ScoreAggregator::max};
    const auto pick = pick_aggregator(aggs, ItemScores{{1, 2, 3, 4}, {2, 3, 4, 5}, {0, 0, 1, 1}}, 20, 3);
    const auto s = nlohmann::ordered_json::parse(report_json(pick));
    CHECK(s["n_trials"] == 20);
    CHECK(s["aggregators"].size() == 2);
    CHECK(aggregator_csv(pick).rfind("aggregator,mean,sem,trials\nmean,", 0) == 0);
}
