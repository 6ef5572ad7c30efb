#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(RULEPICK_CLI) + " " + args + " 2>/dev/null";
    Run r{0, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const std::string& name) { return std::string(RULEPICK_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("pick chooses plurality on the three-group profile") {
    const auto r = run("pick " + fixture("three_groups_k2.json") + " --rules plurality,veto --exact");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["kind"] == "pick");
    CHECK(j["chosen"] == "plurality");
    CHECK(j["argmin"] == json::array({0}));
    CHECK(j["report"]["mode"] == "exhaustive");
    CHECK(j["config"]["rules"] == "plurality,veto");
    CHECK(j["config"]["exact"] == "true");
}

TEST_CASE("defaults and determinism") {
    const auto a = run("pick " + fixture("small.soc") + " --rules borda,plurality --seed 5");
    const auto b = run("pick " + fixture("small.soc") + " --rules borda,plurality --seed 5 --jobs 3");
    REQUIRE(a.code == 0);
    CHECK(json::parse(a.out)["report"]["n_splits"] == 10);
    CHECK(json::parse(a.out)["report"]["rules"] == json::parse(b.out)["report"]["rules"]);
    CHECK(run("pick " + fixture("small.soc") + " --rules borda,plurality --seed 5").out == a.out);
}

TEST_CASE("eval tables") {
    const auto csv = run("eval " + fixture("three_groups_k2.json") + " --rules borda,borda --metric jaccard --k 3");
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("rule,mean,sem,splits\n", 0) == 0);
    CHECK(csv.out.find("borda,0,0,10\nborda,0,0,10\n") != std::string::npos);
    CHECK(run("eval " + fixture("three_groups_k2.json") + " --metric jaccard").code == 3);
    const auto per = run("eval " + fixture("three_groups_k2.json") + " --rules veto --splits 4 --per-split");
    CHECK(per.out.rfind("rule,split,value\n", 0) == 0);
}

TEST_CASE("anneal writes the best vector and a trace") {
    const std::string trace = (std::filesystem::temp_directory_path() / "rulepick_trace_test.csv").string();
    const auto r = run("anneal " + fixture("small.soi") + " --steps 30 --seed 2 --trace " + trace);
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["kind"] == "anneal");
    CHECK(j["best"].front() == 1.0);
    CHECK(j["best"].back() == 0.0);
    std::ifstream in(trace);
    std::string header;
    std::getline(in, header);
    CHECK(header == "start,step,delta,accepted,best");
    std::remove(trace.c_str());
}

TEST_CASE("axioms csv") {
    const auto r = run("axioms --axiom reversal_symmetry --m 4 --n 20 --profiles 5 --splits 5");
    REQUIRE(r.code == 0);
    CHECK(r.out == "axiom,source,m,n,instances,violations,rate\nreversal_symmetry,mallows,4,20,5,0,0\n");
    CHECK(run("axioms --axiom pareto").code == 3);
}

TEST_CASE("perfpos modes") {
    const auto yes = run("perfpos " + fixture("perfpos_yes.json"));
    REQUIRE(yes.code == 0);
    CHECK(json::parse(yes.out)["decision"] == "yes");
    const auto no = run("perfpos " + fixture("perfpos_no.json"));
    CHECK(json::parse(no.out)["decision"] == "no");
    const auto verify = run("perfpos " + fixture("perfpos_no.json") + " --mode verify --witness 1,0");
    CHECK(json::parse(verify.out)["decision"] == "no");
    const auto reduced = run("perfpos " + fixture("perfpos_yes.json") + " --mode reduce");
    CHECK(json::parse(reduced.out)["ballots"].size() == 36);
    CHECK(run("perfpos " + fixture("perfpos_yes.json") + " --limit 2").code == 4);
}

TEST_CASE("generate and convert") {
    const auto g = run("generate --dist mallows --m 6 --n 12 --ballot-length 3 --coverage 6 --seed 4");
    REQUIRE(g.code == 0);
    const auto j = json::parse(g.out);
    CHECK(j["m"] == 6);
    CHECK(j["ballots"].size() == 12);
    CHECK(j["ballots"][0].size() == 3);
    CHECK(run("generate --dist mallows --m 6 --n 12 --ballot-length 3 --coverage 6 --seed 4").out == g.out);
    CHECK(run("generate --dist mallows --m 6 --n 12 --ballot-length 3 --coverage 5").code == 3);

    const auto c = run("convert " + fixture("small.soc"));
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["names"] == json::array({"red", "green", "blue"}));
    const auto medals = run("convert " + fixture("medals.csv") + " --from medals");
    CHECK(json::parse(medals.out)["ballots"].size() == 3);
}

TEST_CASE("scores") {
    const auto r = run("scores " + fixture("reviews.csv") + " --aggregators mean,max --trials 50");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("aggregator,mean,sem,trials\nmean,", 0) == 0);
    const auto j = run("scores " + fixture("reviews.csv") + " --trials 50 --json");
    CHECK(json::parse(j.out)["n_trials"] == 50);
}

TEST_CASE("exit codes") {
    CHECK(run("pick /nonexistent.json").code == 2);
    CHECK(run("pick " + fixture("ties.toc")).code == 2);
    CHECK(run("pick " + fixture("small.soc") + " --rules majority").code == 3);
    CHECK(run("pick " + fixture("small.soc") + " --splits notanumber").code == 3);
    CHECK(run("frobnicate").code == 3);
    CHECK(run("pick " + fixture("small.soc") + " --weighting sometimes").code == 3);
}

TEST_CASE("stdin input") {
    const auto r = run("convert - < " + fixture("three_groups_k2.json"));
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["ballots"].size() == 6);
}
