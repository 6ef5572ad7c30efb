#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "rulepick/abc.hpp"
#include "rulepick/data.hpp"
#include "rulepick/distance.hpp"
#include "rulepick/perfpos.hpp"
#include "rulepick/rules.hpp"

using namespace rulepick;

namespace {

Profile mallows(std::size_t m, std::size_t n, std::uint64_t seed) {
    DistributionSpec spec;
    spec.kind = Distribution::mallows;
    spec.m = m;
    spec.n = n;
    spec.phi = 0.4;
    return sample_profile(spec, seed);
}

void BM_KendallTau(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const Profile p = mallows(m, 2, 1);
    const WeakRanking a = WeakRanking::from_strict(p.ballots()[0]);
    const WeakRanking b = WeakRanking::from_strict(p.ballots()[1]);
    for (auto _ : state) benchmark::DoNotOptimize(kt_with_ties(a, b));
}
BENCHMARK(BM_KendallTau)->Arg(10)->Arg(100)->Arg(1000);

void BM_Borda(benchmark::State& state) {
    const Profile p = mallows(20, static_cast<std::size_t>(state.range(0)), 2);
    const ScoringVector s = named_vector("borda", 20);
    for (auto _ : state) benchmark::DoNotOptimize(apply_positional(s, p));
}
BENCHMARK(BM_Borda)->Arg(100)->Arg(1000)->Arg(10000);

void BM_EvaluateRules(benchmark::State& state) {
    const Profile p = mallows(10, 100, 3);
    std::vector<Rule> rules;
    for (const char* n : {"plurality", "veto", "borda", "two_approval", "plurality_veto"}) rules.push_back(rule_by_name(n));
    AbcConfig cfg;
    cfg.n_splits = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_rules(rules, p, cfg));
}
BENCHMARK(BM_EvaluateRules)->Arg(10)->Arg(100);

void BM_KemenyExact(benchmark::State& state) {
    const Profile p = mallows(static_cast<std::size_t>(state.range(0)), 50, 4);
    const Rule kemeny = rule_by_name("kemeny");
    for (auto _ : state) benchmark::DoNotOptimize(apply_rule(kemeny, p));
}
BENCHMARK(BM_KemenyExact)->Arg(6)->Arg(8)->Arg(10);

void BM_DecidePerfPos(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const Profile p = mallows(m, 20, 5);
    Split split;
    for (std::size_t v = 0; v < p.num_voters(); ++v) split.side.push_back(v % 2 ? 2 : 1);
    const PerfPosInstance inst{p, split};
    for (auto _ : state) benchmark::DoNotOptimize(decide_perfpos(inst));
}
BENCHMARK(BM_DecidePerfPos)->Arg(3)->Arg(4)->Arg(5);

}  // namespace
BENCHMARK_MAIN();
