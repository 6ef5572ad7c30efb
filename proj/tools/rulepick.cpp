// rulepick: command-line front end for rule picking, evaluation, annealing,
// axiom audits, PerfPos and data conversion.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rulepick/abc.hpp"
#include "rulepick/axioms.hpp"
#include "rulepick/data.hpp"
#include "rulepick/error.hpp"
#include "rulepick/optimize.hpp"
#include "rulepick/perfpos.hpp"
#include "rulepick/report.hpp"

namespace {

using namespace rulepick;

constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitLimit = 4;

const std::vector<std::string> kDefaultRules = {"plurality", "veto", "borda", "two_approval", "plurality_veto"};

struct Common {
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string output = "-";
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Rule> parse_rules(const std::vector<std::string>& names) {
    std::vector<Rule> rules;
    for (const auto& name : names) rules.push_back(rule_by_name(name));
    if (rules.empty()) fail(ErrorKind::config, "no rules given");
    return rules;
}

// Rule names are comma separated, except inside a "vector:" descriptor,
// which runs to the next ';' or the end.
std::vector<std::string> rule_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 7, "vector:") == 0) {
            std::size_t end = text.find(';', i);
            if (end == std::string::npos) end = text.size();
            out.push_back(text.substr(i, end - i));
            i = end + 1;
        } else {
            std::size_t end = text.find_first_of(",;", i);
            if (end == std::string::npos) end = text.size();
            if (end > i) out.push_back(text.substr(i, end - i));
            i = end + 1;
        }
    }
    return out;
}

Weighting weighting_from(const std::string& name) {
    if (name == "auto") return Weighting::automatic;
    if (name == "on") return Weighting::on;
    if (name == "off") return Weighting::off;
    fail(ErrorKind::config, "weighting must be auto, on or off");
}

ConfigEcho echo(const CLI::App& app) {
    ConfigEcho out{{"command", app.get_name()}};
    for (const CLI::Option* opt : app.get_options()) {
        if (opt->get_single_name() == "help") continue;
        std::string value;
        if (opt->get_type_size() == 0) {
            value = opt->count() > 0 ? "true" : "false";
        } else if (opt->count() > 0) {
            const auto& results = opt->results();
            for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
        } else {
            value = opt->get_default_str();
        }
        out.emplace_back(opt->get_single_name(), value);
    }
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::input, "cannot write " + path);
    out << text;
}

void add_common(CLI::App* app, Common& c, bool with_output = true) {
    app->add_option("--seed", c.seed, "Root random seed")->capture_default_str();
    app->add_option("--jobs", c.jobs, "Worker threads; output does not depend on it")->capture_default_str();
    if (with_output) app->add_option("-o,--output", c.output, "Output file, - for stdout")->capture_default_str();
}

struct SplitOptions {
    std::size_t splits = 10;
    std::string weighting = "auto";
    double gamma = 2.0;
    bool unnormalized = false;
    bool skip_empty = false;
    double tie_epsilon = 0.0;
    std::string mode = "monte_carlo";
    bool exact = false;

    void add(CLI::App* app) {
        app->add_option("--splits", splits, "Random splits to average")->capture_default_str();
        app->add_option("--weighting", weighting, "Alternative weighting: auto, on, off")->capture_default_str();
        app->add_option("--gamma", gamma, "Weight base, > 1")->capture_default_str();
        app->add_flag("--unnormalized", unnormalized, "Report raw weighted distances");
        app->add_flag("--skip-empty", skip_empty, "Leave splits with an empty side out");
        app->add_option("--tie-epsilon", tie_epsilon, "Means within this of the minimum tie")->capture_default_str();
        app->add_option("--mode", mode, "monte_carlo, exhaustive or grouped_exact")->capture_default_str();
        app->add_flag("--exact", exact, "Exact expectation: exhaustive for n <= 20, grouped otherwise");
    }

    AbcConfig config(const Profile& p, const Common& c) const {
        AbcConfig cfg;
        cfg.mode = split_mode_by_name(mode);
        if (exact) cfg.mode = p.num_voters() <= 20 ? SplitMode::exhaustive : SplitMode::grouped_exact;
        cfg.n_splits = splits;
        cfg.seed = c.seed;
        cfg.jobs = c.jobs;
        cfg.tie_epsilon = tie_epsilon;
        cfg.options.weighting = weighting_from(weighting);
        cfg.options.gamma = gamma;
        cfg.options.normalized = !unnormalized;
        cfg.options.skip_empty = skip_empty;
        return cfg;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Pick the most self-consistent rank aggregation rule"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // pick
    Common pick_common;
    SplitOptions pick_split;
    std::string pick_input, pick_rules;
    auto* pick = app.add_subcommand("pick", "Choose the candidate rule with the least split disagreement");
    pick->add_option("input", pick_input, "Profile file (.json, .soc, .soi, .toc) or -")->required();
    pick->add_option("--rules", pick_rules, "Comma-separated candidate rules");
    pick_split.add(pick);
    add_common(pick, pick_common);

    // eval
    Common eval_common;
    SplitOptions eval_split;
    std::string eval_input, eval_rules, metric = "kt";
    std::size_t winners = 0;
    bool per_split = false;
    auto* eval = app.add_subcommand("eval", "Per-rule mean and SEM of split disagreement as CSV");
    eval->add_option("input", eval_input, "Profile file or -")->required();
    eval->add_option("--rules", eval_rules, "Comma-separated rules");
    eval->add_option("--metric", metric, "kt or jaccard")->capture_default_str();
    eval->add_option("--k", winners, "Winner-set size for jaccard");
    eval->add_flag("--per-split", per_split, "One row per split instead of summaries");
    eval_split.add(eval);
    add_common(eval, eval_common);

    // anneal
    Common anneal_common;
    SplitOptions anneal_split;
    AnnealConfig anneal_cfg;
    std::string anneal_input, anneal_starts, trace_path;
    auto* anneal_cmd = app.add_subcommand("anneal", "Search positional score vectors by simulated annealing");
    anneal_cmd->add_option("input", anneal_input, "Profile file or -")->required();
    anneal_cmd->add_option("--steps", anneal_cfg.steps, "Proposals per start")->capture_default_str();
    anneal_cmd->add_option("--starts", anneal_starts, "Comma-separated start families or vector: descriptors");
    anneal_cmd->add_option("--delta-min", anneal_cfg.delta_min, "Smallest step")->capture_default_str();
    anneal_cmd->add_option("--delta-max", anneal_cfg.delta_max, "Largest step")->capture_default_str();
    anneal_cmd->add_option("--trace", trace_path, "Write the trace CSV here");
    anneal_split.add(anneal_cmd);
    add_common(anneal_cmd, anneal_common);

    // axioms
    Common axiom_common;
    std::string axiom_names = "reversal_symmetry,union_consistency,monotonicity", source = "mallows", axiom_rules;
    std::size_t axiom_m = 10, axiom_n = 100, profiles = 500, axiom_splits = 50;
    double axiom_phi = 0.4;
    auto* axioms_cmd = app.add_subcommand("axioms", "Violation rates of rule-picking axioms on sampled profiles");
    axioms_cmd->add_option("--axiom", axiom_names, "Comma-separated axioms")->capture_default_str();
    axioms_cmd->add_option("--source", source, "mallows, plackett_luce, ic, urn, single_peaked")->capture_default_str();
    axioms_cmd->add_option("--m", axiom_m, "Alternatives")->capture_default_str();
    axioms_cmd->add_option("--n", axiom_n, "Voters")->capture_default_str();
    axioms_cmd->add_option("--phi", axiom_phi, "Mallows dispersion")->capture_default_str();
    axioms_cmd->add_option("--profiles", profiles, "Profiles sampled")->capture_default_str();
    axioms_cmd->add_option("--splits", axiom_splits, "Splits per pick")->capture_default_str();
    axioms_cmd->add_option("--rules", axiom_rules, "Candidate rules (default: the five standard positional rules)");
    add_common(axioms_cmd, axiom_common);

    // perfpos
    Common pp_common;
    std::string pp_input, pp_mode = "decide", pp_witness;
    std::size_t pp_limit = 8;
    auto* perfpos_cmd = app.add_subcommand("perfpos", "Decide, verify or reduce a perfect-consistency instance");
    perfpos_cmd->add_option("instance", pp_input, "Instance JSON with \"sides\", or -")->required();
    perfpos_cmd->add_option("--mode", pp_mode, "decide, verify or reduce")->capture_default_str();
    perfpos_cmd->add_option("--witness", pp_witness, "Comma-separated vector to verify");
    perfpos_cmd->add_option("--limit", pp_limit, "Largest m to enumerate")->capture_default_str();
    add_common(perfpos_cmd, pp_common);

    // generate
    Common gen_common;
    DistributionSpec gen_spec;
    std::string dist = "mallows";
    double urn_alpha = -1.0;
    auto* generate = app.add_subcommand("generate", "Sample a synthetic profile as JSON");
    generate->add_option("--dist", dist, "mallows, plackett_luce, ic, urn, single_peaked")->capture_default_str();
    generate->add_option("--m", gen_spec.m, "Alternatives")->required();
    generate->add_option("--n", gen_spec.n, "Voters")->required();
    generate->add_option("--phi", gen_spec.phi, "Mallows dispersion")->capture_default_str();
    generate->add_option("--urn-alpha", urn_alpha, "Urn parameter; drawn from Gamma(0.8, 1) when omitted");
    generate->add_option("--ballot-length", gen_spec.ballot_length, "Items kept per voter (0 = all)")->capture_default_str();
    generate->add_option("--coverage", gen_spec.coverage, "Voters keeping each item")->capture_default_str();
    add_common(generate, gen_common);

    // scores
    Common score_common;
    std::string score_input, aggregators = "mean,min,max,median,geometric_mean,trimmed_mean";
    std::size_t trials = 1000, min_reviews = 6;
    double score_tie = 0.0;
    bool score_json = false;
    auto* scores = app.add_subcommand("scores", "Pick a score aggregator on item,reviewer,score data");
    scores->add_option("input", score_input, "CSV file or -")->required();
    scores->add_option("--aggregators", aggregators, "Comma-separated aggregators")->capture_default_str();
    scores->add_option("--trials", trials, "Random half splits")->capture_default_str();
    scores->add_option("--min-reviews", min_reviews, "Drop items with fewer scores")->capture_default_str();
    scores->add_option("--tie-epsilon", score_tie, "Means within this of the minimum tie")->capture_default_str();
    scores->add_flag("--json", score_json, "Emit the JSON report instead of CSV");
    add_common(scores, score_common);

    // convert
    Common conv_common;
    std::string conv_input, conv_from = "auto";
    auto* convert = app.add_subcommand("convert", "Convert PrefLib, medal CSV or JSON input to profile JSON");
    convert->add_option("input", conv_input, "Input file or -")->required();
    convert->add_option("--from", conv_from, "auto, soc, soi, toc, json, medals")->capture_default_str();
    add_common(convert, conv_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*pick) {
        const auto input = load_profile(pick_input);
        const auto rules = parse_rules(pick_rules.empty() ? kDefaultRules : rule_tokens(pick_rules));
        const auto cfg = pick_split.config(input.profile, pick_common);
        const auto result = pick_rule(rules, input.profile, cfg);
        write_output(pick_common.output, report_json(result, rules, echo(*pick)));
    } else if (*eval) {
        const auto input = load_profile(eval_input);
        const auto rules = parse_rules(eval_rules.empty() ? kDefaultRules : rule_tokens(eval_rules));
        const auto cfg = eval_split.config(input.profile, eval_common);
        if (metric == "kt") {
            const auto report = evaluate_rules(rules, input.profile, cfg);
            write_output(eval_common.output, per_split ? split_values_csv(report) : estimates_csv(report));
        } else if (metric == "jaccard") {
            if (winners == 0) fail(ErrorKind::config, "--metric jaccard requires --k");
            if (cfg.mode != SplitMode::monte_carlo) fail(ErrorKind::config, "jaccard supports monte_carlo splits only");
            DisagreementReport report;
            report.seed = cfg.seed;
            report.n_splits = cfg.n_splits;
            const auto splits = split_sequence(input.profile.num_voters(), cfg.n_splits, cfg.seed);
            for (const auto& rule : rules) {
                Estimate e{rule.label(), 0.0, 0.0, {}};
                for (const auto& split : splits) {
                    auto [s1, s2] = side_profiles(input.profile, split);
                    e.values.push_back(jaccard_dissimilarity(top_k(apply_rule(rule, s1), winners),
                                                             top_k(apply_rule(rule, s2), winners)));
                }
                e.mean = exact_mean(e.values);
                e.sem = standard_error(e.values);
                report.rules.push_back(std::move(e));
            }
            report.evaluated = splits.size();
            write_output(eval_common.output, per_split ? split_values_csv(report) : estimates_csv(report));
        } else {
            fail(ErrorKind::config, "metric must be kt or jaccard");
        }
    } else if (*anneal_cmd) {
        const auto input = load_profile(anneal_input);
        const auto cfg = anneal_split.config(input.profile, anneal_common);
        if (cfg.mode != SplitMode::monte_carlo) fail(ErrorKind::config, "annealing uses monte_carlo splits");
        anneal_cfg.seed = anneal_common.seed;
        const std::size_t length = anneal_vector_length(input.profile);
        for (const auto& name : rule_tokens(anneal_starts)) {
            const Rule r = rule_by_name(name);
            const PositionalRule* pr = r.as_positional();
            if (!pr) fail(ErrorKind::config, "start must be positional: " + name);
            anneal_cfg.starts.push_back(pr->fixed ? *pr->fixed : named_vector(pr->family, length));
        }
        const auto splits = split_sequence(input.profile.num_voters(), cfg.n_splits, cfg.seed);
        const auto result = anneal(input.profile, splits, anneal_cfg, cfg.options);
        write_output(anneal_common.output, report_json(result, echo(*anneal_cmd)));
        if (!trace_path.empty()) write_output(trace_path, anneal_trace_csv(result));
    } else if (*axioms_cmd) {
        DistributionSpec spec;
        spec.kind = distribution_by_name(source);
        spec.m = axiom_m;
        spec.n = axiom_n;
        spec.phi = axiom_phi;
        const auto rules = axiom_rules.empty() ? default_axiom_candidates() : parse_rules(rule_tokens(axiom_rules));
        AbcConfig cfg;
        cfg.n_splits = axiom_splits;
        cfg.jobs = axiom_common.jobs;
        std::vector<AxiomOutcome> rows;
        for (const auto& name : split_list(axiom_names)) {
            rows.push_back(violation_rate(axiom_by_name(name), spec, rules, profiles, cfg, axiom_common.seed));
        }
        write_output(axiom_common.output, axiom_csv(rows));
    } else if (*perfpos_cmd) {
        const auto inst_json = parse_sided_json(read_text(pp_input));
        const PerfPosInstance inst{inst_json.profile.profile, inst_json.split};
        if (pp_mode == "decide") {
            const auto answer = inst.profile.is_full() ? decide_perfpos(inst, pp_limit, pp_common.jobs)
                                                       : decide_k_perfpos(inst, pp_limit, pp_common.jobs);
            write_output(pp_common.output, report_json(answer, echo(*perfpos_cmd)));
        } else if (pp_mode == "verify") {
            if (pp_witness.empty()) fail(ErrorKind::config, "--mode verify requires --witness");
            std::vector<double> raw;
            for (const auto& x : split_list(pp_witness)) {
                try {
                    raw.push_back(std::stod(x));
                } catch (const std::exception&) {
                    fail(ErrorKind::config, "bad witness entry: " + x);
                }
            }
            const auto s = ScoringVector::normalize(raw);
            PerfPosAnswer answer;
            answer.yes = verify_witness(s, inst);
            answer.witness = s;
            write_output(pp_common.output, report_json(answer, echo(*perfpos_cmd)));
        } else if (pp_mode == "reduce") {
            const auto reduced = reduce_k_perfpos(inst);
            write_output(pp_common.output,
                         sided_to_json({{reduced.profile, inst_json.profile.names}, reduced.split}));
        } else {
            fail(ErrorKind::config, "mode must be decide, verify or reduce");
        }
    } else if (*generate) {
        gen_spec.kind = distribution_by_name(dist);
        if (urn_alpha >= 0.0) gen_spec.urn_alpha = urn_alpha;
        const auto p = sample_profile(gen_spec, gen_common.seed);
        write_output(gen_common.output, profile_to_json({p, {}}));
    } else if (*scores) {
        const auto table = parse_scores_csv(read_text(score_input), min_reviews);
        std::vector<ScoreAggregator> aggs;
        for (const auto& name : split_list(aggregators)) aggs.push_back(aggregator_by_name(name));
        const auto result = pick_aggregator(aggs, table.scores, trials, score_common.seed, score_tie);
        write_output(score_common.output, score_json ? report_json(result, echo(*scores)) : aggregator_csv(result));
    } else if (*convert) {
        NamedProfile p;
        if (conv_from == "auto") {
            p = load_profile(conv_input);
        } else if (conv_from == "soc") {
            p = parse_preflib(read_text(conv_input), PreflibFormat::soc);
        } else if (conv_from == "soi") {
            p = parse_preflib(read_text(conv_input), PreflibFormat::soi);
        } else if (conv_from == "toc") {
            p = parse_preflib(read_text(conv_input), PreflibFormat::toc);
        } else if (conv_from == "json") {
            p = parse_profile_json(read_text(conv_input));
        } else if (conv_from == "medals") {
            p = parse_medals_csv(read_text(conv_input));
        } else {
            fail(ErrorKind::config, "unknown --from format: " + conv_from);
        }
        write_output(conv_common.output, profile_to_json(p));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const rulepick::Error& e) {
        std::cerr << "rulepick: " << e.what() << "\n";
        switch (e.kind()) {
            case rulepick::ErrorKind::input: return kExitInput;
            case rulepick::ErrorKind::config: return kExitConfig;
            case rulepick::ErrorKind::limit: return kExitLimit;
            case rulepick::ErrorKind::domain: return kExitInput;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "rulepick: " << e.what() << "\n";
        return 1;
    }
}
