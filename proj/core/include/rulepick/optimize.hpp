#pragma once

// Simulated annealing over positional scoring vectors, minimizing the mean
// split disagreement on a fixed split set.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rulepick/abc.hpp"
#include "rulepick/rules.hpp"

namespace rulepick {

struct AnnealConfig {
    std::size_t steps = 500;  ///< proposals per start, rejected ones included
    double delta_min = 0.05;
    double delta_max = 1.0;
    /// Start vectors; empty means the positional families plurality, veto,
    /// borda, two_approval and plurality_veto at the profile's ballot length.
    std::vector<ScoringVector> starts;
    std::uint64_t seed = 0;
    /// Proposals sampled per start to set the initial temperature.
    std::size_t calibration_proposals = 20;
};

struct AnnealStep {
    std::size_t start = 0;
    std::size_t step = 0;
    /// Objective change of the proposal; NaN when the proposal broke monotonicity.
    double delta = 0.0;
    bool accepted = false;
    double best = 0.0;  ///< best objective seen so far across all starts
};

struct AnnealResult {
    ScoringVector best;
    double objective = 0.0;
    std::vector<double> start_objectives;
    std::vector<AnnealStep> trace;
};

/// Mean split disagreement of a positional rule over the given splits; the
/// same value evaluate_rules reports for that rule on those splits.
double mean_split_disagreement(const PositionalRule& rule, const Profile& p, std::span<const Split> splits,
                               const DisagreementOptions& options = {});

/// The splits evaluate_rules uses in monte_carlo mode for (n_splits, seed).
std::vector<Split> split_sequence(std::size_t num_voters, std::size_t n_splits, std::uint64_t seed);

/// Vector length used for a profile: its longest ballot.
std::size_t anneal_vector_length(const Profile& p);

/// Anneals from every start and returns the best vector seen. Temperature
/// T_t = T0 (1 - t / steps), with T0 set so the median calibration |delta|
/// is accepted with probability 1/2.
AnnealResult anneal(const Profile& p, std::span<const Split> splits, const AnnealConfig& cfg,
                    const DisagreementOptions& options = {});

}  // namespace rulepick
