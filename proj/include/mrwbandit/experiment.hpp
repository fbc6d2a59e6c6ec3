#pragma once

// Declarative experiments and sweeps.
//
// Config file (JSON):
//   {
//     "adversary": {"T": 1024 | [256, 512, ...], "k": 2, "c": 1 | [1, 8],
//                   "variant": "clipped", "process": "mrw",
//                   "epsilon": 0.1, "sigma": 0.0, "baseline": 0.5, "chi": 1},
//     "policies": ["exp3:auto", "betc:tau=auto"],
//     "trials": 200,
//     "seed": 1,
//     "first_round_free": false,
//     "output_dir": "out",
//     "emit": {"actions": false, "unclipped": true, "plots": false}
//   }
// epsilon/sigma/baseline/chi are test overrides and may be omitted.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mrwbandit/adversary.hpp"
#include "mrwbandit/analysis.hpp"
#include "mrwbandit/engine.hpp"
#include "mrwbandit/io.hpp"

namespace mrwb {

struct EmitFlags {
    bool actions = false;
    bool unclipped = true;
    bool plots = false;

    bool operator==(const EmitFlags&) const = default;
};

struct ExperimentConfig {
    std::vector<Round> horizons;
    std::size_t arms = 2;
    std::vector<double> switch_costs{1.0};
    LossVariant variant = LossVariant::Clipped;
    ParentKind process = ParentKind::Mrw;
    std::optional<double> epsilon_override;
    std::optional<double> sigma_override;
    std::optional<double> baseline_override;
    std::optional<Action> forced_best_arm;
    std::vector<std::string> policies;
    std::size_t trials = 1;
    std::optional<std::uint64_t> seed;
    bool first_round_free = false;
    std::string output_dir;
    EmitFlags emit;

    bool operator==(const ExperimentConfig&) const = default;

    AdversaryConfig adversary(Round horizon, double switch_cost) const;
};

// Strict: unknown keys, bad types and unresolvable policies throw
// std::invalid_argument.
ExperimentConfig parse_experiment_config(const Json& j);
Json to_json(const ExperimentConfig& config);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct SweepRow {
    Round horizon = 0;
    double switch_cost = 0.0;
    std::string policy;
    TrialOutcome outcome;
};

// Cells in T-major, then c, then policy order; trials in index order. Every
// policy in a (T, c) cell faces the same adversary seeds.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::size_t jobs);

std::vector<ResultRow> result_rows(const std::vector<SweepRow>& rows);

struct SeriesSummary {
    std::string policy;
    double switch_cost = 0.0;
    std::vector<GridPoint> regret;    // mean R per T
    std::vector<GridPoint> switches;  // mean M per T
    std::optional<ScalingFit> regret_fit;
    std::optional<ScalingFit> switch_fit;
};

// Groups rows by (policy, c) in first-appearance order and fits each series
// against T when at least two horizons are present.
std::vector<SeriesSummary> summarize_results(const std::vector<ResultRow>& rows);

Json summary_json(const std::vector<SeriesSummary>& series);

}  // namespace mrwb
