#pragma once

// Trajectory-level checks and desk-scale demonstrations: the cut/switch
// inequality, drift exceedance rates, power-law fits of regret and switches,
// and the identification probe.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrwbandit/adversary.hpp"
#include "mrwbandit/engine.hpp"
#include "mrwbandit/process.hpp"

namespace mrwb {

// For arm i, A_t holds when exactly one of X_t, X_rho(t) equals i. Every such
// round lies in the cut of some switch into or out of i, so
// sum_t [A_t] <= w(rho) * M_i on every trajectory.
struct CutSwitchAudit {
    Action action = kNoAction;
    std::size_t odd_rounds = 0;  // sum_t [A_t]
    std::size_t switches = 0;    // M_i
    std::size_t width = 0;       // w(rho)
    std::size_t bound = 0;       // w(rho) * M_i
    bool holds = false;
};

// `initial` is X_0; the default sentinel is never equal to i. Pass `width`
// when auditing many traces of the same horizon.
CutSwitchAudit audit_cut_switch(std::span<const Action> actions, const ParentFunction& pf, Action i,
                                Action initial = kNoAction, std::optional<std::size_t> width = std::nullopt);

struct DriftCheck {
    std::size_t trials = 0;
    std::size_t exceedances = 0;
    std::size_t depth = 0;
    double radius = 0.0;  // sigma sqrt(2 d ln(T/delta))
    double rate() const noexcept { return trials ? static_cast<double>(exceedances) / trials : 0.0; }
};

// Fraction of trajectories with max_t |W_t| above the drift radius.
DriftCheck verify_drift(const ParentFunction& pf, Round horizon, double sigma, double delta,
                        std::size_t trials, std::uint64_t seed, std::size_t jobs = 1);

// Binomial standard error sqrt(p (1 - p) / n).
double binomial_se(double p, std::size_t n);

struct GridPoint {
    double x = 0.0;
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

GridPoint summarize(double x, std::span<const double> samples);

struct ScalingFit {
    std::vector<GridPoint> grid;  // ascending x
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    std::pair<double, double> slope_ci{0.0, 0.0};  // 95%, normal approximation
};

// OLS of ln(mean) on ln(x). Rejects nonpositive x or mean.
ScalingFit fit_power_law(std::vector<GridPoint> grid, std::size_t min_points = 2);
// Regret-vs-T fit; at least four distinct horizons.
ScalingFit fit_scaling(std::vector<GridPoint> grid);

struct TradeoffRow {
    std::string policy;
    double switch_cost = 1.0;
    ScalingFit loss_regret;  // R - c M against T
    ScalingFit switches;     // M against T
    double alpha = 0.0;
    double beta = 0.0;
    double frontier = 0.0;  // 2 (1 - alpha)
    bool satisfied = false; // beta >= frontier - tolerance
};

struct TradeoffSpec {
    std::vector<std::string> policies;
    std::vector<Round> horizons;
    std::vector<double> switch_costs{1.0};
    AdversaryConfig adversary;  // horizon, seed and switch cost are replaced
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    double tolerance = 0.15;
    std::size_t jobs = 1;
};

std::vector<TradeoffRow> switch_tradeoff_report(const TradeoffSpec& spec);

struct IdentificationEstimate {
    std::size_t seeds = 0;
    double probability = 0.0;  // Pr[most-played arm == chi]
    double standard_error = 0.0;
    double mean_switches = 0.0;
};

IdentificationEstimate identification_probe(std::size_t n_seeds, const AdversaryConfig& adversary,
                                            std::string_view policy, std::uint64_t seed,
                                            std::size_t jobs = 1);

// Mean and standard error of a metric over successful outcomes.
GridPoint summarize_outcomes(double x, const std::vector<TrialOutcome>& outcomes,
                             double (*metric)(const GameResult&));

double metric_regret(const GameResult& r);
double metric_loss_regret(const GameResult& r);
double metric_switches(const GameResult& r);

}  // namespace mrwb
