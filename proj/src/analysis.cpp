#include "mrwbandit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mrwbandit/parallel.hpp"

namespace mrwb {

CutSwitchAudit audit_cut_switch(std::span<const Action> actions, const ParentFunction& pf, Action i,
                                Action initial, std::optional<std::size_t> w) {
    if (actions.empty()) throw std::invalid_argument("audit needs a recorded action trace");
    const auto at = [&](Round t) { return t == 0 ? initial : actions[t - 1]; };

    CutSwitchAudit a;
    a.action = i;
    a.width = w ? *w : width(pf, actions.size());
    for (Round t = 1; t <= actions.size(); ++t) {
        const bool here = at(t) == i;
        if (here != (at(pf(t)) == i)) ++a.odd_rounds;
        const Action prev = at(t - 1);
        if (at(t) != prev && (here || prev == i)) ++a.switches;
    }
    a.bound = a.width * a.switches;
    a.holds = a.odd_rounds <= a.bound;
    return a;
}

DriftCheck verify_drift(const ParentFunction& pf, Round horizon, double sigma, double delta,
                        std::size_t trials, std::uint64_t seed, std::size_t jobs) {
    if (trials < 100) throw std::invalid_argument("verify_drift needs at least 100 trials");
    DriftCheck check;
    check.trials = trials;
    check.depth = depth(pf, horizon);
    check.radius = drift_radius_ln(sigma, check.depth, horizon, delta);

    std::vector<char> exceeded(trials, 0);
    parallel_for(trials, jobs, [&](std::size_t n) {
        StreamingWalk walk(pf, horizon, sigma, derive_seed(seed, n));
        double peak = 0.0;
        while (!walk.done()) peak = std::max(peak, std::abs(walk.next()));
        exceeded[n] = peak > check.radius;
    });
    check.exceedances = static_cast<std::size_t>(std::count(exceeded.begin(), exceeded.end(), 1));
    return check;
}

double binomial_se(double p, std::size_t n) {
    return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

GridPoint summarize(double x, std::span<const double> samples) {
    GridPoint g;
    g.x = x;
    g.samples = samples.size();
    if (samples.empty()) return g;
    double sum = 0.0;
    for (double v : samples) sum += v;
    g.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double v : samples) ss += (v - g.mean) * (v - g.mean);
        g.standard_error = std::sqrt(ss / static_cast<double>(samples.size() - 1) /
                                     static_cast<double>(samples.size()));
    }
    return g;
}

ScalingFit fit_power_law(std::vector<GridPoint> grid, std::size_t min_points) {
    if (grid.size() < std::max<std::size_t>(min_points, 2)) {
        throw std::invalid_argument("power-law fit needs at least " + std::to_string(std::max<std::size_t>(min_points, 2)) +
                                    " grid points");
    }
    std::sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) { return a.x < b.x; });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i].x > 0.0)) throw std::invalid_argument("grid abscissa must be positive");
        if (!(grid[i].mean > 0.0)) {
            throw std::invalid_argument("mean at x=" + std::to_string(grid[i].x) +
                                        " is not positive; cannot take its log");
        }
        if (i > 0 && grid[i].x == grid[i - 1].x) throw std::invalid_argument("duplicate grid abscissa");
    }

    const auto n = static_cast<double>(grid.size());
    double mx = 0.0, my = 0.0;
    for (const auto& g : grid) {
        mx += std::log(g.x);
        my += std::log(g.mean);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& g : grid) {
        const double dx = std::log(g.x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(g.mean) - my);
    }

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (grid.size() > 2) {
        double ssr = 0.0;
        for (const auto& g : grid) {
            const double e = std::log(g.mean) - (fit.intercept + fit.slope * std::log(g.x));
            ssr += e * e;
        }
        fit.slope_se = std::sqrt(ssr / (n - 2.0) / sxx);
    } else {
        fit.slope_se = std::numeric_limits<double>::infinity();
    }
    fit.slope_ci = {fit.slope - 1.96 * fit.slope_se, fit.slope + 1.96 * fit.slope_se};
    fit.grid = std::move(grid);
    return fit;
}

ScalingFit fit_scaling(std::vector<GridPoint> grid) { return fit_power_law(std::move(grid), 4); }

double metric_regret(const GameResult& r) { return r.regret; }
double metric_loss_regret(const GameResult& r) { return r.loss_regret(); }
double metric_switches(const GameResult& r) { return static_cast<double>(r.switches); }

GridPoint summarize_outcomes(double x, const std::vector<TrialOutcome>& outcomes,
                             double (*metric)(const GameResult&)) {
    std::vector<double> values;
    values.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        if (o.result) values.push_back(metric(*o.result));
    }
    return summarize(x, values);
}

namespace {

void throw_on_failures(const std::vector<TrialOutcome>& outcomes) {
    for (const auto& o : outcomes) {
        if (!o.result) throw std::runtime_error("trial " + std::to_string(o.trial) + " failed: " + o.error);
    }
}

}  // namespace

std::vector<TradeoffRow> switch_tradeoff_report(const TradeoffSpec& spec) {
    if (spec.policies.empty() || spec.horizons.empty() || spec.switch_costs.empty()) {
        throw std::invalid_argument("tradeoff report needs nonempty policy, T and c grids");
    }
    std::vector<TradeoffRow> rows;
    for (const auto& policy : spec.policies) {
        for (double c : spec.switch_costs) {
            std::vector<GridPoint> loss_grid, switch_grid;
            for (Round T : spec.horizons) {
                TrialSpec ts;
                ts.adversary = spec.adversary;
                ts.adversary.horizon = T;
                ts.adversary.switch_cost = c;
                ts.policy = policy;
                ts.options.switch_cost = c;
                ts.trials = spec.trials;
                ts.seed_base = derive_seed(spec.seed, T);
                ts.jobs = spec.jobs;
                const auto outcomes = run_trials(ts);
                throw_on_failures(outcomes);
                loss_grid.push_back(summarize_outcomes(static_cast<double>(T), outcomes, metric_loss_regret));
                switch_grid.push_back(summarize_outcomes(static_cast<double>(T), outcomes, metric_switches));
            }
            TradeoffRow row;
            row.policy = make_policy(policy)->name();
            row.switch_cost = c;
            row.loss_regret = fit_power_law(std::move(loss_grid));
            row.switches = fit_power_law(std::move(switch_grid));
            row.alpha = row.loss_regret.slope;
            row.beta = row.switches.slope;
            row.frontier = 2.0 * (1.0 - row.alpha);
            row.satisfied = row.beta >= row.frontier - spec.tolerance;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

IdentificationEstimate identification_probe(std::size_t n_seeds, const AdversaryConfig& adversary,
                                            std::string_view policy, std::uint64_t seed, std::size_t jobs) {
    if (n_seeds < 200) throw std::invalid_argument("identification probe needs at least 200 seeds");
    TrialSpec ts;
    ts.adversary = adversary;
    ts.policy = std::string(policy);
    ts.options.switch_cost = adversary.switch_cost;
    ts.trials = n_seeds;
    ts.seed_base = seed;
    ts.jobs = jobs;
    const auto outcomes = run_trials(ts);
    throw_on_failures(outcomes);

    std::size_t hits = 0;
    double switches = 0.0;
    for (const auto& o : outcomes) {
        const auto& plays = o.result->plays_per_action;
        const auto most = static_cast<Action>(std::max_element(plays.begin(), plays.end()) - plays.begin()) + 1;
        hits += most == *o.result->best_arm ? 1 : 0;
        switches += static_cast<double>(o.result->switches);
    }
    IdentificationEstimate est;
    est.seeds = n_seeds;
    est.probability = static_cast<double>(hits) / static_cast<double>(n_seeds);
    est.standard_error = binomial_se(est.probability, n_seeds);
    est.mean_switches = switches / static_cast<double>(n_seeds);
    return est;
}

}  // namespace mrwb
