#include "mrwbandit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "mrwbandit/players.hpp"

namespace mrwb {
namespace {

[[noreturn]] void config_error(const std::string& why) { throw std::invalid_argument("config: " + why); }

void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            config_error("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
T get(const Json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const Json::exception&) {
        config_error("'" + what + "' has the wrong type");
    }
}

template <typename T>
std::vector<T> scalar_or_list(const Json& j, const std::string& what) {
    std::vector<T> out;
    if (j.is_array()) {
        for (const auto& v : j) out.push_back(get<T>(v, what));
    } else {
        out.push_back(get<T>(j, what));
    }
    if (out.empty()) config_error("'" + what + "' must not be empty");
    return out;
}

}  // namespace

AdversaryConfig ExperimentConfig::adversary(Round horizon, double switch_cost) const {
    AdversaryConfig a;
    a.horizon = horizon;
    a.arms = arms;
    a.switch_cost = switch_cost;
    a.variant = variant;
    a.process = process;
    a.retain_unclipped = emit.unclipped;
    a.epsilon_override = epsilon_override;
    a.sigma_override = sigma_override;
    a.baseline_override = baseline_override;
    a.forced_best_arm = forced_best_arm;
    return a;
}

ExperimentConfig parse_experiment_config(const Json& j) {
    if (!j.is_object()) config_error("top level must be an object");
    reject_unknown(j, {"adversary", "policies", "trials", "seed", "first_round_free", "output_dir", "emit"}, "config");

    ExperimentConfig c;
    if (!j.contains("adversary")) config_error("missing 'adversary' block");
    const Json& a = j.at("adversary");
    if (!a.is_object()) config_error("'adversary' must be an object");
    reject_unknown(a, {"T", "k", "c", "variant", "process", "epsilon", "sigma", "baseline", "chi"}, "adversary");
    if (!a.contains("T")) config_error("missing adversary.T");
    c.horizons = scalar_or_list<Round>(a.at("T"), "adversary.T");
    if (a.contains("k")) c.arms = get<std::size_t>(a.at("k"), "adversary.k");
    if (a.contains("c")) c.switch_costs = scalar_or_list<double>(a.at("c"), "adversary.c");
    try {
        if (a.contains("variant")) c.variant = parse_loss_variant(get<std::string>(a.at("variant"), "variant"));
        if (a.contains("process")) c.process = parse_parent_kind(get<std::string>(a.at("process"), "process"));
    } catch (const std::invalid_argument& e) {
        config_error(e.what());
    }
    if (a.contains("epsilon")) c.epsilon_override = get<double>(a.at("epsilon"), "adversary.epsilon");
    if (a.contains("sigma")) c.sigma_override = get<double>(a.at("sigma"), "adversary.sigma");
    if (a.contains("baseline")) c.baseline_override = get<double>(a.at("baseline"), "adversary.baseline");
    if (a.contains("chi")) c.forced_best_arm = get<Action>(a.at("chi"), "adversary.chi");

    for (Round T : c.horizons) {
        if (T < 2) config_error("every T must be at least 2");
    }
    if (c.arms < 2) config_error("k must be at least 2");
    for (double cost : c.switch_costs) {
        if (!(cost >= 0.0)) config_error("switch costs must be nonnegative");
    }

    if (j.contains("policies")) c.policies = scalar_or_list<std::string>(j.at("policies"), "policies");
    for (const auto& p : c.policies) make_policy(p);
    if (j.contains("trials")) c.trials = get<std::size_t>(j.at("trials"), "trials");
    if (c.trials == 0) config_error("trials must be at least 1");
    if (j.contains("seed")) c.seed = get<std::uint64_t>(j.at("seed"), "seed");
    if (j.contains("first_round_free")) c.first_round_free = get<bool>(j.at("first_round_free"), "first_round_free");
    if (j.contains("output_dir")) c.output_dir = get<std::string>(j.at("output_dir"), "output_dir");
    if (j.contains("emit")) {
        const Json& e = j.at("emit");
        if (!e.is_object()) config_error("'emit' must be an object");
        reject_unknown(e, {"actions", "unclipped", "plots"}, "emit");
        if (e.contains("actions")) c.emit.actions = get<bool>(e.at("actions"), "emit.actions");
        if (e.contains("unclipped")) c.emit.unclipped = get<bool>(e.at("unclipped"), "emit.unclipped");
        if (e.contains("plots")) c.emit.plots = get<bool>(e.at("plots"), "emit.plots");
    }
    return c;
}

Json to_json(const ExperimentConfig& c) {
    Json a;
    a["T"] = c.horizons;
    a["k"] = c.arms;
    a["c"] = c.switch_costs;
    a["variant"] = std::string(to_string(c.variant));
    a["process"] = std::string(to_string(c.process));
    if (c.epsilon_override) a["epsilon"] = *c.epsilon_override;
    if (c.sigma_override) a["sigma"] = *c.sigma_override;
    if (c.baseline_override) a["baseline"] = *c.baseline_override;
    if (c.forced_best_arm) a["chi"] = *c.forced_best_arm;

    Json j;
    j["adversary"] = a;
    j["policies"] = c.policies;
    j["trials"] = c.trials;
    if (c.seed) j["seed"] = *c.seed;
    j["first_round_free"] = c.first_round_free;
    j["output_dir"] = c.output_dir;
    j["emit"] = {{"actions", c.emit.actions}, {"unclipped", c.emit.unclipped}, {"plots", c.emit.plots}};
    return j;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    Json j;
    try {
        j = Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        config_error(path.string() + ": " + e.what());
    }
    return parse_experiment_config(j);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::size_t jobs) {
    if (!config.seed) config_error("sweeps need an explicit seed");
    if (config.policies.empty()) config_error("no policies to sweep");
    std::vector<SweepRow> rows;
    for (Round T : config.horizons) {
        for (double c : config.switch_costs) {
            for (const auto& policy : config.policies) {
                TrialSpec spec;
                spec.adversary = config.adversary(T, c);
                spec.policy = policy;
                spec.options.switch_cost = c;
                spec.options.record_actions = config.emit.actions;
                spec.options.first_round_free = config.first_round_free;
                spec.trials = config.trials;
                spec.seed_base = derive_seed(*config.seed, T);
                spec.jobs = jobs;
                const std::string name = make_policy(policy)->name();
                for (auto& outcome : run_trials(spec)) {
                    rows.push_back({T, c, name, std::move(outcome)});
                }
            }
        }
    }
    return rows;
}

std::vector<ResultRow> result_rows(const std::vector<SweepRow>& rows) {
    std::vector<ResultRow> out;
    for (const auto& r : rows) {
        if (r.outcome.result) out.push_back(to_row(r.outcome.trial, *r.outcome.result));
    }
    return out;
}

std::vector<SeriesSummary> summarize_results(const std::vector<ResultRow>& rows) {
    using Key = std::pair<std::string, double>;
    std::vector<Key> order;
    std::map<Key, std::map<Round, std::pair<std::vector<double>, std::vector<double>>>> groups;
    for (const auto& r : rows) {
        const Key key{r.policy, r.switch_cost};
        if (!groups.contains(key)) order.push_back(key);
        auto& cell = groups[key][r.horizon];
        cell.first.push_back(r.regret);
        cell.second.push_back(static_cast<double>(r.switches));
    }

    std::vector<SeriesSummary> out;
    for (const auto& key : order) {
        SeriesSummary s;
        s.policy = key.first;
        s.switch_cost = key.second;
        for (const auto& [T, cell] : groups[key]) {
            s.regret.push_back(summarize(static_cast<double>(T), cell.first));
            s.switches.push_back(summarize(static_cast<double>(T), cell.second));
        }
        if (s.regret.size() >= 2) {
            const auto positive = [](const std::vector<GridPoint>& g) {
                return std::all_of(g.begin(), g.end(), [](const GridPoint& p) { return p.mean > 0.0; });
            };
            if (positive(s.regret)) s.regret_fit = fit_power_law(s.regret);
            if (positive(s.switches)) s.switch_fit = fit_power_law(s.switches);
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json fit_json(const std::optional<ScalingFit>& fit) {
    if (!fit) return nullptr;
    return {{"slope", fit->slope},
            {"intercept", fit->intercept},
            {"slope_se", finite_or_null(fit->slope_se)},
            {"slope_ci", {finite_or_null(fit->slope_ci.first), finite_or_null(fit->slope_ci.second)}}};
}

Json grid_json(const std::vector<GridPoint>& grid) {
    Json arr = Json::array();
    for (const auto& g : grid) arr.push_back({{"x", g.x}, {"y", g.mean}, {"yerr", g.standard_error}, {"n", g.samples}});
    return arr;
}

}  // namespace

Json summary_json(const std::vector<SeriesSummary>& series) {
    Json arr = Json::array();
    for (const auto& s : series) {
        arr.push_back({{"policy", s.policy},
                       {"c", s.switch_cost},
                       {"regret", grid_json(s.regret)},
                       {"regret_fit", fit_json(s.regret_fit)},
                       {"switches", grid_json(s.switches)},
                       {"switch_fit", fit_json(s.switch_fit)}});
    }
    return arr;
}

}  // namespace mrwb
