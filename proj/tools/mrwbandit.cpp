// mrwbandit: generate adversarial loss sequences, play and sweep bandit
// policies against them, run the self-check suite and plot results.
//
// Exit codes: 0 success, 1 verification or experiment failure, 2 usage or
// parse error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrwbandit/adversary.hpp"
#include "mrwbandit/engine.hpp"
#include "mrwbandit/experiment.hpp"
#include "mrwbandit/io.hpp"
#include "mrwbandit/parallel.hpp"
#include "mrwbandit/players.hpp"
#include "mrwbandit/svg.hpp"
#include "mrwbandit/verify.hpp"

namespace fs = std::filesystem;
using namespace mrwb;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

constexpr const char* kOutputEnv = "MRWBANDIT_OUT";

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Flag > config file > $MRWBANDIT_OUT > current directory.
fs::path output_dir(const std::string& flag, const std::string& from_config = {}) {
    if (!flag.empty()) return flag;
    if (!from_config.empty()) return from_config;
    if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
    return ".";
}

// Adversary flags shared by generate and play.
struct AdversaryFlags {
    std::string config;
    std::optional<Round> horizon;
    std::optional<std::size_t> arms;
    std::optional<double> switch_cost;
    std::string variant;
    std::string process;
    std::optional<double> epsilon, sigma, baseline;
    std::optional<Action> chi;
    std::optional<std::uint64_t> seed;
    bool drop_unclipped = false;

    void attach(CLI::App& app) {
        app.add_option("--config", config, "Experiment config file (JSON); flags override it");
        app.add_option("--T", horizon, "Number of rounds");
        app.add_option("--k", arms, "Number of arms");
        app.add_option("--c", switch_cost, "Switching cost");
        app.add_option("--variant", variant, "clipped or binary");
        app.add_option("--process", process, "Parent function: mrw, iid or walk");
        app.add_option("--epsilon", epsilon, "Override the gap (test only)");
        app.add_option("--sigma", sigma, "Override the step deviation (test only)");
        app.add_option("--baseline", baseline, "Override the 1/2 offset (test only)");
        app.add_option("--chi", chi, "Force the best arm (test only)");
        app.add_option("--seed", seed, "Adversary seed");
        app.add_flag("--drop-unclipped", drop_unclipped, "Do not retain unclipped losses");
    }

    bool inline_requested() const { return !config.empty() || horizon.has_value(); }

    std::pair<AdversaryConfig, std::string> resolve() const {
        ExperimentConfig base;
        if (!config.empty()) base = load_experiment_config(config);
        if (horizon) base.horizons = {*horizon};
        if (arms) base.arms = *arms;
        if (switch_cost) base.switch_costs = {*switch_cost};
        if (!variant.empty()) base.variant = parse_loss_variant(variant);
        if (!process.empty()) base.process = parse_parent_kind(process);
        if (epsilon) base.epsilon_override = epsilon;
        if (sigma) base.sigma_override = sigma;
        if (baseline) base.baseline_override = baseline;
        if (chi) base.forced_best_arm = chi;
        if (drop_unclipped) base.emit.unclipped = false;
        if (base.horizons.empty()) throw UsageError("--T is required");
        const std::uint64_t s = seed ? *seed : base.seed.value_or(0);
        if (!seed && !base.seed) throw UsageError("--seed is required");
        AdversaryConfig cfg = base.adversary(base.horizons.front(), base.switch_costs.front());
        cfg.seed = s;
        return {cfg, base.output_dir};
    }
};

int cmd_generate(const AdversaryFlags& flags, const std::string& out_flag) {
    const auto [cfg, cfg_out] = flags.resolve();
    for (const auto& w : regime_warnings(cfg)) std::cerr << "warning: " << w << '\n';
    const LossSequence seq = generate(cfg);
    const fs::path dir = output_dir(out_flag, cfg_out);
    write_text(dir / "losses.csv", loss_csv(seq));
    write_text(sidecar_path(dir / "losses.csv"), loss_metadata(seq).dump(2) + "\n");
    write_text(dir / "trajectory.csv", trajectory_csv(*seq.trajectory()));
    write_text(sidecar_path(dir / "trajectory.csv"), trajectory_metadata(*seq.trajectory()).dump(2) + "\n");
    std::cout << "wrote " << (dir / "losses.csv").string() << " (T=" << seq.horizon() << ", k=" << seq.arms()
              << ", chi=" << *seq.best_arm() << ", eps=" << format_number(seq.epsilon())
              << ", sigma=" << format_number(seq.sigma()) << ")\n";
    return kOk;
}

struct PlayFlags {
    std::string losses;
    std::string policy;
    std::uint64_t policy_seed = 0;
    bool first_round_free = false;
    bool actions = false;
};

int cmd_play(const AdversaryFlags& adv, const PlayFlags& flags, const std::string& out_flag) {
    std::optional<LossSequence> seq;
    Json params;
    std::string cfg_out;
    const double c = adv.switch_cost.value_or(1.0);
    if (!flags.losses.empty()) {
        if (adv.inline_requested()) throw UsageError("use either --losses or inline adversary flags");
        seq = read_loss_file(flags.losses);
        params["losses"] = loss_metadata(*seq);
        params["T"] = seq->horizon();
        params["k"] = seq->arms();
    } else {
        auto [cfg, dir] = adv.resolve();
        cfg_out = dir;
        for (const auto& w : regime_warnings(cfg)) std::cerr << "warning: " << w << '\n';
        seq = generate(cfg);
        params["adversary"] = loss_metadata(*seq);
    }
    auto policy = make_policy(flags.policy);
    GameOptions opts;
    opts.switch_cost = flags.losses.empty() ? seq->config()->switch_cost : c;
    opts.record_actions = flags.actions;
    opts.first_round_free = flags.first_round_free;
    params["policy"] = policy->name();
    params["policy_seed"] = flags.policy_seed;
    params["c"] = opts.switch_cost;
    params["first_round_free"] = opts.first_round_free;

    const GameResult r = run_game(*seq, *policy, flags.policy_seed, opts);
    const fs::path dir = output_dir(out_flag, cfg_out);
    write_text(dir / "result.csv", results_csv(params, {to_row(0, r)}));
    if (flags.actions) {
        std::string trace = metadata_line(params) + actions_header();
        append_actions(trace, 0, r);
        write_text(dir / "actions.csv", trace);
    }
    std::cout << "policy          " << r.policy << '\n'
              << "R               " << format_number(r.regret) << '\n'
              << "R_prime         " << (r.regret_unclipped ? format_number(*r.regret_unclipped) : "n/a") << '\n'
              << "M               " << r.switches << '\n'
              << "best_fixed_loss " << format_number(r.best_fixed_loss) << '\n'
              << "cumulative_loss " << format_number(r.cumulative_loss) << '\n';
    if (r.best_arm) std::cout << "N_chi           " << *r.plays_of_best_arm() << " (chi=" << *r.best_arm << ")\n";
    return kOk;
}

struct SweepFlags {
    std::string config;
    std::vector<std::string> policies;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 0;
};

PlotSpec scaling_plot(const std::vector<SeriesSummary>& series, bool regret) {
    PlotSpec spec;
    spec.title = regret ? "Regret vs T" : "Switches vs T";
    spec.x_label = "T";
    spec.y_label = regret ? "mean regret" : "mean switches";
    spec.log_x = spec.log_y = true;
    for (const auto& s : series) {
        PlotSeries p;
        p.label = s.policy + (s.switch_cost == 1.0 ? "" : " c=" + format_number(s.switch_cost));
        for (const auto& g : regret ? s.regret : s.switches) {
            p.x.push_back(g.x);
            p.y.push_back(g.mean);
            p.yerr.push_back(g.standard_error);
        }
        const auto& fit = regret ? s.regret_fit : s.switch_fit;
        if (fit) p.slope = fit->slope;
        spec.series.push_back(std::move(p));
    }
    return spec;
}

std::string csv_quote_body(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch == '\n' ? ' ' : ch;
    }
    return out;
}

int cmd_sweep(const SweepFlags& flags, const std::string& out_flag) {
    ExperimentConfig cfg = load_experiment_config(flags.config);
    if (!flags.policies.empty()) cfg.policies = flags.policies;
    if (flags.trials) cfg.trials = *flags.trials;
    if (flags.seed) cfg.seed = flags.seed;
    if (!cfg.seed) throw UsageError("sweep needs a seed (config 'seed' or --seed)");
    if (cfg.policies.empty()) throw UsageError("sweep needs at least one policy");
    for (const auto& p : cfg.policies) make_policy(p);

    const fs::path dir = output_dir(out_flag, cfg.output_dir);
    const auto rows = run_sweep(cfg, flags.jobs);
    const Json params = to_json(cfg);

    std::string failures;
    std::string trace = metadata_line(params) + actions_header();
    for (const auto& row : rows) {
        if (!row.outcome.result) {
            failures += std::to_string(row.outcome.trial) + ',' + std::to_string(row.horizon) + ',' +
                        format_number(row.switch_cost) + ',' + row.policy + ',' + std::to_string(row.outcome.adversary_seed) +
                        ",\"" + csv_quote_body(row.outcome.error) + "\"\n";
        } else if (cfg.emit.actions) {
            append_actions(trace, row.outcome.trial, *row.outcome.result);
        }
    }
    const auto results = result_rows(rows);
    write_text(dir / "results.csv", results_csv(params, results));
    const auto series = summarize_results(results);
    Json summary;
    summary["tool"] = std::string(kToolName);
    summary["version"] = std::string(kToolVersion);
    summary["config"] = params;
    summary["series"] = summary_json(series);
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    if (cfg.emit.actions) write_text(dir / "actions.csv", trace);
    if (cfg.emit.plots) {
        write_text(dir / "regret_vs_T.svg", render_svg(scaling_plot(series, true)));
        write_text(dir / "switches_vs_T.svg", render_svg(scaling_plot(series, false)));
    }

    for (const auto& s : series) {
        std::cout << s.policy << " c=" << format_number(s.switch_cost);
        if (s.regret_fit) std::cout << " regret slope " << s.regret_fit->slope;
        if (s.switch_fit) std::cout << " switch slope " << s.switch_fit->slope;
        std::cout << '\n';
    }
    std::cout << results.size() << " result rows written to " << (dir / "results.csv").string() << '\n';
    if (!failures.empty()) {
        write_text(dir / "failures.csv", metadata_line(params) + "trial,T,c,policy,seed,error\n" + failures);
        std::cerr << "some trials failed; see " << (dir / "failures.csv").string() << '\n';
        return kFailure;
    }
    return kOk;
}

int cmd_verify(const std::string& level, bool inject_fault, std::uint64_t seed, std::size_t jobs) {
    VerifyOptions opts;
    if (level == "quick") {
        opts.level = VerifyLevel::Quick;
    } else if (level == "full") {
        opts.level = VerifyLevel::Full;
    } else {
        throw UsageError("--level must be quick or full");
    }
    if (inject_fault) opts.parent = corrupted_mrw();
    opts.seed = seed;
    opts.jobs = jobs;
    bool ok = true;
    for (const auto& check : run_verification(opts)) {
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail << '\n';
        ok = ok && check.passed;
    }
    std::cout << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
    return ok ? kOk : kFailure;
}

int cmd_plot(const std::string& input, const std::string& kind, const std::string& out) {
    const std::string text = read_text(input);
    std::string svg;
    if (kind == "trajectory") {
        const auto points = parse_trajectory_csv(text);
        PlotSpec spec;
        spec.title = "Trajectory";
        spec.x_label = "t";
        spec.y_label = "W_t";
        spec.markers = false;
        PlotSeries s;
        s.label = "W";
        for (const auto& p : points) {
            s.x.push_back(static_cast<double>(p.t));
            s.y.push_back(p.w);
        }
        spec.series.push_back(std::move(s));
        svg = render_svg(spec);
    } else if (kind == "regret-vs-T" || kind == "switches-vs-T") {
        const auto series = summarize_results(parse_results_csv(text));
        svg = render_svg(scaling_plot(series, kind == "regret-vs-T"));
    } else {
        throw UsageError("--kind must be regret-vs-T, switches-vs-T or trajectory");
    }
    write_text(out, svg);
    std::cout << "wrote " << out << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-scale random walk adversary for bandits with switching costs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string out_flag;
    AdversaryFlags adv;

    auto* gen = app.add_subcommand("generate", "Generate a loss sequence and its trajectory");
    adv.attach(*gen);
    gen->add_option("--out", out_flag, "Output directory (default $MRWBANDIT_OUT or .)");

    PlayFlags play_flags;
    AdversaryFlags play_adv;
    auto* play = app.add_subcommand("play", "Play one game");
    play_adv.attach(*play);
    play->add_option("--losses", play_flags.losses, "Loss CSV to replay instead of generating");
    play->add_option("--policy", play_flags.policy, std::string("Policy: ") + std::string(policy_usage()))->required();
    play->add_option("--policy-seed", play_flags.policy_seed, "Seed for randomized policies");
    play->add_flag("--first-round-free", play_flags.first_round_free, "Use X_0 = 1 instead of the sentinel");
    play->add_flag("--actions", play_flags.actions, "Write the action trace");
    play->add_option("--out", out_flag, "Output directory (default $MRWBANDIT_OUT or .)");

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "Run a T-grid x policies x trials sweep");
    sweep->add_option("--config", sweep_flags.config, "Experiment config file (JSON)")->required();
    sweep->add_option("--policy", sweep_flags.policies, "Override the policy list");
    sweep->add_option("--trials", sweep_flags.trials, "Override the trial count");
    sweep->add_option("--seed", sweep_flags.seed, "Override the seed");
    sweep->add_option("--jobs", sweep_flags.jobs, "Worker threads (default: all cores)");
    sweep->add_option("--out", out_flag, "Output directory (default: config, $MRWBANDIT_OUT or .)");

    std::string level = "quick";
    bool inject_fault = false;
    std::uint64_t verify_seed = VerifyOptions{}.seed;
    std::size_t verify_jobs = 0;
    auto* verify = app.add_subcommand("verify", "Run the invariant suites");
    verify->add_option("--level", level, "quick or full");
    verify->add_flag("--inject-fault", inject_fault, "Check a deliberately corrupted parent function");
    verify->add_option("--seed", verify_seed, "Seed for the randomized suites");
    verify->add_option("--jobs", verify_jobs, "Worker threads (default: all cores)");

    std::string plot_input, plot_kind, plot_out;
    auto* plot = app.add_subcommand("plot", "Render an SVG from a results or trajectory CSV");
    plot->add_option("--input", plot_input, "results.csv or trajectory.csv")->required();
    plot->add_option("--kind", plot_kind, "regret-vs-T, switches-vs-T or trajectory")->required();
    plot->add_option("--out", plot_out, "SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) return cmd_generate(adv, out_flag);
        if (*play) return cmd_play(play_adv, play_flags, out_flag);
        if (*sweep) return cmd_sweep(sweep_flags, out_flag);
        if (*verify) return cmd_verify(level, inject_fault, verify_seed, verify_jobs);
        if (*plot) return cmd_plot(plot_input, plot_kind, plot_out);
    } catch (const ProtocolError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
