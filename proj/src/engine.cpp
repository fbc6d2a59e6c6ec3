#include "mrwbandit/engine.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "mrwbandit/parallel.hpp"
#include "mrwbandit/rng.hpp"

namespace mrwb {

ProtocolError::ProtocolError(Round round, Action action, std::size_t arms)
    : std::runtime_error("protocol violation at round " + std::to_string(round) + ": action " +
                         std::to_string(action) + " outside [1, " + std::to_string(arms) + "]"),
      round_(round) {}

GameResult run_game(const LossSequence& seq, Policy& policy, std::uint64_t policy_seed,
                    const GameOptions& options) {
    if (!(options.switch_cost >= 0.0)) throw std::invalid_argument("switch cost must be nonnegative");
    const Round T = seq.horizon();
    const std::size_t k = seq.arms();
    policy.reset(policy_seed, T, k, options.switch_cost);

    GameResult r;
    r.horizon = T;
    r.arms = k;
    r.switch_cost = options.switch_cost;
    r.policy = policy.name();
    r.policy_seed = policy_seed;
    if (seq.config()) r.adversary_seed = seq.config()->seed;
    r.initial_action = options.first_round_free ? Action{1} : kNoAction;
    r.switches_per_action.assign(k, 0);
    r.plays_per_action.assign(k, 0);
    r.best_arm = seq.best_arm();
    if (options.record_actions) r.actions.reserve(T);

    const bool unclipped = seq.has_unclipped() && seq.config()->variant == LossVariant::Clipped;
    double unclipped_loss = 0.0;

    Action prev = r.initial_action;
    for (Round t = 1; t <= T; ++t) {
        const Action x = policy.choose(t);
        if (x < 1 || x > k) throw ProtocolError(t, x, k);
        const double z = seq.loss(t, x);
        policy.observe(z);

        r.cumulative_loss += z;
        if (unclipped) unclipped_loss += seq.unclipped(t, x);
        ++r.plays_per_action[x - 1];
        if (x != prev) {
            ++r.switches;
            ++r.switches_per_action[x - 1];
            if (prev == kNoAction) {
                ++r.sentinel_switches;
            } else {
                ++r.switches_per_action[prev - 1];
            }
        }
        prev = x;
        if (options.record_actions) r.actions.push_back(x);
    }

    const auto sums = seq.column_sums();
    const auto best = std::min_element(sums.begin(), sums.end());
    r.best_fixed_loss = *best;
    r.best_fixed_action = static_cast<Action>(best - sums.begin()) + 1;

    const double switching = options.switch_cost * static_cast<double>(r.switches);
    r.regret = r.cumulative_loss + switching - r.best_fixed_loss;
    if (unclipped) {
        const auto raw = seq.unclipped_column_sums();
        r.regret_unclipped = unclipped_loss + switching - *std::min_element(raw.begin(), raw.end());
    }
    return r;
}

double recompute_regret(const LossSequence& seq, const std::vector<Action>& actions, double switch_cost,
                        Action initial_action) {
    if (actions.size() != seq.horizon()) throw std::invalid_argument("action trace length differs from T");
    double loss = 0.0;
    std::size_t switches = 0;
    Action prev = initial_action;
    for (Round t = 1; t <= seq.horizon(); ++t) {
        const Action x = actions[t - 1];
        loss += seq.loss(t, x);
        switches += x != prev ? 1 : 0;
        prev = x;
    }
    double best = 0.0;
    for (Action x = 1; x <= seq.arms(); ++x) {
        double col = 0.0;
        for (Round t = 1; t <= seq.horizon(); ++t) col += seq.loss(t, x);
        best = x == 1 ? col : std::min(best, col);
    }
    return loss + switch_cost * static_cast<double>(switches) - best;
}

bool accounting_identities_hold(const GameResult& result) {
    const auto plays = std::accumulate(result.plays_per_action.begin(), result.plays_per_action.end(),
                                       std::size_t{0});
    const auto touched = std::accumulate(result.switches_per_action.begin(),
                                         result.switches_per_action.end(), std::size_t{0});
    return plays == result.horizon && touched + result.sentinel_switches == 2 * result.switches;
}

std::uint64_t trial_adversary_seed(std::uint64_t seed_base, std::size_t trial) {
    return derive_seed(seed_base, trial, 0xad);
}

std::uint64_t trial_policy_seed(std::uint64_t seed_base, std::size_t trial) {
    return derive_seed(seed_base, trial, 0x9a);
}

std::vector<TrialOutcome> run_trials(const TrialSpec& spec) {
    if (spec.trials == 0) throw std::invalid_argument("n_trials must be at least 1");
    // Surface a bad policy spec before spawning anything.
    const auto prototype = make_policy(spec.policy);

    std::vector<TrialOutcome> out(spec.trials);
    parallel_for(spec.trials, spec.jobs, [&](std::size_t i) {
        TrialOutcome& o = out[i];
        o.trial = i;
        o.adversary_seed = trial_adversary_seed(spec.seed_base, i);
        o.policy_seed = trial_policy_seed(spec.seed_base, i);
        try {
            AdversaryConfig cfg = spec.adversary;
            cfg.seed = o.adversary_seed;
            const LossSequence seq = generate(cfg);
            auto policy = prototype->clone();
            o.result = run_game(seq, *policy, o.policy_seed, spec.options);
        } catch (const std::exception& e) {
            o.error = e.what();
        }
    });
    return out;
}

}  // namespace mrwb
