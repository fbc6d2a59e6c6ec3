#pragma once

// Game engine: one oblivious loss sequence against one policy, with exact
// regret and switch accounting.
//
// Convention for X_0: by default X_0 is a sentinel outside [k], so round 1
// always counts as a switch, and that switch is attributed to X_1 only
// (sentinel_switches records it). With first_round_free, X_0 = 1 and every
// switch is between two real arms.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrwbandit/adversary.hpp"
#include "mrwbandit/players.hpp"
#include "mrwbandit/types.hpp"

namespace mrwb {

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(Round round, Action action, std::size_t arms);
    Round round() const noexcept { return round_; }

private:
    Round round_;
};

struct GameOptions {
    double switch_cost = 1.0;
    bool record_actions = false;
    bool first_round_free = false;
};

struct GameResult {
    Round horizon = 0;
    std::size_t arms = 0;
    double switch_cost = 0.0;
    std::string policy;
    std::uint64_t policy_seed = 0;
    std::uint64_t adversary_seed = 0;
    Action initial_action = kNoAction;  // X_0

    double cumulative_loss = 0.0;  // sum_t L_t(X_t), switching costs excluded
    std::size_t switches = 0;      // M
    std::size_t sentinel_switches = 0;
    std::vector<std::size_t> switches_per_action;  // M_i, index i - 1
    std::vector<std::size_t> plays_per_action;     // N_i, index i - 1
    double regret = 0.0;                           // R
    std::optional<double> regret_unclipped;        // R'
    double best_fixed_loss = 0.0;
    Action best_fixed_action = kNoAction;
    std::optional<Action> best_arm;  // chi, when known
    std::vector<Action> actions;     // X_1..X_T when recorded

    double loss_regret() const noexcept { return regret - switch_cost * static_cast<double>(switches); }
    std::optional<std::size_t> plays_of_best_arm() const {
        if (!best_arm) return std::nullopt;
        return plays_per_action[*best_arm - 1];
    }
};

// Resets `policy` with (policy_seed, T, k, c) and plays all T rounds.
GameResult run_game(const LossSequence& seq, Policy& policy, std::uint64_t policy_seed,
                    const GameOptions& options = {});

// R for a given action trace, computed from scratch.
double recompute_regret(const LossSequence& seq, const std::vector<Action>& actions, double switch_cost,
                        Action initial_action = kNoAction);

// sum_i M_i + sentinel_switches == 2 M, sum_i N_i == T.
bool accounting_identities_hold(const GameResult& result);

struct TrialSpec {
    AdversaryConfig adversary;  // seed is replaced per trial
    std::string policy;
    GameOptions options;
    std::size_t trials = 1;
    std::uint64_t seed_base = 0;
    std::size_t jobs = 1;  // 0 = all cores
};

struct TrialOutcome {
    std::size_t trial = 0;
    std::uint64_t adversary_seed = 0;
    std::uint64_t policy_seed = 0;
    std::optional<GameResult> result;
    std::string error;
};

std::uint64_t trial_adversary_seed(std::uint64_t seed_base, std::size_t trial);
std::uint64_t trial_policy_seed(std::uint64_t seed_base, std::size_t trial);

// Independent games ordered by trial index; the output does not depend on
// the number of jobs. Failing trials carry an error message instead of a
// result and do not stop the batch.
std::vector<TrialOutcome> run_trials(const TrialSpec& spec);

}  // namespace mrwb
