#pragma once

// Bandit-feedback players.
//
// A policy sees nothing but its own past actions and the losses it incurred:
// the engine calls choose(t) and then observe(L_t(X_t)), once per round.
// Randomized policies draw from a generator seeded in reset(), so a fixed
// (seed, observation sequence) always reproduces the same actions.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrwbandit/rng.hpp"
#include "mrwbandit/types.hpp"

namespace mrwb {

class Policy {
public:
    virtual ~Policy() = default;

    // Canonical spec string, e.g. "exp3:auto".
    virtual std::string name() const = 0;
    virtual void reset(std::uint64_t seed, Round horizon, std::size_t arms, double switch_cost) = 0;
    virtual Action choose(Round t) = 0;
    virtual void observe(double loss) = 0;
    virtual std::unique_ptr<Policy> clone() const = 0;
};

class ConstantPlayer final : public Policy {
public:
    explicit ConstantPlayer(Action action);

    std::string name() const override;
    void reset(std::uint64_t seed, Round horizon, std::size_t arms, double switch_cost) override;
    Action choose(Round) override { return action_; }
    void observe(double) override {}
    std::unique_ptr<Policy> clone() const override { return std::make_unique<ConstantPlayer>(*this); }

private:
    Action action_;
};

// Plays a fixed action list, ignoring feedback.
class ScriptedPlayer final : public Policy {
public:
    explicit ScriptedPlayer(std::vector<Action> actions);

    std::string name() const override { return "script"; }
    void reset(std::uint64_t seed, Round horizon, std::size_t arms, double switch_cost) override;
    Action choose(Round t) override { return actions_.at(t - 1); }
    void observe(double) override {}
    std::unique_ptr<Policy> clone() const override { return std::make_unique<ScriptedPlayer>(*this); }

private:
    std::vector<Action> actions_;
};

// Arms 1..k in contiguous blocks of rounds_per_arm, then the arm with the
// lowest observed mean forever (lowest index on ties).
class ExploreThenCommit final : public Policy {
public:
    explicit ExploreThenCommit(std::size_t rounds_per_arm);

    std::string name() const override;
    void reset(std::uint64_t seed, Round horizon, std::size_t arms, double switch_cost) override;
    Action choose(Round t) override;
    void observe(double loss) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<ExploreThenCommit>(*this); }

    std::optional<Action> committed() const noexcept { return committed_; }

private:
    std::size_t rounds_per_arm_;
    std::size_t arms_ = 0;
    Round current_round_ = 0;
    Action current_ = kNoAction;
    std::vector<double> sums_;
    std::optional<Action> committed_;
};

// Exponential weights on importance-weighted loss estimates,
// p_t(i) proportional to exp(-eta * sum_{s<t} Z_s [X_s = i] / p_s(i)).
// With no eta given, eta = sqrt(2 ln k / (T k)) for the horizon passed to
// reset(). Log-weights are normalized by max-subtraction.
class Exp3 final : public Policy {
public:
    explicit Exp3(std::optional<double> eta = std::nullopt);

    std::string name() const override;
    void reset(std::uint64_t seed, Round horizon, std::size_t arms, double switch_cost) override;
    Action choose(Round t) override;
    void observe(double loss) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<Exp3>(*this); }

    double eta() const noexcept { return eta_; }
    // Distribution used by the latest choose().
    std::span<const double> probabilities() const noexcept { return probs_; }

private:
    std::optional<double> requested_eta_;
    double eta_ = 0.0;
    std::vector<double> estimates_;
    std::vector<double> probs_;
    Action last_ = kNoAction;
    Engine engine_;
};

// EXP3 over batches of tau rounds: one arm per batch, the inner learner is
// fed the mean loss observed in the batch. Without an explicit tau,
// tau = ceil(c^{2/3} (T/k)^{1/3}), clamped to [1, T].
class BatchedExp3 final : public Policy {
public:
    explicit BatchedExp3(std::optional<std::size_t> batch_size = std::nullopt);

    std::string name() const override;
    void reset(std::uint64_t seed, Round horizon, std::size_t arms, double switch_cost) override;
    Action choose(Round t) override;
    void observe(double loss) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<BatchedExp3>(*this); }

    std::size_t batch_size() const noexcept { return tau_; }
    std::size_t batch_count() const noexcept { return batches_; }

    static std::size_t auto_batch_size(Round horizon, std::size_t arms, double switch_cost);

private:
    std::optional<std::size_t> requested_tau_;
    std::size_t tau_ = 1;
    std::size_t batches_ = 0;
    Round horizon_ = 0;
    Round current_round_ = 0;
    Action current_ = kNoAction;
    double batch_sum_ = 0.0;
    std::size_t batch_len_ = 0;
    Exp3 inner_;
};

// Parses "const:<arm>", "etc:rpa=<n>", "exp3:auto", "exp3:eta=<x>",
// "betc:tau=auto", "betc:tau=<n>". Throws std::invalid_argument listing the
// accepted forms on anything else.
std::unique_ptr<Policy> make_policy(std::string_view spec);

std::string_view policy_usage();

}  // namespace mrwb
