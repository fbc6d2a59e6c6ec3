#pragma once

// Oblivious randomized adversary built on the multi-scale random walk.
//
// Given W_{0:T} and a planted arm chi, the unclipped losses are
//   L'_t(x) = W_t + 1/2 - eps * [x == chi]
// and the emitted losses are L_t(x) = clip(L'_t(x)). The binary variant
// replaces each L_t(x) by a coin toss with that bias.
//
// Sequences are never materialized as a T x k matrix. Only the walk and chi
// are stored; entries are reconstructed on demand, and binary coins come
// from a counter-based stream keyed on (seed, t, x).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrwbandit/process.hpp"
#include "mrwbandit/types.hpp"

namespace mrwb {

enum class LossVariant { Clipped, Binary };

std::string_view to_string(LossVariant variant);
LossVariant parse_loss_variant(std::string_view name);

constexpr double clip(double a) noexcept { return a < 0.0 ? 0.0 : (a > 1.0 ? 1.0 : a); }

struct AdversaryParameters {
    double epsilon = 0.0;
    double sigma = 0.0;
};

// eps = (c k)^{1/3} T^{-1/3} / (9 log2 T), sigma = 1 / (9 log2 T).
AdversaryParameters default_parameters(Round horizon, std::size_t arms, double switch_cost);

struct AdversaryConfig {
    Round horizon = 0;
    std::size_t arms = 2;
    double switch_cost = 1.0;
    LossVariant variant = LossVariant::Clipped;
    ParentKind process = ParentKind::Mrw;
    std::uint64_t seed = 0;
    bool retain_unclipped = true;

    // Test-only knobs; any of them set marks the sequence as overridden.
    std::optional<double> epsilon_override;
    std::optional<double> sigma_override;
    std::optional<double> baseline_override;  // replaces the 1/2 offset
    std::optional<Action> forced_best_arm;

    bool overridden() const noexcept {
        return epsilon_override || sigma_override || baseline_override || forced_best_arm;
    }
};

// Human-readable notes when the configuration leaves the regime in which the
// lower-bound analysis applies (T < max{k, 6}, eps >= 1/6).
std::vector<std::string> regime_warnings(const AdversaryConfig& config);

class LossSequence {
public:
    // Dense sequence from external data, row-major [t][x], t and x 0-based.
    static LossSequence from_matrix(Round horizon, std::size_t arms, std::vector<double> losses,
                                    std::optional<Action> best_arm = std::nullopt);

    Round horizon() const noexcept { return horizon_; }
    std::size_t arms() const noexcept { return arms_; }

    double loss(Round t, Action x) const;
    double unclipped(Round t, Action x) const;
    bool has_unclipped() const noexcept;

    std::optional<Action> best_arm() const noexcept { return best_arm_; }
    // Generation inputs; absent for imported sequences.
    const std::optional<AdversaryConfig>& config() const noexcept { return config_; }
    const std::optional<ProcessTrajectory>& trajectory() const noexcept { return trajectory_; }
    double epsilon() const noexcept { return epsilon_; }
    double sigma() const noexcept { return sigma_; }
    double baseline() const noexcept { return baseline_; }

    // Bias of the loss of x at t before the binary coin (clipped value).
    double bias(Round t, Action x) const;

    // Column sums of the emitted losses, indexed by action - 1.
    std::vector<double> column_sums() const;
    std::vector<double> unclipped_column_sums() const;

    // Number of (t, x) entries altered by clip, counted during generation.
    std::size_t clipped_entries() const noexcept { return clipped_entries_; }

private:
    friend LossSequence generate(const AdversaryConfig& config);
    LossSequence() = default;

    void check(Round t, Action x) const;
    double raw(Round t, Action x) const;

    Round horizon_ = 0;
    std::size_t arms_ = 0;
    std::optional<Action> best_arm_;
    std::optional<AdversaryConfig> config_;
    std::optional<ProcessTrajectory> trajectory_;
    double epsilon_ = 0.0;
    double sigma_ = 0.0;
    double baseline_ = 0.5;
    std::uint64_t coin_seed_ = 0;
    std::size_t clipped_entries_ = 0;
    std::vector<double> dense_;
};

LossSequence generate(const AdversaryConfig& config);

// Event B: no emitted bias differs from its unclipped value. Requires the
// unclipped losses to have been retained.
bool clipping_event_holds(const LossSequence& seq);

}  // namespace mrwb
