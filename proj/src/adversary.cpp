#include "mrwbandit/adversary.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mrwb {

std::string_view to_string(LossVariant variant) {
    return variant == LossVariant::Clipped ? "clipped" : "binary";
}

LossVariant parse_loss_variant(std::string_view name) {
    if (name == "clipped") return LossVariant::Clipped;
    if (name == "binary") return LossVariant::Binary;
    throw std::invalid_argument("unknown loss variant '" + std::string(name) +
                                "' (expected clipped or binary)");
}

AdversaryParameters default_parameters(Round horizon, std::size_t arms, double switch_cost) {
    if (horizon < 2) throw std::invalid_argument("T must be at least 2 (log2 T must be positive)");
    if (arms < 2) throw std::invalid_argument("k must be at least 2");
    if (!(switch_cost > 0.0)) throw std::invalid_argument("switch cost must be positive");
    const double T = static_cast<double>(horizon);
    const double log2T = std::log2(T);
    const double eps = std::cbrt(switch_cost * static_cast<double>(arms)) / std::cbrt(T) / (9.0 * log2T);
    return {eps, 1.0 / (9.0 * log2T)};
}

std::vector<std::string> regime_warnings(const AdversaryConfig& config) {
    std::vector<std::string> out;
    const Round floor = std::max<Round>(config.arms, 6);
    if (config.horizon < floor) {
        std::ostringstream os;
        os << "T=" << config.horizon << " is below max{k, 6}=" << floor
           << "; the lower-bound regime does not apply";
        out.push_back(os.str());
    }
    if (!config.epsilon_override && config.switch_cost > 0.0 && config.horizon >= 2) {
        const auto p = default_parameters(config.horizon, config.arms, config.switch_cost);
        if (p.epsilon >= 1.0 / 6.0) {
            std::ostringstream os;
            os << "eps=" << p.epsilon << " is not below 1/6; clipping bounds do not apply";
            out.push_back(os.str());
        }
    }
    return out;
}

LossSequence LossSequence::from_matrix(Round horizon, std::size_t arms, std::vector<double> losses,
                                       std::optional<Action> best_arm) {
    if (horizon < 1 || arms < 1) throw std::invalid_argument("empty loss matrix");
    if (losses.size() != horizon * arms) throw std::invalid_argument("loss matrix has wrong size");
    for (double v : losses) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("loss outside [0, 1]");
    }
    if (best_arm && (*best_arm < 1 || *best_arm > arms)) {
        throw std::invalid_argument("best arm outside [1, k]");
    }
    LossSequence seq;
    seq.horizon_ = horizon;
    seq.arms_ = arms;
    seq.best_arm_ = best_arm;
    seq.dense_ = std::move(losses);
    return seq;
}

void LossSequence::check(Round t, Action x) const {
    if (t < 1 || t > horizon_ || x < 1 || x > arms_) {
        throw std::out_of_range("loss index (t=" + std::to_string(t) + ", x=" + std::to_string(x) +
                                ") outside the sequence");
    }
}

double LossSequence::raw(Round t, Action x) const {
    const double gap = (best_arm_ && x == *best_arm_) ? epsilon_ : 0.0;
    return trajectory_->values[t] + baseline_ - gap;
}

double LossSequence::bias(Round t, Action x) const {
    check(t, x);
    if (!trajectory_) return dense_[(t - 1) * arms_ + (x - 1)];
    return clip(raw(t, x));
}

double LossSequence::loss(Round t, Action x) const {
    const double b = bias(t, x);
    if (config_ && config_->variant == LossVariant::Binary) {
        return counter_uniform(coin_seed_, t, x) < b ? 1.0 : 0.0;
    }
    return b;
}

bool LossSequence::has_unclipped() const noexcept {
    return config_.has_value() && config_->retain_unclipped;
}

double LossSequence::unclipped(Round t, Action x) const {
    check(t, x);
    if (!has_unclipped()) throw std::logic_error("unclipped losses were not retained");
    return raw(t, x);
}

std::vector<double> LossSequence::column_sums() const {
    std::vector<double> sums(arms_, 0.0);
    if (trajectory_ && config_->variant == LossVariant::Clipped) {
        // All columns other than chi coincide.
        double chi_sum = 0.0;
        double other_sum = 0.0;
        const Action chi = *best_arm_;
        const Action other = chi == 1 ? 2 : 1;
        for (Round t = 1; t <= horizon_; ++t) {
            chi_sum += clip(raw(t, chi));
            other_sum += clip(raw(t, other));
        }
        for (Action x = 1; x <= arms_; ++x) sums[x - 1] = x == chi ? chi_sum : other_sum;
        return sums;
    }
    for (Round t = 1; t <= horizon_; ++t) {
        for (Action x = 1; x <= arms_; ++x) sums[x - 1] += loss(t, x);
    }
    return sums;
}

std::vector<double> LossSequence::unclipped_column_sums() const {
    if (!has_unclipped()) throw std::logic_error("unclipped losses were not retained");
    std::vector<double> sums(arms_, 0.0);
    for (Round t = 1; t <= horizon_; ++t) {
        for (Action x = 1; x <= arms_; ++x) sums[x - 1] += raw(t, x);
    }
    return sums;
}

LossSequence generate(const AdversaryConfig& config) {
    if (config.horizon < 2) throw std::invalid_argument("T must be at least 2");
    if (config.arms < 2) throw std::invalid_argument("k must be at least 2");
    if (!(config.switch_cost >= 0.0)) throw std::invalid_argument("switch cost must be nonnegative");

    AdversaryParameters params;
    if (!config.epsilon_override || !config.sigma_override) {
        if (config.switch_cost > 0.0) {
            params = default_parameters(config.horizon, config.arms, config.switch_cost);
        } else if (!config.epsilon_override) {
            throw std::invalid_argument("switch cost 0 needs an explicit epsilon");
        } else {
            params.sigma = default_parameters(config.horizon, config.arms, 1.0).sigma;
        }
    }
    if (config.epsilon_override) params.epsilon = *config.epsilon_override;
    if (config.sigma_override) params.sigma = *config.sigma_override;
    if (!(params.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    if (!(params.sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");

    LossSequence seq;
    seq.horizon_ = config.horizon;
    seq.arms_ = config.arms;
    seq.config_ = config;
    seq.epsilon_ = params.epsilon;
    seq.sigma_ = params.sigma;
    seq.baseline_ = config.baseline_override.value_or(0.5);
    seq.coin_seed_ = derive_seed(config.seed, streams::kCoins);

    Engine chooser = make_stream(config.seed, streams::kBestArm);
    std::uniform_int_distribution<Action> pick(1, config.arms);
    const Action drawn = pick(chooser);
    if (config.forced_best_arm) {
        const Action forced = *config.forced_best_arm;
        if (forced < 1 || forced > config.arms) throw std::invalid_argument("forced best arm outside [1, k]");
        seq.best_arm_ = forced;
    } else {
        seq.best_arm_ = drawn;
    }

    seq.trajectory_ = sample_trajectory(ParentFunction::of_kind(config.process), config.horizon,
                                        params.sigma, config.seed);

    const auto outside = [](double a) { return a < 0.0 || a > 1.0; };
    std::size_t clipped = 0;
    for (Round t = 1; t <= config.horizon; ++t) {
        const double others = seq.trajectory_->values[t] + seq.baseline_;
        if (outside(others - params.epsilon)) ++clipped;
        if (outside(others)) clipped += config.arms - 1;
    }
    seq.clipped_entries_ = clipped;
    return seq;
}

bool clipping_event_holds(const LossSequence& seq) {
    if (!seq.has_unclipped()) {
        throw std::logic_error("clipping_event_holds needs the unclipped losses");
    }
    return seq.clipped_entries() == 0;
}

}  // namespace mrwb
