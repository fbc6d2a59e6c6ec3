#include "mrwbandit/players.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mrwb {
namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

[[noreturn]] void bad_spec(std::string_view spec, std::string_view why) {
    throw std::invalid_argument("bad policy spec '" + std::string(spec) + "': " + std::string(why) +
                                "\navailable policies: " + std::string(policy_usage()));
}

template <typename T>
T parse_number(std::string_view spec, std::string_view text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) bad_spec(spec, "cannot parse number '" + std::string(text) + "'");
    return value;
}

// "key=value" or bare "value"; returns the value part after checking the key.
std::string_view argument(std::string_view spec, std::string_view arg, std::string_view key) {
    const auto eq = arg.find('=');
    if (eq == std::string_view::npos) return arg;
    if (arg.substr(0, eq) != key) bad_spec(spec, "unknown parameter '" + std::string(arg.substr(0, eq)) + "'");
    return arg.substr(eq + 1);
}

}  // namespace

std::string_view policy_usage() {
    return "const:<arm>, etc:rpa=<n>, exp3:auto, exp3:eta=<x>, betc:tau=auto, betc:tau=<n>";
}

// --- constant / scripted ---------------------------------------------------

ConstantPlayer::ConstantPlayer(Action action) : action_(action) {
    if (action < 1) throw std::invalid_argument("constant player needs an arm >= 1");
}

std::string ConstantPlayer::name() const { return "const:" + std::to_string(action_); }

void ConstantPlayer::reset(std::uint64_t, Round, std::size_t arms, double) {
    if (action_ > arms) throw std::invalid_argument("constant player arm exceeds k");
}

ScriptedPlayer::ScriptedPlayer(std::vector<Action> actions) : actions_(std::move(actions)) {}

void ScriptedPlayer::reset(std::uint64_t, Round horizon, std::size_t, double) {
    if (actions_.size() < horizon) throw std::invalid_argument("script shorter than the horizon");
}

// --- explore then commit ---------------------------------------------------

ExploreThenCommit::ExploreThenCommit(std::size_t rounds_per_arm) : rounds_per_arm_(rounds_per_arm) {
    if (rounds_per_arm == 0) throw std::invalid_argument("rounds per arm must be positive");
}

std::string ExploreThenCommit::name() const { return "etc:rpa=" + std::to_string(rounds_per_arm_); }

void ExploreThenCommit::reset(std::uint64_t, Round horizon, std::size_t arms, double) {
    if (rounds_per_arm_ * arms > horizon) {
        throw std::invalid_argument("exploration budget k * rpa = " + std::to_string(rounds_per_arm_ * arms) +
                                    " exceeds T = " + std::to_string(horizon));
    }
    arms_ = arms;
    current_round_ = 0;
    current_ = kNoAction;
    sums_.assign(arms, 0.0);
    committed_.reset();
}

Action ExploreThenCommit::choose(Round t) {
    current_round_ = t;
    if (t <= rounds_per_arm_ * arms_) {
        current_ = (t - 1) / rounds_per_arm_ + 1;
        return current_;
    }
    if (!committed_) {
        const auto best = std::min_element(sums_.begin(), sums_.end());
        committed_ = static_cast<Action>(best - sums_.begin()) + 1;
    }
    current_ = *committed_;
    return current_;
}

void ExploreThenCommit::observe(double loss) {
    // Equal block lengths, so comparing sums compares means.
    if (current_round_ <= rounds_per_arm_ * arms_) sums_[current_ - 1] += loss;
}

// --- EXP3 -------------------------------------------------------------------

Exp3::Exp3(std::optional<double> eta) : requested_eta_(eta) {
    if (eta && !(*eta > 0.0)) throw std::invalid_argument("eta must be positive");
}

std::string Exp3::name() const {
    return requested_eta_ ? "exp3:eta=" + format_double(*requested_eta_) : "exp3:auto";
}

void Exp3::reset(std::uint64_t seed, Round horizon, std::size_t arms, double) {
    if (arms < 1 || horizon < 1) throw std::invalid_argument("exp3 needs T >= 1 and k >= 1");
    const double k = static_cast<double>(arms);
    eta_ = requested_eta_.value_or(std::sqrt(2.0 * std::log(k) / (static_cast<double>(horizon) * k)));
    estimates_.assign(arms, 0.0);
    probs_.assign(arms, 1.0 / k);
    last_ = kNoAction;
    engine_ = make_stream(seed, streams::kPolicy);
}

Action Exp3::choose(Round) {
    const double lowest = *std::min_element(estimates_.begin(), estimates_.end());
    double total = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        probs_[i] = std::exp(-eta_ * (estimates_[i] - lowest));
        total += probs_[i];
    }
    for (double& p : probs_) p /= total;

    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    double acc = 0.0;
    last_ = probs_.size();
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        acc += probs_[i];
        if (u < acc) {
            last_ = i + 1;
            break;
        }
    }
    // Rounding can leave acc marginally below u; fall back to the last arm
    // with positive mass.
    while (probs_[last_ - 1] == 0.0 && last_ > 1) --last_;
    return last_;
}

void Exp3::observe(double loss) {
    if (last_ == kNoAction) throw std::logic_error("exp3 observe() before choose()");
    estimates_[last_ - 1] += loss / probs_[last_ - 1];
}

// --- batched EXP3 ----------------------------------------------------------

BatchedExp3::BatchedExp3(std::optional<std::size_t> batch_size) : requested_tau_(batch_size) {
    if (batch_size && *batch_size == 0) throw std::invalid_argument("batch size must be positive");
}

std::string BatchedExp3::name() const {
    return requested_tau_ ? "betc:tau=" + std::to_string(*requested_tau_) : "betc:tau=auto";
}

std::size_t BatchedExp3::auto_batch_size(Round horizon, std::size_t arms, double switch_cost) {
    const double raw = std::cbrt(switch_cost * switch_cost * static_cast<double>(horizon) /
                                 static_cast<double>(arms));
    const double rounded = std::ceil(raw - 1e-9);
    return std::clamp<std::size_t>(rounded < 1.0 ? 1 : static_cast<std::size_t>(rounded), 1, horizon);
}

void BatchedExp3::reset(std::uint64_t seed, Round horizon, std::size_t arms, double switch_cost) {
    if (requested_tau_ && *requested_tau_ > horizon) {
        throw std::invalid_argument("batch size " + std::to_string(*requested_tau_) + " exceeds T = " +
                                    std::to_string(horizon));
    }
    tau_ = requested_tau_.value_or(auto_batch_size(horizon, arms, switch_cost));
    batches_ = (horizon + tau_ - 1) / tau_;
    horizon_ = horizon;
    current_round_ = 0;
    current_ = kNoAction;
    batch_sum_ = 0.0;
    batch_len_ = 0;
    inner_.reset(seed, batches_, arms, switch_cost);
}

Action BatchedExp3::choose(Round t) {
    current_round_ = t;
    if ((t - 1) % tau_ == 0) current_ = inner_.choose((t - 1) / tau_ + 1);
    return current_;
}

void BatchedExp3::observe(double loss) {
    batch_sum_ += loss;
    ++batch_len_;
    if (batch_len_ == tau_ || current_round_ == horizon_) {
        inner_.observe(batch_sum_ / static_cast<double>(batch_len_));
        batch_sum_ = 0.0;
        batch_len_ = 0;
    }
}

// --- spec parsing ----------------------------------------------------------

std::unique_ptr<Policy> make_policy(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

    if (kind == "const") {
        if (arg.empty()) bad_spec(spec, "missing arm");
        return std::make_unique<ConstantPlayer>(parse_number<std::size_t>(spec, argument(spec, arg, "arm")));
    }
    if (kind == "etc") {
        if (arg.empty()) bad_spec(spec, "missing rpa");
        return std::make_unique<ExploreThenCommit>(parse_number<std::size_t>(spec, argument(spec, arg, "rpa")));
    }
    if (kind == "exp3") {
        const auto value = arg.empty() ? std::string_view{"auto"} : argument(spec, arg, "eta");
        if (value == "auto") return std::make_unique<Exp3>();
        const double eta = parse_number<double>(spec, value);
        if (!(eta > 0.0)) bad_spec(spec, "eta must be positive");
        return std::make_unique<Exp3>(eta);
    }
    if (kind == "betc") {
        const auto value = arg.empty() ? std::string_view{"auto"} : argument(spec, arg, "tau");
        if (value == "auto") return std::make_unique<BatchedExp3>();
        const auto tau = parse_number<std::size_t>(spec, value);
        if (tau == 0) bad_spec(spec, "tau must be positive");
        return std::make_unique<BatchedExp3>(tau);
    }
    bad_spec(spec, "unknown policy '" + std::string(kind) + "'");
}

}  // namespace mrwb
