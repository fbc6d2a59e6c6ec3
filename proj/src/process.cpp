#include "mrwbandit/process.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mrwb {
namespace {

void require_round(Round t, Round horizon) {
    if (t < 1 || t > horizon) {
        throw std::out_of_range("round " + std::to_string(t) + " outside [1, " +
                                std::to_string(horizon) + "]");
    }
}

Round checked_parent(const ParentFunction& pf, Round t) {
    const Round r = pf(t);
    if (r >= t) {
        throw std::domain_error("parent function '" + pf.name() + "' violates rho(t) < t at t=" +
                                std::to_string(t) + " (rho=" + std::to_string(r) + ")");
    }
    return r;
}

double draw_increment(Engine& engine, std::normal_distribution<double>& normal, double sigma) {
    const double z = normal(engine);
    return sigma == 0.0 ? 0.0 : sigma * z;
}

}  // namespace

std::string_view to_string(ParentKind kind) {
    switch (kind) {
        case ParentKind::Iid: return "iid";
        case ParentKind::SimpleWalk: return "walk";
        case ParentKind::Mrw: return "mrw";
        case ParentKind::Custom: return "custom";
    }
    return "unknown";
}

ParentKind parse_parent_kind(std::string_view name) {
    if (name == "iid") return ParentKind::Iid;
    if (name == "walk" || name == "simple-walk") return ParentKind::SimpleWalk;
    if (name == "mrw") return ParentKind::Mrw;
    throw std::invalid_argument("unknown parent kind '" + std::string(name) +
                                "' (expected iid, walk or mrw)");
}

ParentFunction ParentFunction::of_kind(ParentKind kind) {
    if (kind == ParentKind::Custom) {
        throw std::invalid_argument("custom parent functions need a mapping");
    }
    return ParentFunction(kind);
}

ParentFunction ParentFunction::custom(std::string name, Mapping mapping) {
    if (!mapping) throw std::invalid_argument("custom parent function without mapping");
    ParentFunction pf(ParentKind::Custom);
    pf.custom_name_ = std::move(name);
    pf.mapping_ = std::move(mapping);
    return pf;
}

std::string ParentFunction::name() const {
    if (kind_ == ParentKind::Custom) return custom_name_;
    return std::string(to_string(kind_));
}

unsigned lowest_set_bit(Round t) {
    if (t == 0) throw std::invalid_argument("lowest_set_bit is undefined at 0");
    return static_cast<unsigned>(std::countr_zero(t));
}

unsigned bit_length(Round n) { return static_cast<unsigned>(std::bit_width(n)); }

unsigned zero_bits(Round t, unsigned bits) {
    const auto ones = static_cast<unsigned>(std::popcount(t));
    return bits > ones ? bits - ones : 0;
}

Round parent(const ParentFunction& pf, Round t, Round horizon) {
    require_round(t, horizon);
    return pf(t);
}

std::vector<Round> ancestors(const ParentFunction& pf, Round t, Round horizon) {
    if (t > horizon) {
        throw std::out_of_range("round " + std::to_string(t) + " outside [0, " +
                                std::to_string(horizon) + "]");
    }
    std::vector<Round> out;
    for (Round cur = t; cur != 0;) {
        cur = checked_parent(pf, cur);
        if (cur != 0) out.push_back(cur);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::size_t ancestor_count(const ParentFunction& pf, Round t) {
    std::size_t n = 0;
    for (Round cur = t; cur != 0; ++n) cur = checked_parent(pf, cur);
    return n;
}

std::vector<std::size_t> ancestor_counts(const ParentFunction& pf, Round horizon) {
    std::vector<std::size_t> counts(horizon + 1, 0);
    for (Round t = 1; t <= horizon; ++t) counts[t] = counts[checked_parent(pf, t)] + 1;
    return counts;
}

std::size_t depth(const ParentFunction& pf, Round horizon) {
    const auto counts = ancestor_counts(pf, horizon);
    return *std::max_element(counts.begin(), counts.end());
}

std::vector<Round> cut(const ParentFunction& pf, Round t, Round horizon) {
    require_round(t, horizon);
    std::vector<Round> out;
    for (Round s = t; s <= horizon; ++s) {
        if (checked_parent(pf, s) < t) out.push_back(s);
    }
    return out;
}

std::vector<std::size_t> cut_sizes(const ParentFunction& pf, Round horizon) {
    // s belongs to cut(u) exactly for u in (rho(s), s].
    std::vector<std::ptrdiff_t> diff(horizon + 2, 0);
    for (Round s = 1; s <= horizon; ++s) {
        ++diff[checked_parent(pf, s) + 1];
        --diff[s + 1];
    }
    std::vector<std::size_t> sizes(horizon + 1, 0);
    std::ptrdiff_t running = 0;
    for (Round u = 1; u <= horizon; ++u) {
        running += diff[u];
        sizes[u] = static_cast<std::size_t>(running);
    }
    return sizes;
}

std::size_t width(const ParentFunction& pf, Round horizon) {
    if (horizon == 0) throw std::invalid_argument("width needs a positive horizon");
    const auto sizes = cut_sizes(pf, horizon);
    return *std::max_element(sizes.begin() + 1, sizes.end());
}

double drift_radius_ln(double sigma, std::size_t depth, Round horizon, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    return sigma * std::sqrt(2.0 * static_cast<double>(depth) *
                             std::log(static_cast<double>(horizon) / delta));
}

ProcessTrajectory sample_trajectory(const ParentFunction& pf, Round horizon, double sigma,
                                    std::uint64_t seed) {
    if (horizon < 1) throw std::invalid_argument("horizon must be positive");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");

    ProcessTrajectory traj{pf, horizon, sigma, seed, std::vector<double>(horizon + 1, 0.0),
                           std::vector<double>(horizon + 1, 0.0)};
    Engine engine = make_stream(seed, streams::kIncrements);
    std::normal_distribution<double> normal;
    for (Round t = 1; t <= horizon; ++t) {
        const double xi = draw_increment(engine, normal, sigma);
        traj.increments[t] = xi;
        traj.values[t] = traj.values[checked_parent(pf, t)] + xi;
    }
    return traj;
}

StreamingWalk::StreamingWalk(ParentFunction pf, Round horizon, double sigma, std::uint64_t seed)
    : pf_(std::move(pf)),
      horizon_(horizon),
      sigma_(sigma),
      engine_(make_stream(seed, streams::kIncrements)) {
    if (horizon < 1) throw std::invalid_argument("horizon must be positive");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
    switch (pf_.kind()) {
        case ParentKind::Mrw: slots_.assign(bit_length(horizon), 0.0); break;
        case ParentKind::Custom: slots_.assign(1, 0.0); break;
        default: break;
    }
}

double StreamingWalk::next() {
    if (done()) throw std::out_of_range("streaming walk exhausted");
    const Round t = next_round_++;
    const double xi = draw_increment(engine_, normal_, sigma_);
    switch (pf_.kind()) {
        case ParentKind::Iid: last_ = 0.0 + xi; break;
        case ParentKind::SimpleWalk: last_ = last_ + xi; break;
        case ParentKind::Mrw: {
            // Every index strictly between rho(t) and t has a smaller lowest
            // set bit than rho(t), so slot[delta(rho(t))] still holds W_rho(t).
            const Round r = pf_(t);
            const double base = r == 0 ? 0.0 : slots_[lowest_set_bit(r)];
            last_ = base + xi;
            const unsigned level = lowest_set_bit(t);
            slots_[level] = last_;
            live_slots_ = std::max<std::size_t>(live_slots_, level + 1);
            break;
        }
        case ParentKind::Custom: {
            last_ = slots_[checked_parent(pf_, t)] + xi;
            slots_.push_back(last_);
            live_slots_ = slots_.size();
            break;
        }
    }
    return last_;
}

}  // namespace mrwb
