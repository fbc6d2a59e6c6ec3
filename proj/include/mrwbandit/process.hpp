#pragma once

// Parent-function Gaussian processes.
//
// A parent function rho maps every round t in [1, T] to an earlier index
// rho(t) < t (0 allowed). The induced process is W_0 = 0 and
// W_t = W_rho(t) + xi_t with xi_t i.i.d. N(0, sigma^2). Three kinds ship:
// i.i.d. (rho = 0), simple random walk (rho = t - 1) and the multi-scale
// random walk (rho clears the lowest set bit of t).
//
// Rounds are 1-based throughout; index 0 is the root W_0.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mrwbandit/rng.hpp"
#include "mrwbandit/types.hpp"

namespace mrwb {

enum class ParentKind { Iid, SimpleWalk, Mrw, Custom };

std::string_view to_string(ParentKind kind);
// Accepts "iid", "walk" and "mrw".
ParentKind parse_parent_kind(std::string_view name);

class ParentFunction {
public:
    using Mapping = std::function<Round(Round)>;

    static ParentFunction iid() { return ParentFunction(ParentKind::Iid); }
    static ParentFunction simple_walk() { return ParentFunction(ParentKind::SimpleWalk); }
    static ParentFunction mrw() { return ParentFunction(ParentKind::Mrw); }
    static ParentFunction of_kind(ParentKind kind);
    // Extension point. The mapping is not validated here; depth/width and
    // sampling reject a mapping that breaks rho(t) < t.
    static ParentFunction custom(std::string name, Mapping mapping);

    ParentKind kind() const noexcept { return kind_; }
    std::string name() const;

    // Unchecked evaluation, t >= 1.
    Round operator()(Round t) const {
        switch (kind_) {
            case ParentKind::Iid: return 0;
            case ParentKind::SimpleWalk: return t - 1;
            case ParentKind::Mrw: return t & (t - 1);
            case ParentKind::Custom: break;
        }
        return mapping_(t);
    }

private:
    explicit ParentFunction(ParentKind kind) : kind_(kind) {}

    ParentKind kind_;
    std::string custom_name_;
    Mapping mapping_;
};

// Index of the lowest set bit: max{i : 2^i divides t}. Rejects t = 0.
unsigned lowest_set_bit(Round t);

// floor(log2 n) + 1, the number of bits needed for every t in [1, n].
unsigned bit_length(Round n);

// Number of zero bits of t in a `bits`-wide representation.
unsigned zero_bits(Round t, unsigned bits);

// rho(t), rejecting t outside [1, horizon].
Round parent(const ParentFunction& pf, Round t, Round horizon);

// Positive ancestors of t, ascending. Index 0 is the root and is excluded.
std::vector<Round> ancestors(const ParentFunction& pf, Round t, Round horizon);

// |rho*(t)| counting the root: every t >= 1 reaches 0, so this is the number
// of increments summed into W_t (positive ancestors + 1). Zero at t = 0.
// For MRW it equals popcount(t).
std::size_t ancestor_count(const ParentFunction& pf, Round t);

// Per-round ancestor counts for t = 0..horizon, in O(horizon).
std::vector<std::size_t> ancestor_counts(const ParentFunction& pf, Round horizon);

// d(rho) = max_t ancestor_count(t).
std::size_t depth(const ParentFunction& pf, Round horizon);

// cut(t) = {s in [horizon] : rho(s) < t <= s}, ascending.
std::vector<Round> cut(const ParentFunction& pf, Round t, Round horizon);

// |cut(t)| for t = 1..horizon (entry 0 unused), in O(horizon).
std::vector<std::size_t> cut_sizes(const ParentFunction& pf, Round horizon);

// w(rho) = max_t |cut(t)|.
std::size_t width(const ParentFunction& pf, Round horizon);

// sigma * sqrt(2 d ln(T / delta)): with probability >= 1 - delta every
// |W_t| stays below this radius. Natural log.
double drift_radius_ln(double sigma, std::size_t depth, Round horizon, double delta);

struct ProcessTrajectory {
    ParentFunction parent = ParentFunction::mrw();
    Round horizon = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> values;      // W_0..W_T
    std::vector<double> increments;  // xi_0..xi_T, xi_0 = 0
};

ProcessTrajectory sample_trajectory(const ParentFunction& pf, Round horizon, double sigma,
                                    std::uint64_t seed);

// Yields W_1..W_T in order, bit-identical to sample_trajectory. MRW keeps one
// slot per lowest-set-bit level; i.i.d. and simple walk keep O(1) state.
// Custom mappings fall back to storing the whole prefix.
class StreamingWalk {
public:
    StreamingWalk(ParentFunction pf, Round horizon, double sigma, std::uint64_t seed);

    bool done() const noexcept { return next_round_ > horizon_; }
    Round next_round() const noexcept { return next_round_; }
    double next();

    std::size_t slot_count() const noexcept { return slots_.size(); }
    std::size_t live_slots() const noexcept { return live_slots_; }

private:
    ParentFunction pf_;
    Round horizon_;
    double sigma_;
    Round next_round_ = 1;
    std::vector<double> slots_;
    std::size_t live_slots_ = 0;
    double last_ = 0.0;
    Engine engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace mrwb
