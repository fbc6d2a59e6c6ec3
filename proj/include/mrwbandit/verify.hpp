#pragma once

// Self-check suite behind `mrwbandit verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "mrwbandit/process.hpp"

namespace mrwb {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // first counterexample or summary numbers
};

enum class VerifyLevel { Quick, Full };

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::Quick;
    // The function under test for the combinatorial checks; swap in a
    // corrupted mapping to confirm the checks bite.
    ParentFunction parent = ParentFunction::mrw();
    std::uint64_t seed = 20240601;
    std::size_t jobs = 0;
};

// Exhaustive over every horizon T <= max_horizon and every t in [T]:
// rho(t) < t, ancestor count = popcount(t), |cut(t)| <= zeros(t) + 1,
// depth and width <= floor(log2 T) + 1.
//
// Cut sizes only grow with T and the zero-bit bound is fixed while the bit
// length of T is, so checking the largest T of each bit length covers every
// horizon in that range.
std::vector<CheckResult> check_bit_combinatorics(const ParentFunction& pf, Round max_horizon);

// Corrupts one parent pointer of the MRW (rho(12) = 11).
ParentFunction corrupted_mrw();

std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace mrwb
