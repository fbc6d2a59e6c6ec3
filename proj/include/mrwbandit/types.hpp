#pragma once

#include <cstddef>

namespace mrwb {

// Rounds are 1-based; round 0 is the root of the process.
using Round = std::size_t;

// Actions are 1-based arms in [1, k]. Zero is the pre-game sentinel X_0.
using Action = std::size_t;
inline constexpr Action kNoAction = 0;

}  // namespace mrwb
