#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "mrwbandit/process.hpp"

using namespace mrwb;

namespace {

// Brute-force oracles: iterate rho / scan every s directly.
std::vector<Round> brute_ancestors(const ParentFunction& pf, Round t) {
    std::set<Round> out;
    for (Round s = t; s > 0;) {
        s = pf(s);
        if (s > 0) out.insert(s);
    }
    return {out.begin(), out.end()};
}

std::vector<Round> brute_cut(const ParentFunction& pf, Round t, Round T) {
    std::vector<Round> out;
    for (Round s = 1; s <= T; ++s)
        if (pf(s) < t && t <= s) out.push_back(s);
    return out;
}

const ParentFunction kAll[] = {ParentFunction::iid(), ParentFunction::simple_walk(), ParentFunction::mrw()};

}  // namespace

TEST(LowestSetBit, Examples) {
    EXPECT_EQ(lowest_set_bit(1), 0u);
    EXPECT_EQ(lowest_set_bit(4), 2u);
    EXPECT_EQ(lowest_set_bit(12), 2u);
    EXPECT_THROW(lowest_set_bit(0), std::invalid_argument);
}

TEST(BitHelpers, LengthAndZeros) {
    EXPECT_EQ(bit_length(1), 1u);
    EXPECT_EQ(bit_length(7), 3u);
    EXPECT_EQ(bit_length(8), 4u);
    EXPECT_EQ(zero_bits(5, 4), 2u);   // 0101
    EXPECT_EQ(zero_bits(16, 5), 4u);  // 10000
}

TEST(Parent, Examples) {
    const Round T = 200;
    EXPECT_EQ(parent(ParentFunction::mrw(), 180, T), 176u);
    EXPECT_EQ(parent(ParentFunction::mrw(), 6, T), 4u);
    EXPECT_EQ(parent(ParentFunction::simple_walk(), 7, T), 6u);
    EXPECT_EQ(parent(ParentFunction::iid(), 7, T), 0u);
}

TEST(Parent, RejectsOutOfRange) {
    EXPECT_THROW(parent(ParentFunction::mrw(), 0, 8), std::out_of_range);
    EXPECT_THROW(parent(ParentFunction::mrw(), 9, 8), std::out_of_range);
}

TEST(Parent, MrwEdgesUpToSeven) {
    const auto pf = ParentFunction::mrw();
    const Round expected[] = {0, 0, 0, 2, 0, 4, 4, 6};
    for (Round t = 1; t <= 7; ++t) EXPECT_EQ(parent(pf, t, 7), expected[t]) << "t=" << t;
}

TEST(ParentKind, ParseAndPrint) {
    for (auto k : {ParentKind::Iid, ParentKind::SimpleWalk, ParentKind::Mrw})
        EXPECT_EQ(parse_parent_kind(to_string(k)), k);
    EXPECT_THROW(parse_parent_kind("brownian"), std::invalid_argument);
}

TEST(Ancestors, Examples) {
    const auto pf = ParentFunction::mrw();
    EXPECT_TRUE(ancestors(pf, 0, 8).empty());
    EXPECT_EQ(ancestors(pf, 7, 8), (std::vector<Round>{4, 6}));
    EXPECT_EQ(ancestors(pf, 5, 8), (std::vector<Round>{4}));
}

TEST(Ancestors, MatchBruteForce) {
    for (const auto& pf : kAll) {
        for (Round t = 0; t <= 300; ++t) {
            const auto a = ancestors(pf, t, 300);
            EXPECT_EQ(a, brute_ancestors(pf, t)) << pf.name() << " t=" << t;
            EXPECT_EQ(ancestor_count(pf, t), t == 0 ? 0 : a.size() + 1);
        }
    }
}

TEST(Ancestors, MrwCountIsPopcount) {
    const auto counts = ancestor_counts(ParentFunction::mrw(), 5000);
    for (Round t = 1; t <= 5000; ++t) ASSERT_EQ(counts[t], static_cast<std::size_t>(std::popcount(t)));
}

TEST(Depth, Examples) {
    EXPECT_EQ(depth(ParentFunction::mrw(), 7), 3u);
    for (Round T : {1u, 5u, 100u}) EXPECT_EQ(depth(ParentFunction::iid(), T), 1u);
    EXPECT_EQ(depth(ParentFunction::simple_walk(), 16), 16u);
}

TEST(Depth, RejectsBrokenCustomMapping) {
    const auto bad = ParentFunction::custom("self", [](Round t) { return t; });
    EXPECT_THROW(depth(bad, 4), std::domain_error);
}

TEST(Cut, Examples) {
    EXPECT_EQ(cut(ParentFunction::mrw(), 1, 7), (std::vector<Round>{1, 2, 4}));
    for (Round t = 1; t <= 20; ++t) EXPECT_EQ(cut(ParentFunction::simple_walk(), t, 20), std::vector<Round>{t});
    std::vector<Round> tail;
    for (Round s = 6; s <= 20; ++s) tail.push_back(s);
    EXPECT_EQ(cut(ParentFunction::iid(), 6, 20), tail);
}

TEST(Cut, SizesMatchBruteForce) {
    for (const auto& pf : kAll) {
        for (Round T : {1u, 2u, 7u, 16u, 33u, 100u}) {
            const auto sizes = cut_sizes(pf, T);
            std::size_t w = 0;
            for (Round t = 1; t <= T; ++t) {
                const auto c = brute_cut(pf, t, T);
                EXPECT_EQ(cut(pf, t, T), c);
                EXPECT_EQ(sizes[t], c.size());
                w = std::max(w, c.size());
            }
            EXPECT_EQ(width(pf, T), w) << pf.name() << " T=" << T;
        }
    }
}

TEST(Cut, PartitionProperty) {
    const auto pf = ParentFunction::mrw();
    const Round T = 64;
    for (Round s = 1; s <= T; ++s) {
        for (Round u = 1; u <= T; ++u) {
            const auto c = cut(pf, u, T);
            const bool member = std::find(c.begin(), c.end(), s) != c.end();
            EXPECT_EQ(member, pf(s) < u && u <= s) << "s=" << s << " u=" << u;
        }
        const auto own = cut(pf, s, T);
        EXPECT_NE(std::find(own.begin(), own.end(), s), own.end());
    }
}

TEST(Cut, MrwZeroBitBound) {
    const auto pf = ParentFunction::mrw();
    for (Round T = 1; T <= 1024; ++T) {
        const auto sizes = cut_sizes(pf, T);
        const unsigned bits = bit_length(T);
        for (Round t = 1; t <= T; ++t) ASSERT_LE(sizes[t], zero_bits(t, bits) + 1u) << "T=" << T << " t=" << t;
    }
}

TEST(Width, Examples) {
    EXPECT_EQ(width(ParentFunction::mrw(), 7), 3u);
    EXPECT_EQ(width(ParentFunction::mrw(), 16), 5u);
    for (Round T : {1u, 9u, 64u}) {
        EXPECT_EQ(width(ParentFunction::simple_walk(), T), 1u);
        EXPECT_EQ(width(ParentFunction::iid(), T), T);
    }
}

TEST(Width, MrwLogBound) {
    for (Round T = 1; T <= 4096; T = T * 3 / 2 + 1) {
        const std::size_t bound = bit_length(T);
        EXPECT_LE(depth(ParentFunction::mrw(), T), bound);
        EXPECT_LE(width(ParentFunction::mrw(), T), bound);
    }
}

TEST(DriftRadius, NaturalLog) {
    EXPECT_NEAR(drift_radius_ln(0.05, 13, 4096, 0.1), 0.05 * std::sqrt(2.0 * 13 * std::log(40960.0)), 1e-15);
    EXPECT_EQ(drift_radius_ln(0.0, 13, 4096, 0.1), 0.0);
}

TEST(SampleTrajectory, ZeroSigmaIsFlat) {
    for (const auto& pf : kAll) {
        const auto tr = sample_trajectory(pf, 50, 0.0, 3);
        ASSERT_EQ(tr.values.size(), 51u);
        for (double w : tr.values) EXPECT_EQ(w, 0.0);
    }
}

TEST(SampleTrajectory, SumOfAncestorIncrements) {
    const auto pf = ParentFunction::mrw();
    const auto tr = sample_trajectory(pf, 300, 0.3, 11);
    EXPECT_EQ(tr.values[0], 0.0);
    EXPECT_EQ(tr.increments[0], 0.0);
    for (Round t = 1; t <= 300; ++t) {
        double sum = tr.increments[t];
        for (Round a : ancestors(pf, t, 300)) sum += tr.increments[a];
        EXPECT_NEAR(tr.values[t], sum, 1e-12) << "t=" << t;
    }
}

TEST(SampleTrajectory, IidValuesAreIncrements) {
    const auto tr = sample_trajectory(ParentFunction::iid(), 100, 1.0, 5);
    for (Round t = 1; t <= 100; ++t) EXPECT_EQ(tr.values[t], tr.increments[t]);
}

TEST(SampleTrajectory, DeterministicPerSeed) {
    const auto a = sample_trajectory(ParentFunction::mrw(), 500, 0.1, 9);
    const auto b = sample_trajectory(ParentFunction::mrw(), 500, 0.1, 9);
    const auto c = sample_trajectory(ParentFunction::mrw(), 500, 0.1, 10);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
}

TEST(StreamingWalk, EqualsMaterialized) {
    for (const auto& pf : kAll) {
        const auto tr = sample_trajectory(pf, 1024, 0.1, 42);
        StreamingWalk walk(pf, 1024, 0.1, 42);
        for (Round t = 1; t <= 1024; ++t) {
            ASSERT_FALSE(walk.done());
            ASSERT_EQ(walk.next(), tr.values[t]) << pf.name() << " t=" << t;
        }
        EXPECT_TRUE(walk.done());
    }
}

TEST(StreamingWalk, MrwSlotsWithinLogBound) {
    const Round T = 1000;
    StreamingWalk walk(ParentFunction::mrw(), T, 0.1, 1);
    EXPECT_LE(walk.slot_count(), bit_length(T));
    while (!walk.done()) {
        walk.next();
        ASSERT_LE(walk.live_slots(), bit_length(T));
    }
}

TEST(StreamingWalk, SingleRound) {
    const auto tr = sample_trajectory(ParentFunction::mrw(), 1, 0.5, 8);
    StreamingWalk walk(ParentFunction::mrw(), 1, 0.5, 8);
    EXPECT_EQ(walk.next(), tr.increments[1]);
    EXPECT_TRUE(walk.done());
}

TEST(StreamingWalk, CustomMappingFallsBack) {
    const auto pf = ParentFunction::custom("half", [](Round t) { return t / 2; });
    const auto tr = sample_trajectory(pf, 200, 0.2, 4);
    StreamingWalk walk(pf, 200, 0.2, 4);
    for (Round t = 1; t <= 200; ++t) ASSERT_EQ(walk.next(), tr.values[t]);
}

TEST(SampleTrajectory, VarianceIdentity) {
    // Var(W_t) = ancestor_count(t) sigma^2, within 5 relative standard errors
    // of the sample variance (RSE = sqrt(2 / (n - 1)) for Gaussians).
    const auto pf = ParentFunction::mrw();
    const Round T = 256;
    const double sigma = 0.2;
    const std::size_t n = 10000;
    const Round probes[] = {1, 7, 128, 255};
    std::vector<double> sum(T + 1), sq(T + 1);
    for (std::size_t i = 0; i < n; ++i) {
        StreamingWalk walk(pf, T, sigma, derive_seed(77, i));
        for (Round t = 1; t <= T; ++t) {
            const double w = walk.next();
            sum[t] += w;
            sq[t] += w * w;
        }
    }
    const double rse = std::sqrt(2.0 / (n - 1));
    for (Round t : probes) {
        const double mean = sum[t] / n;
        const double var = (sq[t] - n * mean * mean) / (n - 1);
        const double expected = static_cast<double>(ancestor_count(pf, t)) * sigma * sigma;
        EXPECT_NEAR(var / expected, 1.0, 5 * rse) << "t=" << t;
    }
}
