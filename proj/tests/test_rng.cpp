#include "stoplab/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace stoplab;

// Known-answer vectors of the Random123 Philox4x32-10 reference.
TEST(Philox, KnownAnswers) {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    EXPECT_EQ(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, UniformsInOpenInterval) {
    for (std::uint64_t s = 0; s < 20000; ++s) {
        const auto u = uniform_pair(s, s % 7, s / 7);
        for (double v : u) {
            EXPECT_GT(v, 0.0);
            EXPECT_LT(v, 1.0);
        }
    }
}

TEST(Philox, NormalMoments) {
    const std::size_t n = 200000;
    double m1 = 0, m2 = 0, m4 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = normal(11, i / 100, i % 100);
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    EXPECT_NEAR(m1, 0.0, 5.0 / std::sqrt(double(n)));
    EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m4, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(Philox, StreamsAreAddressable) {
    EXPECT_EQ(normal(1, 2, 3), normal(1, 2, 3));
    EXPECT_NE(normal(1, 2, 3), normal(1, 2, 4));
    EXPECT_NE(normal(1, 2, 3), normal(1, 3, 3));
    EXPECT_NE(normal(1, 2, 3), normal(2, 2, 3));
}

TEST(Philox, DerivedSeedsDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t label = 0; label < 1000; ++label) seen.insert(derive_seed(20240611, label));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(derive_seed(5, 1), derive_seed(5, 1));
}
