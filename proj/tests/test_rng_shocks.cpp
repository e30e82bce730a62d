#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <set>

#include "sme/shocks.hpp"
#include "sme/simulate.hpp"

using namespace sme;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
    auto a = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(a, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    auto b = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(b, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    auto c = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(c, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(ShockStreamTest, ReproducibleAndOpenUnit) {
    const ShockStream s1(42, 3, 3), s2(42, 3, 3), other(42, 4, 3);
    std::set<double> seen;
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        for (std::size_t d = 0; d < 3; ++d) {
            const double u = s1.uniform(n, d);
            EXPECT_EQ(u, s2.uniform(n, d));
            EXPECT_GT(u, 0.0);
            EXPECT_LT(u, 1.0);
            seen.insert(u);
        }
        EXPECT_NE(s1.uniform(n, 0), other.uniform(n, 0));
    }
    EXPECT_EQ(seen.size(), 6000u);
}

TEST(ShockStreamTest, UniformMoments) {
    const ShockStream s(1, 0, 1);
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 1; i <= n; ++i) {
        const double u = s.uniform(i, 0);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n, var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, 0.5, 4 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(var, 1.0 / 12.0, 1e-3);
}

TEST(NormalQuantile, MatchesBoostWithinAbsoluteTolerance) {
    const boost::math::normal_distribution<double> nd;
    double worst = 0;
    for (int i = 1; i < 100000; ++i) {
        const double p = i / 100000.0;
        worst = std::max(worst, std::abs(normal_quantile(p) - boost::math::quantile(nd, p)));
    }
    for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5, 1.0 - 1e-10, 1.0 - 1e-16}) {
        const double ref = boost::math::quantile(nd, p);
        worst = std::max(worst, std::abs(normal_quantile(p) - ref) / std::max(1.0, std::abs(ref)));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(NormalQuantile, RejectsOutsideUnitInterval) {
    EXPECT_THROW(normal_quantile(0.0), Error);
    EXPECT_THROW(normal_quantile(1.0), Error);
}

TEST(ShockCoordinateTest, QuantilesStrictlyIncreasing) {
    const std::vector<double> theta{0.3};
    const std::vector<ShockCoordinate> families{ShockCoordinate::uniform(-1, 2), ShockCoordinate::gaussian(1, 0.5),
                                                ShockCoordinate::truncated_gaussian(0, 0.5, -1.5, 1.5),
                                                ShockCoordinate::gaussian(0, 1).sd_from(0)};
    for (const auto& f : families) {
        double prev = -1e300;
        for (int i = 1; i < 1000; ++i) {
            const double v = f.quantile(i / 1000.0, theta);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
    EXPECT_DOUBLE_EQ(ShockCoordinate::gaussian(0, 1).sd_from(0).quantile(0.975, theta),
                     0.3 * normal_quantile(0.975));
}

TEST(ShockCoordinateTest, TruncatedStaysInBounds) {
    const auto t = ShockCoordinate::truncated_gaussian(0, 1, -0.5, 0.25);
    for (double u : {1e-12, 0.01, 0.5, 0.99, 1 - 1e-12}) {
        const double v = t.quantile(u, {});
        EXPECT_GE(v, -0.5);
        EXPECT_LE(v, 0.25);
    }
}

TEST(ShockCoordinateTest, InvalidParameters) {
    EXPECT_THROW(ShockCoordinate::gaussian(0, 0), Error);
    EXPECT_THROW(ShockCoordinate::uniform(1, 1), Error);
    EXPECT_THROW(ShockCoordinate::truncated_gaussian(0, 1, 2, 1), Error);
}
