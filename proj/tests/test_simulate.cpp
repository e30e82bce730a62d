#include <gtest/gtest.h>

#include <cmath>

#include "sme/moments.hpp"

using namespace sme;

TEST(SimulatePath, ReproducibleBitwise) {
    for (const auto& id : monotone_zoo_ids()) {
        const auto m = make_zoo_model(id);
        const Point s0(m.info().default_s0), th(m.info().default_theta);
        const auto a = simulate_path(m, s0, ShockStream(5, 0, m.shock_dim()), th, 2000);
        const auto b = simulate_path(m, s0, ShockStream(5, 0, m.shock_dim()), th, 2000);
        EXPECT_EQ(a.states, b.states) << id;
        EXPECT_EQ(a.clamp_count, b.clamp_count);
        for (std::size_t n = 1; n <= a.length(); ++n) EXPECT_TRUE(m.state_box().contains(a.state(n)));
    }
}

TEST(SimulatePath, ConstantMapIsConstant) {
    const auto m = make_zoo_model("constant");
    const auto p = simulate_path(m, Point{0.9}, ShockStream(1, 0, 1), Point{0.5}, 100);
    for (std::size_t n = 1; n <= p.length(); ++n) EXPECT_EQ(p.state(n)[0], 0.5);
}

TEST(SimulatePath, ThresholdFixedPointUnderZeroShock) {
    const auto base = make_threshold_jump();
    // Degenerate shock: the rule ignores eps, i.e. eps is forced to 0.
    const auto m = base.with_rule(
        [base](std::span<const double> s, std::span<const double>, std::span<const double> th, std::span<double> out) {
            const double zero[1] = {0.0};
            base.apply(s, zero, th, out);
        },
        "threshold-zero-shock", true);
    const auto p = simulate_path(m, Point{0.0}, ShockStream(3, 0, 1), Point{0.0}, 500);
    for (std::size_t n = 1; n <= p.length(); ++n) EXPECT_EQ(p.state(n)[0], 0.0);
}

TEST(SimulatePath, Validation) {
    const auto m = make_threshold_jump();
    const ShockStream st(1, 0, 1);
    EXPECT_THROW(simulate_path(m, Point{0.0}, st, Point{0.0}, 0), Error);
    EXPECT_THROW(simulate_path(m, Point{-1.0}, st, Point{0.0}, 10), Error);
    EXPECT_THROW(simulate_path(m, Point{0.0}, st, Point{0.9}, 10), Error);
    EXPECT_THROW(simulate_path(m, Point{0.0}, ShockStream(1, 0, 2), Point{0.0}, 10), Error);
}

TEST(SimulatePath, LogGrowthStationaryMoments) {
    // AR(1): mean ln(alpha beta)/(1-alpha), variance sigma^2/(1-alpha^2).
    const double alpha = 0.3, sigma = 0.1, N = 1e6;
    const double mean = std::log(alpha * 0.95) / (1 - alpha);
    const double var = sigma * sigma / (1 - alpha * alpha);
    const auto m = make_log_growth();
    const auto p = simulate_path(m, Point{mean}, ShockStream(2024, 0, 1), Point{alpha, sigma}, 1'010'000);
    const MomentSpec spec({Primitive::coordinate(0), Primitive::shifted_power(0, -6.0, 2)}, {0},
                          {{"var", DerivedStat::Kind::variance, 0, 1}});
    // shifted second moment needs the shifted first moment
    const MomentSpec shifted({Primitive::shifted_power(0, -6.0, 1), Primitive::shifted_power(0, -6.0, 2)}, {0},
                             {{"var", DerivedStat::Kind::variance, 0, 1}});
    const auto mv = sample_moments(p, spec, 10'000);
    const auto sv = sample_moments(p, shifted, 10'000);
    const double se_mean = std::sqrt(var * (1 + alpha) / (1 - alpha) / N);
    const double se_var = var * std::sqrt(2 * (1 + alpha * alpha) / (1 - alpha * alpha) / N);
    EXPECT_NEAR(mv.values[0], mean, 4 * se_mean);
    EXPECT_NEAR(shifted.statistics(sv.values)[2], var, 4 * se_var);
    EXPECT_EQ(p.clamp_count, 0u);
}

TEST(Sandwich, ZeroKappaGivesIdenticalPaths) {
    const auto m = make_threshold_jump();
    const auto sw = simulate_sandwich(m, 0.0, Point{0.0}, ShockStream(4, 0, 1), Point{0.1}, Point{0.1}, 3000);
    EXPECT_EQ(sw.upper.states, sw.base.states);
    EXPECT_EQ(sw.lower.states, sw.base.states);
}

TEST(Sandwich, ThresholdPathwiseOrder) {
    const auto m = make_threshold_jump();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto sw = simulate_sandwich(m, 0.2, Point{0.0}, ShockStream(seed, 0, 1), Point{0.0}, Point{0.0}, 10000);
        std::size_t bad = 0;
        for (std::size_t n = 1; n <= sw.base.length(); ++n)
            if (!(leq(sw.base.state(n), sw.upper.state(n)) && leq(sw.lower.state(n), sw.base.state(n)))) ++bad;
        EXPECT_EQ(bad, 0u);
    }
}

TEST(Coupling, TopCornerPathDominatesBottomCorner) {
    for (const auto& id : monotone_zoo_ids()) {
        const auto m = make_zoo_model(id);
        const Point th(m.info().default_theta);
        const auto hi = simulate_path(m, m.state_box().upper_corner(), ShockStream(8, 1, m.shock_dim()), th, 5000);
        const auto lo = simulate_path(m, m.state_box().lower_corner(), ShockStream(8, 1, m.shock_dim()), th, 5000);
        std::size_t bad = 0;
        for (std::size_t n = 1; n <= hi.length(); ++n)
            if (!leq(lo.state(n), hi.state(n))) ++bad;
        EXPECT_EQ(bad, 0u) << id;
    }
}

TEST(ClampAccounting, MatchesBoundaryRecount) {
    for (const char* id : {"threshold", "threshold-recurrent", "log-growth", "adoption"}) {
        const auto m = make_zoo_model(id);
        const Point th(m.info().default_theta);
        const auto p = simulate_path(m, Point(m.info().default_s0), ShockStream(12, 0, 1), th, 20000);
        EXPECT_EQ(p.clamp_count, count_boundary_states(p, m.state_box())) << id;
    }
}

TEST(PathCsv, HeaderAndRows) {
    const auto m = make_adoption_diffusion();
    const auto p = simulate_path(m, Point(m.info().default_s0), ShockStream(1, 0, 1), Point(m.info().default_theta), 10);
    const auto t = path_table(p);
    EXPECT_EQ(csv::join(t.header), "n,s_1,s_2,s_3");
    ASSERT_EQ(t.rows.size(), 10u);
    EXPECT_EQ(t.rows[0][0], "1");
    EXPECT_EQ(csv::parse_double(t.rows[4][2], "t"), p.state(5)[1]);
}
