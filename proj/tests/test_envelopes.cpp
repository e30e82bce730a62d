#include <gtest/gtest.h>

#include "sme/model_checks.hpp"

using namespace sme;

namespace {
std::vector<double> v(std::initializer_list<double> x) { return x; }
} // namespace

TEST(Envelope, ZeroKappaReproducesBaseBitwise) {
    for (const auto& id : monotone_zoo_ids()) {
        const auto m = make_zoo_model(id);
        const auto up = majorize(m, 0.0).map(), lo = minorize(m, 0.0).map();
        UniformSource rng(1, 0);
        const std::size_t k = m.state_dim(), l = m.param_dim();
        for (int n = 0; n < 2000; ++n) {
            std::vector<double> s(k), th(l), eps{rng.uniform(-1, 1)};
            for (std::size_t i = 0; i < k; ++i) s[i] = rng.uniform(m.state_box().lower()[i], m.state_box().upper()[i]);
            for (std::size_t i = 0; i < l; ++i) th[i] = rng.uniform(m.params().lower()[i], m.params().upper()[i]);
            const Point b = m.eval(Point(s), eps, th);
            EXPECT_EQ(up.eval(Point(s), eps, th), b);
            EXPECT_EQ(lo.eval(Point(s), eps, th), b);
        }
    }
}

TEST(Envelope, ThresholdHandArithmetic) {
    const auto m = make_threshold_jump();
    const double up = majorize(m, 0.4).map().eval(Point{1.7}, v({0.0}), v({0.0}))[0];
    const double base = m.eval(Point{1.7}, v({0.0}), v({0.0}))[0];
    const double lo = minorize(m, 0.4).map().eval(Point{1.7}, v({0.0}), v({0.0}))[0];
    EXPECT_DOUBLE_EQ(up, 7.5);
    EXPECT_DOUBLE_EQ(base, 1.7);
    EXPECT_DOUBLE_EQ(lo, 0.9);
}

TEST(Envelope, LogGrowthShiftEntersTwice) {
    const auto m = make_log_growth();
    const double base = m.eval(Point{-1.5}, v({0.0}), v({0.3, 0.1}))[0];
    const double up = majorize(m, 0.1).map().eval(Point{-1.5}, v({0.0}), v({0.3, 0.1}))[0];
    EXPECT_NEAR(up - base, 0.13, 1e-14);
}

TEST(Envelope, NegativeKappaRejected) {
    EXPECT_THROW(majorize(make_log_growth(), -0.1), Error);
    EXPECT_THROW(minorize(make_log_growth(), -1e-9), Error);
}

TEST(Dominance, ExactOnEveryZooModelAndKappa) {
    for (const auto& id : monotone_zoo_ids()) {
        const auto m = make_zoo_model(id);
        for (double kappa : {0.4, 0.2, 0.1, 0.05, 0.025, 0.0}) {
            const auto rep = check_dominance(m, kappa, 10000, 99);
            EXPECT_EQ(rep.violations, 0u) << id << " kappa=" << kappa << " " << rep.witness;
        }
    }
}

TEST(Dominance, NestedInKappa) {
    for (const auto& id : monotone_zoo_ids()) {
        const auto m = make_zoo_model(id);
        const auto big = majorize(m, 0.4).map(), small = majorize(m, 0.2).map();
        const auto lbig = minorize(m, 0.4).map(), lsmall = minorize(m, 0.2).map();
        UniformSource rng(8, 1);
        const std::size_t k = m.state_dim(), l = m.param_dim();
        for (int n = 0; n < 5000; ++n) {
            std::vector<double> s(k), th(l), eps{normal_quantile(rng.next()) * 0.5};
            for (std::size_t i = 0; i < k; ++i) s[i] = rng.uniform(m.state_box().lower()[i], m.state_box().upper()[i]);
            for (std::size_t i = 0; i < l; ++i) th[i] = rng.uniform(m.params().lower()[i], m.params().upper()[i]);
            EXPECT_TRUE(leq(small.eval(Point(s), eps, th), big.eval(Point(s), eps, th))) << id;
            EXPECT_TRUE(leq(lbig.eval(Point(s), eps, th), lsmall.eval(Point(s), eps, th))) << id;
        }
    }
}

TEST(Dominance, DecreasingMapFails) {
    const auto rep = check_dominance(make_decreasing(), 0.2, 2000, 1);
    EXPECT_GT(rep.violations, 0u);
    EXPECT_FALSE(rep.witness.empty());
}

TEST(Neighborhood, TinyRadiusPasses) {
    const auto m = make_threshold_jump();
    const auto rep = check_parameter_neighborhood(m, Point{0.0}, 0.2, 1e-12, 5000, 3, 0);
    EXPECT_TRUE(rep.passed());
}

TEST(Neighborhood, ThresholdAdditiveParameterWithinKappa) {
    const auto m = make_threshold_jump();
    const auto rep = check_parameter_neighborhood(m, Point{0.0}, 0.2, 0.2, 10000, 5);
    EXPECT_TRUE(rep.passed()) << rep.witness;
    EXPECT_DOUBLE_EQ(rep.largest_passing_radius, 0.2);
}

TEST(Neighborhood, LogGrowthLargeRadiusFailsWithWitness) {
    const auto m = make_log_growth();
    const auto rep = check_parameter_neighborhood(m, Point{0.3, 0.1}, 0.01, 0.5, 5000, 5);
    EXPECT_FALSE(rep.passed());
    EXPECT_FALSE(rep.witness.empty());
    EXPECT_LT(rep.largest_passing_radius, 0.5);
}

TEST(Neighborhood, RecurrentThresholdFailsOnTopFace) {
    // With S = [0, 3] the shifted state of the majorant is clamped at 3, so
    // near the top a larger theta' can trigger a jump the majorant misses.
    const auto m = make_threshold_recurrent();
    const auto rep = check_parameter_neighborhood(m, Point{0.0}, 0.2, 0.2, 20000, 5, 2);
    EXPECT_FALSE(rep.passed());
    ASSERT_EQ(rep.witness.rfind("s=(", 0), 0u) << rep.witness;
    EXPECT_GT(std::stod(rep.witness.substr(3)), 3.0 - 0.2 - 1e-9) << rep.witness;
}
