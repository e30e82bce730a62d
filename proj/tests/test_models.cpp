#include <gtest/gtest.h>

#include <cmath>

#include "sme/model_checks.hpp"

using namespace sme;

namespace {
std::vector<double> v(std::initializer_list<double> x) { return x; }
} // namespace

TEST(ThresholdMap, HandEvaluations) {
    const auto m = make_threshold_jump();
    EXPECT_DOUBLE_EQ(m.eval(Point{1.0}, v({0.5}), v({0.3}))[0], 1.8);
    EXPECT_DOUBLE_EQ(m.eval(Point{1.7}, v({0.3}), v({0.2}))[0], 7.2);
    EXPECT_DOUBLE_EQ(m.eval(Point{0.0}, v({0.0}), v({0.0}))[0], 0.0);
    EXPECT_DOUBLE_EQ(m.eval(Point{1.9}, v({0.2}), v({0.0}))[0], 7.1);
    EXPECT_DOUBLE_EQ(m.eval(Point{6.0}, v({0.0}), v({0.0}))[0], 10.0);
}

TEST(ThresholdMap, RecurrentVariantClampsJumpToTop) {
    const auto m = make_threshold_recurrent();
    EXPECT_EQ(m.state_box().upper()[0], 3.0);
    EXPECT_DOUBLE_EQ(m.eval(Point{1.9}, v({0.2}), v({0.0}))[0], 3.0);
    EXPECT_DOUBLE_EQ(m.eval(Point{3.0}, v({-1.2}), v({0.1}))[0], 1.9);
}

TEST(EvalMap, ValidationErrors) {
    const auto m = make_threshold_jump();
    EXPECT_THROW(m.eval(Point{1.0}, v({0.0}), v({0.7})), Error);
    EXPECT_THROW(m.eval(Point{11.0}, v({0.0}), v({0.0})), Error);
    EXPECT_THROW(m.eval(Point{1.0}, v({0.0, 1.0}), v({0.0})), Error);
    try {
        m.eval(Point{1.0}, v({0.0}), v({0.7}));
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("theta"), std::string::npos);
    }
}

TEST(EvalMap, ConstantMapAndDeterminism) {
    const auto c = make_constant(Box({0.0, 0.0}, {2.0, 2.0}), Point{0.25, 1.5});
    EXPECT_EQ(c.eval(Point{2.0, 0.0}, v({3.0}), v({0.5})), (Point{0.25, 1.5}));
    const auto a = make_adoption_diffusion();
    UniformSource rng(5, 0);
    for (int n = 0; n < 1000; ++n) {
        const Point s{rng.uniform(-3, 3), rng.uniform(0, 700), rng.uniform(0, 700)};
        const std::vector<double> eps{rng.uniform(-1, 1)};
        const std::vector<double> th{rng.uniform(0.1, 0.99), rng.uniform(0.01, 0.5), rng.uniform(0.01, 0.5)};
        const Point r1 = a.eval(s, eps, th), r2 = a.eval(s, eps, th);
        EXPECT_EQ(r1, r2);
        EXPECT_TRUE(a.state_box().contains(r1));
    }
}

TEST(LogGrowth, DeterministicFixedPoint) {
    const auto m = make_log_growth();
    const double x_star = std::log(0.3 * 0.95) / (1.0 - 0.3);
    EXPECT_NEAR(x_star, -1.79324, 1e-5);
    EXPECT_NEAR(m.eval(Point{x_star}, v({0.0}), v({0.3, 0.1}))[0], x_star, 1e-14);
}

TEST(Adoption, LinearRecursionAndSkeletonFixedPoint) {
    const auto m = make_adoption_diffusion();
    const auto r = m.eval(Point{1.0, 10.0, 5.0}, v({0.0}), v({0.5, 0.1, 0.1}));
    EXPECT_DOUBLE_EQ(r[0], 0.5);
    EXPECT_DOUBLE_EQ(r[1], 0.97 * 10.0 + std::exp(0.5));
    EXPECT_DOUBLE_EQ(r[2], 0.1 * (10.0 - 5.0) + 0.97 * 5.0);

    // eps = 0, ln x = 0: Z* = 1/(1 - phi), A* = lambda Z* / (1 - phi + lambda).
    const double lambda = 0.1, z = 1.0 / 0.03, a = lambda * z / (0.03 + lambda);
    EXPECT_NEAR(z, 33.3333333, 1e-6);
    const auto fp = m.eval(Point{0.0, z, a}, v({0.0}), v({0.5, 0.1, lambda}));
    EXPECT_NEAR(fp[1], z, 1e-12);
    EXPECT_NEAR(fp[2], a, 1e-12);
    EXPECT_DOUBLE_EQ(m.info().default_theta[2], 0.1);
}

TEST(Zoo, RegistryKnowsIdsAndRejectsUnknown) {
    for (const auto& id : zoo_ids()) EXPECT_EQ(make_zoo_model(id).name(), id);
    try {
        make_zoo_model("nope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("log-growth"), std::string::npos);
    }
}

TEST(CheckMonotone, ZooModelsHaveNoViolations) {
    for (const auto& id : monotone_zoo_ids()) {
        const auto rep = check_monotone(make_zoo_model(id), 10000, 17);
        EXPECT_EQ(rep.violations, 0u) << id << " " << rep.witness;
    }
    EXPECT_TRUE(check_monotone(make_zoo_model("constant"), 1000, 1).passed());
}

TEST(CheckMonotone, DecreasingMapReportsWitness) {
    const auto rep = check_monotone(make_decreasing(), 2000, 3);
    EXPECT_GT(rep.violations, 0u);
    EXPECT_LT(rep.worst, 0.0);
    EXPECT_NE(rep.witness.find("phi(s)"), std::string::npos);
}

TEST(CheckFeller, LogGrowthGapIsAlphaTimesStep) {
    const auto m = make_log_growth();
    const MomentSpec f = MomentSpec::means(m.state_box());
    const auto rep = check_feller(m, f, Point{0.3, 0.1}, Point{-1.8}, 3, 2000, 9, 10);
    for (const auto& g : rep.gaps)
        for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(g[j], 0.3 * rep.steps[j], 1e-12);
    EXPECT_TRUE(rep.decays());
}

TEST(CheckFeller, ConstantIsZeroAndThresholdDecays) {
    const auto c = make_zoo_model("constant");
    const auto rc = check_feller(c, MomentSpec::means(c.state_box()), Point{0.5}, Point{0.3}, 2, 100, 1);
    for (const auto& g : rc.gaps)
        for (double x : g) EXPECT_EQ(x, 0.0);

    const auto t = make_threshold_jump();
    const auto rt = check_feller(t, MomentSpec::means(t.state_box(), 0.1), Point{0.0}, Point{1.5}, 2, 50000, 4, 12);
    EXPECT_TRUE(rt.decays());
    for (const auto& g : rt.gaps) EXPECT_LT(g.back(), g.front());
}
