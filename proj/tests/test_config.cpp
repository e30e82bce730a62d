#include <gtest/gtest.h>

#include "sme/config.hpp"

using namespace sme;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Config, DefaultsNormalizeToExplicitModelValues) {
    const auto c = normalize(ExperimentConfig{});
    EXPECT_EQ(c.state_lower, std::vector<double>{0.0});
    EXPECT_EQ(c.state_upper, std::vector<double>{10.0});
    EXPECT_FALSE(c.shocks.empty());
    EXPECT_EQ(c.theta.size(), 1u);
    EXPECT_EQ(c.moments, "custom");
    EXPECT_EQ(c.observable, std::vector<std::size_t>{1});
    EXPECT_TRUE(c.data_seed && c.sim_seed && c.oracle_seed && c.diag_seed);
}

TEST(Config, NormalizeIsIdempotentForEveryModel) {
    for (const auto& id : zoo_ids()) {
        ExperimentConfig c;
        c.model = id;
        const auto once = normalize(c);
        EXPECT_EQ(normalize(once), once) << id;
        EXPECT_EQ(serialize_config(normalize(once)), serialize_config(once)) << id;
    }
}

TEST(Config, SerializeParseRoundTrip) {
    ExperimentConfig c;
    c.model = "log-growth";
    c.moments = "mean-variance";
    c.fixed = {{1, 0.3}};
    c.statistics = {"m1_s_1", "var_s_1"};
    c.weights = "1, 100";
    c.polish = true;
    c.N_list = {100, 200};
    const auto n = normalize(c);
    const auto text = serialize_config(n);
    const auto back = parse_config(text);
    EXPECT_EQ(back, n);
    EXPECT_EQ(serialize_config(back), text);
}

TEST(Config, ShockLinksSurviveRoundTrip) {
    ExperimentConfig c;
    c.model = "log-growth";
    const auto n = normalize(c);
    EXPECT_NE(n.shocks.find("theta_2"), std::string::npos) << n.shocks;
    const auto map = build_model(parse_config(serialize_config(n)));
    ASSERT_TRUE(map.shocks().coords()[0].sd_theta.has_value());
    EXPECT_EQ(*map.shocks().coords()[0].sd_theta, 1u);
}

TEST(Config, OverridesRebuildTheModel) {
    const auto c = parse_config("[model]\nid = threshold\nstate_upper = 5\n[theta_box]\nlower = -0.2\nupper = 0.2\n");
    const auto map = build_model(c);
    EXPECT_EQ(map.state_box().upper()[0], 5.0);
    EXPECT_EQ(map.params().lower()[0], -0.2);
    const auto n = normalize(c);
    EXPECT_EQ(n.theta_upper, std::vector<double>{0.2});
    EXPECT_LE(n.theta[0], 0.2);
    // Same rule: the rebuilt map agrees with the zoo map where the boxes agree.
    const auto zoo = make_zoo_model("threshold");
    const std::vector<double> s{1.0}, eps{0.3}, th{0.1};
    std::vector<double> a(1), b(1);
    map.apply(s, eps, th, a);
    zoo.apply(s, eps, th, b);
    EXPECT_EQ(a[0], b[0]);
}

TEST(Config, UnknownKeysAndSectionsAreErrors) {
    EXPECT_NE(error_of([] { parse_config("[model]\nidd = threshold\n"); }).find("unknown key 'idd'"), std::string::npos);
    EXPECT_NE(error_of([] { parse_config("[modle]\nid = threshold\n"); }).find("unknown section"), std::string::npos);
    EXPECT_NE(error_of([] { parse_config("id = threshold\n"); }).find("outside any section"), std::string::npos);
}

TEST(Config, ValueErrorsNameTheKey) {
    EXPECT_NE(error_of([] { parse_config("[model]\nN = -3\n"); }).find("model.N"), std::string::npos);
    EXPECT_NE(error_of([] { parse_config("[estimation]\npolish = yes\n"); }).find("estimation.polish"),
              std::string::npos);
    EXPECT_NE(error_of([] { parse_config("[estimation]\nfixed = 0:1\n"); }).find("1-based"), std::string::npos);
    EXPECT_NE(error_of([] { normalize(parse_config("[model]\ntheta = 7\n")); }).find("outside the parameter box"),
              std::string::npos);
    EXPECT_NE(error_of([] { normalize(parse_config("[model]\nid = nope\n")); }).find("threshold"), std::string::npos);
    EXPECT_NE(error_of([] { normalize(parse_config("[moments]\npreset = custom\nprimitives = cube(1)\n")); })
                  .find("unknown primitive"),
              std::string::npos);
}

TEST(Config, CustomMomentsParse) {
    const auto c = parse_config("[model]\nid = log-growth\n[moments]\npreset = custom\n"
                                "primitives = coordinate(1, 0.1, lvl); power(1, -6, 2, 1, sq)\n"
                                "derived = variance(v, 1, 2)\n");
    const auto m = build_moments(c, build_model(c));
    EXPECT_EQ(m.stat_names(), (std::vector<std::string>{"lvl", "sq", "v"}));
    EXPECT_EQ(m.primitives()[0].scale, 0.1);
    EXPECT_EQ(m.primitives()[1].power, 2);
}

TEST(Config, SeedOverrideRederivesEverySeed) {
    auto a = normalize(ExperimentConfig{});
    auto b = a;
    override_seed(b, 99);
    b = normalize(b);
    EXPECT_EQ(b.master_seed, 99u);
    EXPECT_NE(*a.sim_seed, *b.sim_seed);
    EXPECT_NE(*a.data_seed, *b.data_seed);
    auto c = a;
    override_seed(c, a.master_seed);
    EXPECT_EQ(normalize(c), a);
}

TEST(Config, ExplicitSeedsArePreserved) {
    const auto c = normalize(parse_config("[seeds]\nmaster = 5\nsim_seed = 42\n"));
    EXPECT_EQ(*c.sim_seed, 42u);
    EXPECT_EQ(*c.data_seed, derive_seed(5, 0x64617461u));
}
