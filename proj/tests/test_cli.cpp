#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sme/manifest.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string output;
};

/// Runs the CLI with stderr merged into stdout.
Run cli(const std::string& args) {
    const std::string cmd = std::string(SME_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("sme_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string config(const std::string& name, const std::string& text) const {
        std::ofstream(path(name), std::ios::binary) << text;
        return path(name);
    }

    fs::path dir_;
};

std::vector<std::string> lines(const std::string& file) {
    std::ifstream f(file);
    std::vector<std::string> out;
    for (std::string l; std::getline(f, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_F(CliTest, SimulateWritesPathAndManifest) {
    const auto r = cli("simulate --steps 10 --theta 0.2 --out " + path("a"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto rows = lines(path("a/path.csv"));
    ASSERT_EQ(rows.size(), 11u);
    EXPECT_EQ(rows[0], "n,s_1");
    EXPECT_EQ(rows[10].rfind("10,", 0), 0u);
    const auto m = sme::Manifest::read(path("a/manifest.json"));
    EXPECT_EQ(m.command, "simulate");
    ASSERT_EQ(m.files.size(), 2u);
    EXPECT_EQ(m.files[1].sha256, sme::sha256_file(path("a/path.csv")));
    EXPECT_NE(m.config.find("theta = 0.2\n"), std::string::npos);
}

TEST_F(CliTest, RerunsAreByteIdenticalAndSeedMatters) {
    ASSERT_EQ(cli("simulate --steps 50 --seed 7 --threads 1 --out " + path("a")).code, 0);
    ASSERT_EQ(cli("simulate --steps 50 --seed 7 --threads 2 --out " + path("b")).code, 0);
    ASSERT_EQ(cli("simulate --steps 50 --seed 8 --out " + path("c")).code, 0);
    const auto a = sme::read_file(path("a/path.csv"));
    EXPECT_EQ(a, sme::read_file(path("b/path.csv")));
    EXPECT_NE(a, sme::read_file(path("c/path.csv")));
}

TEST_F(CliTest, ManifestReplayMatchesAndDetectsTampering) {
    ASSERT_EQ(cli("simulate --steps 20 --out " + path("a")).code, 0);
    const auto ok = cli("simulate --manifest " + path("a/manifest.json") + " --out " + path("b"));
    EXPECT_EQ(ok.code, 0) << ok.output;
    EXPECT_NE(ok.output.find("all checksums match"), std::string::npos);

    auto text = sme::read_file(path("a/manifest.json"));
    const auto sum = sme::sha256_file(path("a/path.csv"));
    text.replace(text.find(sum), sum.size(), std::string(sum.size(), '0'));
    std::ofstream(path("a/manifest.json"), std::ios::binary) << text;
    const auto bad = cli("simulate --manifest " + path("a/manifest.json") + " --out " + path("c"));
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.output.find("checksum mismatch path.csv"), std::string::npos) << bad.output;
}

TEST_F(CliTest, ConfigFileDrivesTheRun) {
    const auto cfg = config("c.ini", "[model]\nid = log-growth\nN = 5\n[seeds]\nmaster = 3\n");
    const auto r = cli("simulate --config " + cfg + " --out " + path("a"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto rows = lines(path("a/path.csv"));
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], "n,s_1");
    const auto written = sme::read_file(path("a/config.ini"));
    EXPECT_NE(written.find("id = log-growth"), std::string::npos);
    EXPECT_NE(written.find("gaussian(0, theta_2)"), std::string::npos);
}

TEST_F(CliTest, StructuredErrors) {
    auto r = cli("simulate --steps 0 --out " + path("a"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("error: N must be >= 1"), std::string::npos) << r.output;
    r = cli("diagnose --study nope --out " + path("a"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("valid: monotone, feller"), std::string::npos) << r.output;
    r = cli("simulate --config " + config("bad.ini", "[model]\nidd = threshold\n") + " --out " + path("a"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("unknown key 'idd'"), std::string::npos) << r.output;
    r = cli("simulate --theta 9 --out " + path("a"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("outside the parameter box"), std::string::npos) << r.output;
    r = cli("frobnicate");
    EXPECT_NE(r.code, 0);
}

TEST_F(CliTest, DiagnoseDominancePasses) {
    const auto cfg = config("c.ini", "[diagnostics]\nsamples = 2000\n");
    const auto r = cli("diagnose --study dominance --config " + cfg + " --out " + path("a"));
    EXPECT_EQ(r.code, 0) << r.output;
    EXPECT_TRUE(fs::exists(path("a/dominance_kappa.csv")));
    EXPECT_NE(sme::read_file(path("a/dominance_summary.txt")).find("overall: PASS"), std::string::npos);
    EXPECT_TRUE(sme::Manifest::read(path("a/manifest.json")).passed);
}

TEST_F(CliTest, DiagnoseMonotoneFailsOnDecreasingMap) {
    const auto cfg = config("c.ini", "[model]\nid = decreasing\n[diagnostics]\nsamples = 500\n");
    const auto r = cli("diagnose --study monotone --config " + cfg + " --out " + path("a"));
    EXPECT_EQ(r.code, 1) << r.output;
    EXPECT_NE(r.output.find("FAIL zero_violations"), std::string::npos) << r.output;
    EXPECT_FALSE(sme::Manifest::read(path("a/manifest.json")).passed);
}

TEST_F(CliTest, ApproxOnLogGrowthPasses) {
    const auto cfg = config("c.ini", "[model]\nid = log-growth\n[diagnostics]\nresolutions = 5, 9, 17\n"
                                     "state_points = 128\nmc_draws = 500\n");
    const auto r = cli("diagnose --study approx --config " + cfg + " --out " + path("a"));
    EXPECT_EQ(r.code, 0) << r.output;
    const auto rows = lines(path("a/approx_resolutions.csv"));
    ASSERT_EQ(rows.size(), 4u);
    // Affine in s: the interpolant reproduces the map up to rounding.
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto comma = rows[i].find(',');
        EXPECT_LE(std::stod(rows[i].substr(comma + 1)), 1e-12) << rows[i];
    }
}

TEST_F(CliTest, AdoptionPathHeader) {
    const auto cfg = config("c.ini", "[model]\nid = adoption\n");
    ASSERT_EQ(cli("simulate --steps 3 --config " + cfg + " --out " + path("a")).code, 0);
    EXPECT_EQ(lines(path("a/path.csv"))[0], "n,s_1,s_2,s_3");
}

TEST_F(CliTest, EstimateSingletonBox) {
    const auto cfg = config("c.ini", "[model]\nid = threshold\ntheta = 0.1\n[theta_box]\nlower = 0.1\nupper = 0.1\n"
                                     "[estimation]\nmode = estimate\nN = 500\nweights = uniform\n");
    const auto r = cli("estimate --config " + cfg + " --out " + path("a"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto rows = lines(path("a/estimate.csv"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "N,theta_1,objective,evaluations,grid_step,runner_up_gap");
    EXPECT_EQ(rows[1].rfind("500,0.10000000000000001,", 0), 0u) << rows[1];
}

TEST_F(CliTest, EstimateConsistencyWritesTrace) {
    const auto cfg = config("c.ini", "[model]\nid = threshold-recurrent\n[estimation]\nN_list = 256, 512\n"
                                     "weights = uniform\nlevels = 2\npoints = 5\n");
    const auto r = cli("estimate --config " + cfg + " --out " + path("a"));
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_EQ(lines(path("a/trace.csv")).size(), 3u);
    EXPECT_EQ(lines(path("a/trace_detail.csv"))[0], "N,error,evaluations,sim_seed,data_seed");
}

TEST_F(CliTest, VolatilityPresetAtTargetsIsZero) {
    const auto cfg = config("c.ini", "[estimation]\nmode = volatility-preset\nmodel_sigma = 8.86, 3.31, 31.41\n");
    const auto r = cli("estimate --config " + cfg + " --out " + path("a"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto rows = lines(path("a/preset.csv"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1], "8.8599999999999994,3.3100000000000001,31.41,0");
}
