#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sme/config.hpp"
#include "sme/manifest.hpp"

namespace sme {

/// Outcome of one command: files written to the output directory and a verdict.
struct RunResult {
    std::string command;
    std::string study;
    std::vector<std::string> files;
    bool passed = true;
    std::string summary;
};

inline const std::vector<std::string>& command_ids() {
    static const std::vector<std::string> ids{"simulate", "estimate", "diagnose", "approx-study"};
    return ids;
}

namespace cmd_detail {

inline std::string write_table(const csv::Table& t, const std::string& dir, const std::string& name) {
    t.write((std::filesystem::path(dir) / name).string());
    return name;
}

inline OracleConfig oracle(const ExperimentConfig& c) {
    return {c.n_oracle, c.oracle_burn, c.replications, *c.oracle_seed};
}

inline SearchConfig search(const ExperimentConfig& c) {
    require(c.tie_break == "lexicographic", "estimation.tie_break: only 'lexicographic' is supported");
    SearchConfig s;
    s.levels = c.levels;
    s.points_per_dim = c.points;
    s.shrink = c.shrink;
    s.polish = c.polish;
    for (const auto& [i, v] : c.fixed) s.fixed.emplace_back(i - 1, v);
    return s;
}

inline DistanceSpec distance(const ExperimentConfig& c) {
    DistanceSpec d;
    d.statistics = c.statistics;
    d.bootstrap_reps = c.bootstrap_reps;
    d.bootstrap_seed = *c.data_seed;
    if (c.weights == "bootstrap") {
        d.weighting = DistanceSpec::Weighting::bootstrap;
    } else if (c.weights != "uniform") {
        d.weights = config_detail::map_list<double>(
            c.weights, [](const std::string& s) { return config_detail::to_double(s, "estimation.weights"); });
        for (double w : d.weights) require(w > 0.0, "estimation.weights must be > 0");
    }
    return d;
}

inline HorizonRule horizon(const ExperimentConfig& c) {
    HorizonRule h;
    h.c = c.horizon_c;
    if (c.horizon_cap > 0) h.cap = c.horizon_cap;
    return h;
}

/// The configured data file, or a synthetic series of length N drawn at model.theta.
inline DataSeries data(const ExperimentConfig& c, const MarkovMap& map, const MomentSpec& f, std::uint64_t N) {
    if (!c.data.empty()) return read_data_csv(c.data, map, f.observable());
    return synthetic_data(map, Point(c.theta), Point(c.s0), *c.data_seed, N, f.observable());
}

inline std::string theta_str(const Point& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + csv::num(p[i]);
    return "(" + s + ")";
}

} // namespace cmd_detail

/// Writes `path.csv` with c.N states from c.s0 at c.theta.
inline RunResult run_simulate(const ExperimentConfig& c, const std::string& dir) {
    const MarkovMap map = build_model(c);
    require(c.N >= 1, "N must be >= 1");
    const auto path = simulate_path(map, Point(c.s0), ShockStream(*c.sim_seed, 1, map.shock_dim()), Point(c.theta), c.N);
    RunResult r{"simulate", "", {}, true, ""};
    r.files.push_back(cmd_detail::write_table(path_table(path), dir, "path.csv"));
    r.summary = "simulated " + std::to_string(c.N) + " steps of " + map.name() + "; clamped steps " +
                std::to_string(path.clamp_count) + "\n";
    return r;
}

/// estimate, consistency or volatility-preset, per estimation.mode.
inline RunResult run_estimate(const ExperimentConfig& c, const std::string& dir) {
    RunResult r{"estimate", "", {}, true, ""};
    if (c.mode == "volatility-preset") {
        require(c.model_sigma.size() == 3, "estimation.model_sigma needs exactly three values");
        const std::array<double, 3> s{c.model_sigma[0], c.model_sigma[1], c.model_sigma[2]};
        const double g = volatility_objective_preset(s);
        csv::Table t{{"sigma_1", "sigma_2", "sigma_3", "objective"}, {}};
        t.add({csv::num(s[0]), csv::num(s[1]), csv::num(s[2]), csv::num(g)});
        r.files.push_back(cmd_detail::write_table(t, dir, "preset.csv"));
        r.summary = "volatility-match objective " + csv::num(g) + "\n";
        return r;
    }
    const MarkovMap map = build_model(c);
    const MomentSpec f = build_moments(c, map);
    const EstimationSetup setup{f, cmd_detail::distance(c), cmd_detail::horizon(c), cmd_detail::search(c)};
    setup.search.validate(map.params());
    const Point s0(c.s0);
    if (c.mode == "estimate") {
        require(c.estimation_N >= 1, "N must be >= 1");
        const auto d = cmd_detail::data(c, map, f, c.estimation_N);
        require(d.length() >= c.estimation_N, "data series shorter than estimation.N");
        const auto est = estimate(map, setup, d, s0, ShockStream(*c.sim_seed, 1, map.shock_dim()), c.estimation_N);
        csv::Table t{{"N"}, {}};
        for (std::size_t i = 0; i < map.param_dim(); ++i) t.header.push_back("theta_" + std::to_string(i + 1));
        for (const char* h : {"objective", "evaluations", "grid_step", "runner_up_gap"}) t.header.push_back(h);
        std::vector<std::string> row{std::to_string(c.estimation_N)};
        for (double v : est.theta.coords()) row.push_back(csv::num(v));
        row.push_back(csv::num(est.objective));
        row.push_back(std::to_string(est.evaluations));
        row.push_back(csv::num(est.grid_step));
        row.push_back(csv::num(est.runner_up_gap));
        t.add(std::move(row));
        r.files.push_back(cmd_detail::write_table(t, dir, "estimate.csv"));
        r.summary = "theta_hat = " + cmd_detail::theta_str(est.theta) + " objective " + csv::num(est.objective) + "\n";
        return r;
    }
    require(c.mode == "consistency",
            "estimation.mode: expected estimate, consistency or volatility-preset, got '" + c.mode + "'");
    require(!c.N_list.empty(), "estimation.N_list is empty");
    for (auto N : c.N_list) require(N >= 1, "N must be >= 1");
    const auto d = cmd_detail::data(c, map, f, c.N_list.back());
    ConsistencyConfig cc{c.N_list, *c.sim_seed, *c.data_seed, c.floor_tolerance};
    std::optional<Point> theta0;
    if (c.data.empty()) theta0 = Point(c.theta);
    const auto tr = consistency_study(map, setup, d, s0, cc, theta0);
    r.files.push_back(cmd_detail::write_table(trace_table(tr), dir, "trace.csv"));
    r.files.push_back(cmd_detail::write_table(trace_detail_table(tr), dir, "trace_detail.csv"));
    r.summary = "final theta_hat = " + cmd_detail::theta_str(tr.final_theta()) + " objective floor " +
                csv::num(tr.objective_floor) + (tr.misspecified ? " (flagged: possible misspecification)" : "") +
                (theta0 ? " log-log error slope " + csv::num(tr.slope) : std::string()) + "\n";
    return r;
}

/// Builds the report for c.study.
inline StudyReport diagnose_report(const ExperimentConfig& c) {
    const MarkovMap map = build_model(c);
    const Point theta(c.theta), s0(c.s0);
    const std::uint64_t seed = *c.diag_seed;
    const auto& id = c.study;
    if (id == "monotone") return monotone_study(map, c.samples, seed);
    if (id == "coupling") return coupling_study(map, c.samples, c.N, seed);
    if (id == "dominance") return dominance_study(map, c.kappas, c.samples, seed);
    if (id == "neighborhood") return neighborhood_study(map, theta, c.kappa, c.radius, c.samples, seed);
    const MomentSpec f = build_moments(c, map);
    if (id == "feller")
        return feller_study(map, f, theta, s0, c.feller_directions, c.mc_draws, seed, c.feller_tolerance);
    if (id == "sandwich")
        return sandwich_study(map, theta, f, s0, {c.kappas, c.radius, c.sandwich_N, c.n_seeds, c.n_theta, seed});
    if (id == "envelope-continuity")
        return envelope_continuity_study(map, theta, f, {c.kappas, cmd_detail::oracle(c), c.continuity_tolerance, 2.0});
    if (id == "ulln") {
        UllnConfig u;
        u.thetas = parameter_grid(map.params(), c.theta_points);
        u.ladder = c.ladder;
        u.seed = seed;
        u.oracle = cmd_detail::oracle(c);
        u.tolerance = c.ulln_tolerance;
        u.max_slope = c.max_slope;
        return ulln_study(map, f, u);
    }
    if (id == "uniqueness")
        return uniqueness_study(map, parameter_grid(map.params(), c.theta_points), f,
                                {cmd_detail::oracle(c), c.batches, c.n_se});
    if (id == "approx") {
        ApproxStudyConfig a;
        a.resolutions = c.resolutions;
        a.probes = {theta};
        a.n_state_points = c.state_points;
        a.mc_draws = c.mc_draws;
        a.seed = seed;
        a.oracle = cmd_detail::oracle(c);
        a.search = cmd_detail::search(c);
        ApproxVerdictConfig vc;
        vc.improvement = c.improvement;
        vc.final_error = c.final_error;
        if (!c.approx_estimate) return approx_study(map, a, vc);
        auto dist = cmd_detail::distance(c);
        std::optional<DataSeries> d;
        if (dist.weighting == DistanceSpec::Weighting::bootstrap) d = cmd_detail::data(c, map, f, c.estimation_N);
        const auto G = bind_distance(dist, f, d ? &*d : nullptr, c.estimation_N);
        const auto fbar = oracle_expectation(map, theta, f, a.oracle).moments.values;
        return approx_study(map, a, vc, &G, &fbar);
    }
    std::string valid;
    for (const auto& s : study_ids()) valid += (valid.empty() ? "" : ", ") + s;
    throw Error("unknown study '" + id + "' (valid: " + valid + ")");
}

inline RunResult run_diagnose(const ExperimentConfig& c, const std::string& dir) {
    const auto rep = diagnose_report(c);
    return {"diagnose", c.study, rep.write(dir), rep.passed(), rep.summary()};
}

/// Interpolation study with the theta^j estimates always included.
inline RunResult run_approx_study(ExperimentConfig c, const std::string& dir) {
    c.study = "approx";
    c.approx_estimate = true;
    auto r = run_diagnose(c, dir);
    r.command = "approx-study";
    return r;
}

/// Normalizes, runs `command`, writes `config.ini` and `manifest.json`.
inline std::pair<RunResult, Manifest> run_command(const std::string& command, const ExperimentConfig& raw,
                                                  const std::string& dir) {
    require(raw.formats == "csv", "output.formats: only 'csv' is supported");
    const ExperimentConfig c = normalize(raw);
    std::filesystem::create_directories(dir);
    RunResult r;
    if (command == "simulate") r = run_simulate(c, dir);
    else if (command == "estimate") r = run_estimate(c, dir);
    else if (command == "diagnose") r = run_diagnose(c, dir);
    else if (command == "approx-study") r = run_approx_study(c, dir);
    else throw Error("unknown command '" + command + "' (simulate, estimate, diagnose, approx-study)");
    const std::string text = serialize_config(c);
    {
        std::ofstream f(std::filesystem::path(dir) / "config.ini", std::ios::binary);
        require(static_cast<bool>(f), "cannot write to output directory '" + dir + "'");
        f << text;
    }
    r.files.insert(r.files.begin(), "config.ini");
    Manifest m;
    m.command = command;
    m.study = r.study;
    m.config = text;
    m.seeds = {{"master", c.master_seed},
               {"data", *c.data_seed},
               {"sim", *c.sim_seed},
               {"oracle", *c.oracle_seed},
               {"diag", *c.diag_seed}};
    m.files = checksum_files(dir, r.files);
    m.passed = r.passed;
    m.write((std::filesystem::path(dir) / "manifest.json").string());
    return {std::move(r), std::move(m)};
}

struct ReplayResult {
    RunResult run;
    std::vector<std::string> mismatches; ///< files whose checksums differ from the manifest
    bool reproduced() const { return mismatches.empty(); }
};

/// Re-executes the run recorded in a manifest into `dir` and compares checksums.
inline ReplayResult replay_manifest(const std::string& manifest_path, const std::string& dir) {
    const Manifest m = Manifest::read(manifest_path);
    auto [run, fresh] = run_command(m.command, parse_config(m.config), dir);
    return {std::move(run), checksum_mismatches(m.files, fresh.files)};
}

} // namespace sme
