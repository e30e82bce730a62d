#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sme/approx.hpp"
#include "sme/envelopes.hpp"
#include "sme/model_checks.hpp"

namespace sme {

struct Verdict {
    std::string name;
    bool passed = false;
    std::string table;   ///< evidence table
    std::size_t row = 0; ///< evidence row (0-based, header excluded)
    std::string evidence;
};

/// Named CSV tables, recorded inputs and verdicts that cite their evidence rows.
class StudyReport {
public:
    StudyReport(std::string study, std::string model) : study_(std::move(study)), model_(std::move(model)) {}

    const std::string& study() const { return study_; }
    const std::string& model() const { return model_; }
    const std::vector<std::pair<std::string, std::string>>& inputs() const { return inputs_; }
    const std::vector<std::pair<std::string, csv::Table>>& tables() const { return tables_; }
    const std::vector<Verdict>& verdicts() const { return verdicts_; }

    void input(std::string key, std::string value) { inputs_.emplace_back(std::move(key), std::move(value)); }
    void input(std::string key, double value) { input(std::move(key), csv::num(value)); }

    csv::Table& table(const std::string& name, std::vector<std::string> header = {}) {
        for (auto& [n, t] : tables_)
            if (n == name) return t;
        tables_.emplace_back(name, csv::Table{std::move(header), {}});
        return tables_.back().second;
    }

    const csv::Table& get(const std::string& name) const {
        for (const auto& [n, t] : tables_)
            if (n == name) return t;
        throw Error("report has no table '" + name + "'");
    }

    void verdict(std::string name, bool passed, std::string table, std::size_t row, std::string evidence) {
        require(row < get(table).rows.size(), "verdict cites a missing evidence row");
        verdicts_.push_back({std::move(name), passed, std::move(table), row, std::move(evidence)});
    }

    bool passed() const {
        return !verdicts_.empty() &&
               std::all_of(verdicts_.begin(), verdicts_.end(), [](const Verdict& v) { return v.passed; });
    }

    std::string summary() const {
        std::ostringstream out;
        out << "study: " << study_ << "\nmodel: " << model_ << "\n";
        for (const auto& [k, v] : inputs_) out << "input " << k << " = " << v << "\n";
        for (const auto& v : verdicts_)
            out << (v.passed ? "PASS " : "FAIL ") << v.name << " [" << v.table << " row " << v.row << "] "
                << v.evidence << "\n";
        out << "overall: " << (passed() ? "PASS" : "FAIL") << "\n";
        return out.str();
    }

    /// Writes `<study>_<table>.csv` per table and `<study>_summary.txt`; returns the file names.
    std::vector<std::string> write(const std::string& dir) const {
        std::filesystem::create_directories(dir);
        std::vector<std::string> files;
        for (const auto& [n, t] : tables_) {
            const std::string f = study_ + "_" + n + ".csv";
            t.write((std::filesystem::path(dir) / f).string());
            files.push_back(f);
        }
        const std::string f = study_ + "_summary.txt";
        std::ofstream s(std::filesystem::path(dir) / f, std::ios::binary);
        require(static_cast<bool>(s), "cannot write to output directory '" + dir + "'");
        s << summary();
        files.push_back(f);
        return files;
    }

private:
    std::string study_;
    std::string model_;
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::vector<std::pair<std::string, csv::Table>> tables_;
    std::vector<Verdict> verdicts_;
};

namespace detail {

inline std::string join_nums(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv::num(v[i]);
    return s;
}

inline std::string point_str(const Point& p) { return join_nums(p.coords()); }

inline std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

} // namespace detail

/// Equispaced grid over Theta (points_per_dim per non-degenerate axis), lexicographic order.
inline std::vector<Point> parameter_grid(const ParameterBox& box, std::size_t points_per_dim) {
    require(points_per_dim >= 2, "parameter grid needs points_per_dim >= 2");
    std::vector<std::vector<double>> axes(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
        if (box.lower()[i] == box.upper()[i]) {
            axes[i] = {box.lower()[i]};
            continue;
        }
        const Box axis({box.lower()[i]}, {box.upper()[i]});
        for (std::size_t q = 0; q < points_per_dim; ++q) axes[i].push_back(lattice_coordinate(axis, 0, q, points_per_dim));
    }
    std::vector<Point> out;
    std::vector<std::size_t> idx(box.dim(), 0);
    while (true) {
        std::vector<double> th(box.dim());
        for (std::size_t i = 0; i < box.dim(); ++i) th[i] = axes[i][idx[i]];
        out.emplace_back(std::move(th));
        std::size_t i = box.dim();
        while (i-- > 0) {
            if (++idx[i] < axes[i].size()) break;
            idx[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Wrappers around the model checks

inline StudyReport monotone_study(const MarkovMap& map, std::size_t n_pairs, std::uint64_t seed) {
    StudyReport rep("monotone", map.name());
    rep.input("pairs", std::to_string(n_pairs));
    rep.input("seed", std::to_string(seed));
    const auto r = check_monotone(map, n_pairs, seed);
    rep.table("pairs", {"pairs", "violations", "worst_gap", "witness"})
        .add({std::to_string(r.pairs), std::to_string(r.violations), csv::num(r.worst), "\"" + r.witness + "\""});
    rep.verdict("zero_violations", r.passed(), "pairs", 0, "violations=" + std::to_string(r.violations));
    return rep;
}

inline StudyReport coupling_study(const MarkovMap& map, std::size_t n_pairs, std::uint64_t steps, std::uint64_t seed) {
    StudyReport rep("coupling", map.name());
    rep.input("pairs", std::to_string(n_pairs));
    rep.input("N", std::to_string(steps));
    rep.input("seed", std::to_string(seed));
    const auto r = check_coupling(map, n_pairs, steps, seed);
    rep.table("pairs", {"pairs", "N", "violating_pairs", "violations", "witness"})
        .add({std::to_string(r.pairs), std::to_string(r.steps), std::to_string(r.violating_pairs),
              std::to_string(r.violations), r.witness});
    rep.verdict("zero_violations", r.passed(), "pairs", 0, "violations=" + std::to_string(r.violations));
    return rep;
}

inline StudyReport feller_study(const MarkovMap& map, const MomentSpec& f, const Point& theta, const Point& s,
                                std::size_t n_dirs, std::size_t mc_draws, std::uint64_t seed, double tol = 1e-2) {
    StudyReport rep("feller", map.name());
    rep.input("theta", detail::point_str(theta));
    rep.input("s", detail::point_str(s));
    rep.input("mc_draws", std::to_string(mc_draws));
    rep.input("tolerance", tol);
    const auto r = check_feller(map, f, theta, s, n_dirs, mc_draws, seed, 12, tol);
    auto& t = rep.table("gaps", {"direction", "h", "gap"});
    for (std::size_t d = 0; d < r.gaps.size(); ++d)
        for (std::size_t j = 0; j < r.steps.size(); ++j)
            t.add({std::to_string(d), csv::num(r.steps[j]), csv::num(r.gaps[d][j])});
    double worst = -1.0;
    std::size_t row = 0;
    for (std::size_t d = 0; d < r.gaps.size(); ++d)
        if (r.gaps[d].back() > worst) worst = r.gaps[d].back(), row = d * r.steps.size() + r.steps.size() - 1;
    rep.verdict("gap_vanishes", r.decays(), "gaps", row, "final gap=" + csv::num(r.final_gap()));
    return rep;
}

inline StudyReport dominance_study(const MarkovMap& map, const std::vector<double>& kappas, std::size_t n,
                                   std::uint64_t seed) {
    StudyReport rep("dominance", map.name());
    rep.input("kappa_grid", detail::join_nums(kappas));
    rep.input("samples", std::to_string(n));
    auto& t = rep.table("kappa", {"kappa", "samples", "violations", "worst", "witness"});
    std::size_t worst_row = 0, worst_v = 0, total = 0;
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        const auto r = check_dominance(map, kappas[i], n, seed + i);
        t.add({csv::num(kappas[i]), std::to_string(r.samples), std::to_string(r.violations), csv::num(r.worst),
               "\"" + r.witness + "\""});
        total += r.violations;
        if (r.violations > worst_v) worst_v = r.violations, worst_row = i;
    }
    rep.verdict("zero_violations", total == 0, "kappa", worst_row, "violations=" + std::to_string(total));
    return rep;
}

inline StudyReport neighborhood_study(const MarkovMap& map, const Point& theta, double kappa, double radius,
                                      std::size_t n, std::uint64_t seed) {
    StudyReport rep("neighborhood", map.name());
    rep.input("theta", detail::point_str(theta));
    rep.input("kappa", kappa);
    rep.input("radius", radius);
    const auto r = check_parameter_neighborhood(map, theta, kappa, radius, n, seed);
    auto& t = rep.table("radius", {"radius", "samples", "violations"});
    for (std::size_t i = 0; i < r.radii.size(); ++i)
        t.add({csv::num(r.radii[i]), std::to_string(r.samples_per_radius), std::to_string(r.violations[i])});
    rep.verdict("requested_radius_dominated", r.passed(), "radius", 0,
                "violations=" + std::to_string(r.violations.front()) +
                    " largest passing radius=" + csv::num(r.largest_passing_radius) +
                    (r.witness.empty() ? "" : " witness " + r.witness));
    return rep;
}

// ---------------------------------------------------------------------------
// Pathwise sandwich

struct SandwichConfig {
    std::vector<double> kappas{0.4, 0.2};
    double radius = 0.2;
    std::uint64_t N = 10'000;
    std::size_t n_seeds = 10;
    std::size_t n_theta = 20; ///< includes theta_center itself
    std::uint64_t seed = 1;
};

/// Checks, at every prefix n, avg f(majorant path at theta_center) >=
/// avg f(base path at theta') >= avg f(minorant path at theta_center), with
/// all three paths driven by the same stream, and nesting of the envelope
/// averages across kappa.
inline StudyReport sandwich_study(const MarkovMap& map, const Point& theta_center, const MomentSpec& f,
                                  const Point& s0, const SandwichConfig& cfg) {
    require(!cfg.kappas.empty() && cfg.n_seeds >= 1 && cfg.n_theta >= 1, "sandwich study needs nonempty grids");
    require(cfg.radius >= 0.0, "sandwich radius must be >= 0");
    f.validate(map.state_box());
    map.params().require_contains(theta_center.view());
    StudyReport rep("sandwich", map.name());
    rep.input("theta_center", detail::point_str(theta_center));
    rep.input("kappa_grid", detail::join_nums(cfg.kappas));
    rep.input("radius", cfg.radius);
    rep.input("N", std::to_string(cfg.N));
    rep.input("seeds", std::to_string(cfg.n_seeds));
    rep.input("theta_samples", std::to_string(cfg.n_theta));
    rep.input("seed", std::to_string(cfg.seed));

    std::vector<Point> thetas{theta_center};
    UniformSource rng(cfg.seed, 0x7377u);
    const std::size_t l = map.param_dim();
    while (thetas.size() < cfg.n_theta) {
        std::vector<double> th(l);
        for (std::size_t i = 0; i < l; ++i)
            th[i] = rng.uniform(std::max(map.params().lower()[i], theta_center[i] - cfg.radius),
                                std::min(map.params().upper()[i], theta_center[i] + cfg.radius));
        thetas.emplace_back(std::move(th));
    }
    const std::size_t p = f.size();

    auto averages = [&](const Path& path) {
        std::vector<double> avg(path.length() * p), sum(p, 0.0), fx(p);
        for (std::size_t n = 1; n <= path.length(); ++n) {
            f.eval(path.state(n), fx);
            for (std::size_t j = 0; j < p; ++j) {
                sum[j] += fx[j];
                avg[(n - 1) * p + j] = sum[j] / static_cast<double>(n);
            }
        }
        return avg;
    };
    auto count_below = [&](const std::vector<double>& hi, const std::vector<double>& lo, std::size_t& first) {
        std::size_t bad = 0;
        for (std::size_t n = 0; n < hi.size() / p; ++n) {
            bool ok = true;
            for (std::size_t j = 0; j < p; ++j) ok = ok && hi[n * p + j] >= lo[n * p + j];
            if (!ok && bad++ == 0) first = n + 1;
        }
        return bad;
    };

    struct Cell {
        std::size_t kappa, theta, seed;
        std::size_t states = 0, averages = 0, first = 0;
    };
    std::vector<Cell> cells;
    for (std::size_t a = 0; a < cfg.kappas.size(); ++a)
        for (std::size_t b = 0; b < thetas.size(); ++b)
            for (std::size_t c = 0; c < cfg.n_seeds; ++c) cells.push_back({a, b, c});
    parallel_for(cells.size(), [&](std::size_t i) {
        Cell& cell = cells[i];
        const ShockStream stream(derive_seed(cfg.seed, cell.seed), 1, map.shock_dim());
        const auto sw = simulate_sandwich(map, cfg.kappas[cell.kappa], s0, stream, thetas[cell.theta], theta_center,
                                          cfg.N);
        for (std::size_t n = 1; n <= cfg.N; ++n)
            if (!(leq(sw.base.state(n), sw.upper.state(n)) && leq(sw.lower.state(n), sw.base.state(n)))) ++cell.states;
        const auto up = averages(sw.upper), mid = averages(sw.base), lo = averages(sw.lower);
        std::size_t f1 = 0, f2 = 0;
        cell.averages = count_below(up, mid, f1) + count_below(mid, lo, f2);
        cell.first = f1 && f2 ? std::min(f1, f2) : std::max(f1, f2);
    });
    auto& t = rep.table("cells", {"kappa", "theta", "seed", "state_violations", "average_violations", "first_n"});
    std::size_t total = 0, worst = 0, worst_row = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        t.add({csv::num(cfg.kappas[c.kappa]), detail::point_str(thetas[c.theta]), std::to_string(c.seed),
               std::to_string(c.states), std::to_string(c.averages), std::to_string(c.first)});
        total += c.averages;
        if (c.averages > worst) worst = c.averages, worst_row = i;
    }
    rep.verdict("prefix_order", total == 0, "cells", worst_row,
                "average ordering violations=" + std::to_string(total) + " over " + std::to_string(cells.size()) +
                    " runs x " + std::to_string(cfg.N) + " prefixes");

    // Nesting of envelope averages across the kappa grid, at theta_center.
    std::vector<double> ks = cfg.kappas;
    std::sort(ks.rbegin(), ks.rend());
    auto& nt = rep.table("nesting", {"kappa_big", "kappa_small", "seed", "violations"});
    std::size_t nest_total = 0, nest_row = 0, nest_worst = 0;
    for (std::size_t a = 0; a + 1 < ks.size(); ++a) {
        for (std::size_t c = 0; c < cfg.n_seeds; ++c) {
            const ShockStream stream(derive_seed(cfg.seed, c), 1, map.shock_dim());
            const auto big = simulate_sandwich(map, ks[a], s0, stream, theta_center, theta_center, cfg.N);
            const auto small = simulate_sandwich(map, ks[a + 1], s0, stream, theta_center, theta_center, cfg.N);
            std::size_t f1 = 0, f2 = 0;
            const std::size_t bad = count_below(averages(big.upper), averages(small.upper), f1) +
                                    count_below(averages(small.lower), averages(big.lower), f2);
            nt.add({csv::num(ks[a]), csv::num(ks[a + 1]), std::to_string(c), std::to_string(bad)});
            nest_total += bad;
            if (bad > nest_worst) nest_worst = bad, nest_row = nt.rows.size() - 1;
        }
    }
    if (!nt.rows.empty())
        rep.verdict("kappa_nesting", nest_total == 0, "nesting", nest_row,
                    "nesting violations=" + std::to_string(nest_total));
    return rep;
}

// ---------------------------------------------------------------------------
// Envelope continuity

struct ContinuityConfig {
    std::vector<double> kappas{0.4, 0.2, 0.1, 0.05, 0.025}; ///< strictly decreasing
    OracleConfig oracle;
    double tolerance = 0.02;  ///< bound on g at the smallest kappa
    double se_slack = 2.0;    ///< allowed rise between consecutive kappas, in standard errors
};

/// g(kappa) = max_j |E^kappa f_j - E f_j| for the majorant and the
/// minorant; verdicts on the decreasing trend and on g at the smallest kappa.
inline StudyReport envelope_continuity_study(const MarkovMap& map, const Point& theta, const MomentSpec& f,
                                             const ContinuityConfig& cfg) {
    require(!cfg.kappas.empty(), "continuity study needs a kappa grid");
    for (std::size_t i = 1; i < cfg.kappas.size(); ++i)
        require(cfg.kappas[i] < cfg.kappas[i - 1], "kappa grid must be strictly decreasing");
    StudyReport rep("envelope-continuity", map.name());
    rep.input("theta", detail::point_str(theta));
    rep.input("kappa_grid", detail::join_nums(cfg.kappas));
    rep.input("n_oracle", std::to_string(cfg.oracle.n_oracle));
    rep.input("oracle_burn", std::to_string(cfg.oracle.burn));
    rep.input("replications", std::to_string(cfg.oracle.replications));
    rep.input("oracle_seed", std::to_string(cfg.oracle.seed));
    rep.input("tolerance", cfg.tolerance);
    rep.input("se_slack", cfg.se_slack);

    const auto base = oracle_expectation(map, theta, f, cfg.oracle);
    const std::size_t K = cfg.kappas.size();
    std::vector<OracleResult> up(K), lo(K);
    for (std::size_t i = 0; i < K; ++i) {
        up[i] = oracle_expectation(majorize(map, cfg.kappas[i]).map(), theta, f, cfg.oracle);
        lo[i] = oracle_expectation(minorize(map, cfg.kappas[i]).map(), theta, f, cfg.oracle);
    }
    auto gap = [&](const OracleResult& r, double& se) {
        double g = -1.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double d = std::abs(r.moments.values[j] - base.moments.values[j]);
            if (d > g) {
                g = d;
                const double a = (*r.moments.std_errors)[j], b = (*base.moments.std_errors)[j];
                se = std::sqrt(a * a + b * b);
            }
        }
        return g;
    };
    auto& t = rep.table("gaps", {"kappa", "side", "gap", "std_error"});
    for (const char* side : {"majorant", "minorant"}) {
        const bool is_up = std::string(side) == "majorant";
        std::vector<double> g(K), se(K);
        const std::size_t first_row = t.rows.size();
        for (std::size_t i = 0; i < K; ++i) {
            g[i] = gap(is_up ? up[i] : lo[i], se[i]);
            t.add({csv::num(cfg.kappas[i]), side, csv::num(g[i]), csv::num(se[i])});
        }
        bool trend = true;
        std::size_t bad_row = first_row;
        for (std::size_t i = 1; i < K; ++i)
            if (g[i] > g[i - 1] + cfg.se_slack * std::sqrt(se[i] * se[i] + se[i - 1] * se[i - 1]) && trend)
                trend = false, bad_row = first_row + i;
        rep.verdict(std::string(side) + "_gap_decreasing", trend, "gaps", bad_row,
                    "gaps=" + detail::join_nums(g));
        rep.verdict(std::string(side) + "_gap_small", g.back() <= cfg.tolerance, "gaps", first_row + K - 1,
                    "g(" + csv::num(cfg.kappas.back()) + ")=" + csv::num(g.back()) + " tolerance=" +
                        csv::num(cfg.tolerance));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Uniform law of large numbers

struct UllnConfig {
    std::vector<Point> thetas;
    std::vector<std::uint64_t> ladder; ///< strictly increasing N values
    std::vector<Point> starts;         ///< s0 set; empty means both corners
    std::uint64_t seed = 1;
    OracleConfig oracle;
    double tolerance = 0.01;
    double max_slope = -0.3;
};

/// sup over theta grid and s0 set of |(1/N) sum f(s_n) - E_theta f| per N,
/// with one common stream for every (theta, s0).
inline StudyReport ulln_study(const MarkovMap& map, const MomentSpec& f, const UllnConfig& cfg) {
    require(!cfg.thetas.empty(), "ulln study needs a theta grid");
    require(cfg.ladder.size() >= 2, "ulln study needs at least two N values");
    for (std::size_t i = 1; i < cfg.ladder.size(); ++i)
        require(cfg.ladder[i] > cfg.ladder[i - 1], "N ladder must be strictly increasing");
    f.validate(map.state_box());
    std::vector<Point> starts = cfg.starts;
    if (starts.empty()) starts = {map.state_box().lower_corner(), map.state_box().upper_corner()};
    StudyReport rep("ulln", map.name());
    rep.input("theta_grid_size", std::to_string(cfg.thetas.size()));
    rep.input("theta_grid", [&] {
        std::string s;
        for (std::size_t i = 0; i < cfg.thetas.size(); ++i) s += (i ? "|" : "") + detail::point_str(cfg.thetas[i]);
        return s;
    }());
    rep.input("ladder", [&] {
        std::string s;
        for (std::size_t i = 0; i < cfg.ladder.size(); ++i) s += (i ? ";" : "") + std::to_string(cfg.ladder[i]);
        return s;
    }());
    rep.input("starts", std::to_string(starts.size()));
    rep.input("seed", std::to_string(cfg.seed));
    rep.input("n_oracle", std::to_string(cfg.oracle.n_oracle));
    rep.input("oracle_seed", std::to_string(cfg.oracle.seed));
    rep.input("tolerance", cfg.tolerance);
    rep.input("max_slope", cfg.max_slope);

    const std::size_t T = cfg.thetas.size(), S = starts.size(), L = cfg.ladder.size(), p = f.size();
    std::vector<std::vector<double>> truth(T);
    for (std::size_t a = 0; a < T; ++a) truth[a] = oracle_expectation(map, cfg.thetas[a], f, cfg.oracle).moments.values;
    // gaps[(a * S + b) * L + c]
    std::vector<double> gaps(T * S * L, 0.0);
    const ShockStream stream(cfg.seed, 1, map.shock_dim());
    parallel_for(T * S, [&](std::size_t cell) {
        const std::size_t a = cell / S, b = cell % S;
        MomentAccumulator acc(f);
        std::size_t c = 0;
        run_chain(map, starts[b].view(), stream, cfg.thetas[a].view(), cfg.ladder.back(),
                  [&](std::uint64_t n, std::span<const double> s, bool) {
                      acc.add(s);
                      if (n == cfg.ladder[c]) {
                          const auto m = acc.mean();
                          double g = 0.0;
                          for (std::size_t j = 0; j < p; ++j) g = std::max(g, std::abs(m[j] - truth[a][j]));
                          gaps[cell * L + c] = g;
                          ++c;
                      }
                  });
    });
    std::vector<std::string> header{"N", "sup_gap", "argmax_theta"};
    for (std::size_t b = 0; b < S; ++b) header.push_back("sup_gap_s0_" + std::to_string(b + 1));
    auto& t = rep.table("ladder", header);
    std::vector<double> sup(L), Ns(L);
    for (std::size_t c = 0; c < L; ++c) {
        double best = -1.0;
        std::size_t arg = 0;
        std::vector<double> per_start(S, 0.0);
        for (std::size_t a = 0; a < T; ++a)
            for (std::size_t b = 0; b < S; ++b) {
                const double g = gaps[(a * S + b) * L + c];
                per_start[b] = std::max(per_start[b], g);
                if (g > best) best = g, arg = a;
            }
        sup[c] = best;
        Ns[c] = static_cast<double>(cfg.ladder[c]);
        std::vector<std::string> row{std::to_string(cfg.ladder[c]), csv::num(best), detail::point_str(cfg.thetas[arg])};
        for (double v : per_start) row.push_back(csv::num(v));
        t.add(std::move(row));
    }
    std::vector<double> ys(sup);
    for (double& y : ys) y = std::max(y, 1e-300);
    const double slope = loglog_slope(Ns, ys);
    rep.table("fit", {"slope"}).add({csv::num(slope)});
    rep.verdict("sup_gap_at_largest_N", sup.back() <= cfg.tolerance, "ladder", L - 1,
                "sup gap=" + csv::num(sup.back()) + " tolerance=" + csv::num(cfg.tolerance));
    const bool flat_zero = std::all_of(sup.begin(), sup.end(), [](double v) { return v == 0.0; });
    rep.verdict("sup_gap_slope", flat_zero || slope <= cfg.max_slope, "fit", 0,
                flat_zero ? "sup gap identically 0" : "slope=" + csv::num(slope) + " max=" + csv::num(cfg.max_slope));
    return rep;
}

// ---------------------------------------------------------------------------
// Uniqueness of the invariant distribution

struct UniquenessConfig {
    OracleConfig oracle;
    std::size_t batches = 50;  ///< batch means per start for standard errors
    double n_se = 4.0;
};

/// Long runs from the oracle starts (corners, then random points); flags any
/// pair of starts whose averages differ by more than n_se combined standard
/// errors (batch means within each run).
inline StudyReport uniqueness_study(const MarkovMap& map, const std::vector<Point>& thetas, const MomentSpec& f,
                                    const UniquenessConfig& cfg) {
    require(!thetas.empty(), "uniqueness study needs theta values");
    require(cfg.oracle.replications >= 2, "uniqueness study needs at least 2 starts");
    require(cfg.batches >= 2, "uniqueness study needs at least 2 batches");
    const std::uint64_t window = cfg.oracle.n_oracle - cfg.oracle.burn;
    require(cfg.oracle.burn < cfg.oracle.n_oracle && window >= cfg.batches, "uniqueness window too short");
    f.validate(map.state_box());
    StudyReport rep("uniqueness", map.name());
    rep.input("starts", std::to_string(cfg.oracle.replications));
    rep.input("n_oracle", std::to_string(cfg.oracle.n_oracle));
    rep.input("burn", std::to_string(cfg.oracle.burn));
    rep.input("batches", std::to_string(cfg.batches));
    rep.input("oracle_seed", std::to_string(cfg.oracle.seed));
    rep.input("n_se", cfg.n_se);
    const std::size_t R = cfg.oracle.replications, p = f.size(), B = cfg.batches;
    auto& t = rep.table("spread", {"theta", "primitive", "min", "max", "spread", "combined_se", "ratio"});
    for (const auto& th : thetas) {
        map.params().require_contains(th.view());
        std::vector<std::vector<double>> mean(R, std::vector<double>(p)), se(R, std::vector<double>(p));
        parallel_for(R, [&](std::size_t r) {
            const Point s0 = oracle_start(map.state_box(), cfg.oracle.seed, r);
            const ShockStream stream(cfg.oracle.seed, 1000 + r, map.shock_dim());
            const std::uint64_t per = window / B;
            std::vector<std::vector<double>> bm(B, std::vector<double>(p, 0.0));
            std::vector<double> fx(p);
            run_chain(map, s0.view(), stream, th.view(), cfg.oracle.burn + per * B,
                      [&](std::uint64_t n, std::span<const double> s, bool) {
                          if (n <= cfg.oracle.burn) return;
                          f.eval(s, fx);
                          const std::size_t b = (n - cfg.oracle.burn - 1) / per;
                          for (std::size_t j = 0; j < p; ++j) bm[b][j] += fx[j];
                      });
            for (std::size_t j = 0; j < p; ++j) {
                double m = 0.0;
                for (auto& row : bm) m += (row[j] /= static_cast<double>(per));
                m /= static_cast<double>(B);
                double ss = 0.0;
                for (auto& row : bm) ss += (row[j] - m) * (row[j] - m);
                mean[r][j] = m;
                se[r][j] = std::sqrt(ss / static_cast<double>(B - 1) / static_cast<double>(B));
            }
        });
        for (std::size_t j = 0; j < p; ++j) {
            double worst_ratio = 0.0, worst_spread = 0.0, worst_se = 0.0, lo = mean[0][j], hi = mean[0][j];
            bool ok = true;
            for (std::size_t a = 0; a < R; ++a) {
                lo = std::min(lo, mean[a][j]);
                hi = std::max(hi, mean[a][j]);
                for (std::size_t b = a + 1; b < R; ++b) {
                    const double d = std::abs(mean[a][j] - mean[b][j]);
                    const double cse = std::sqrt(se[a][j] * se[a][j] + se[b][j] * se[b][j]);
                    if (d > cfg.n_se * cse) ok = false;
                    const double ratio = cse > 0 ? d / cse : (d > 0 ? std::numeric_limits<double>::infinity() : 0.0);
                    if (ratio >= worst_ratio) worst_ratio = ratio, worst_spread = d, worst_se = cse;
                }
            }
            t.add({detail::point_str(th), f.primitives()[j].name, csv::num(lo), csv::num(hi), csv::num(worst_spread),
                   csv::num(worst_se), csv::num(worst_ratio)});
            rep.verdict("agreement theta=" + detail::point_str(th) + " " + f.primitives()[j].name, ok, "spread",
                        t.rows.size() - 1,
                        "max pairwise spread=" + csv::num(worst_spread) + " = " + csv::num(worst_ratio) +
                            " combined SE (limit " + csv::num(cfg.n_se) + ")");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Approximation

struct ApproxVerdictConfig {
    double improvement = 0.75;  ///< d_{j+1} <= improvement * d_j + se_slack * combined SE
    double se_slack = 2.0;
    double exact_tolerance = 1e-12; ///< d_j at or below this counts as exact reproduction
    double final_error = 0.05;
};

/// Error curve and, when an estimation setup is provided, the theta^j study.
inline StudyReport approx_study(const MarkovMap& map, const ApproxStudyConfig& cfg, const ApproxVerdictConfig& vc,
                                const BoundDistance* G = nullptr, const std::vector<double>* fbar = nullptr) {
    require(!cfg.probes.empty(), "approx study needs probe theta values");
    StudyReport rep("approx", map.name());
    rep.input("resolutions", [&] {
        std::string s;
        for (std::size_t i = 0; i < cfg.resolutions.size(); ++i) s += (i ? ";" : "") + std::to_string(cfg.resolutions[i]);
        return s;
    }());
    rep.input("state_points", std::to_string(cfg.n_state_points));
    rep.input("mc_draws", std::to_string(cfg.mc_draws));
    rep.input("seed", std::to_string(cfg.seed));
    rep.input("improvement", vc.improvement);
    rep.input("exact_tolerance", vc.exact_tolerance);

    std::vector<ApproxStudyRow> rows;
    std::optional<ApproxStudy> st;
    if (G && fbar) {
        st = approx_estimation_study(map, *G, *fbar, cfg);
        rows = st->rows;
        rep.input("theta0", detail::point_str(st->theta0.theta));
        rep.input("final_error", vc.final_error);
    } else {
        for (const auto& r : approx_error_curve(map, cfg.probes, cfg.resolutions,
                                                approx_distance_points(map.state_box(), cfg.n_state_points, cfg.seed),
                                                cfg.mc_draws, cfg.seed)) {
            ApproxStudyRow row;
            row.resolution = r.resolution;
            row.d = r.d;
            row.d_std_error = r.std_error;
            rows.push_back(std::move(row));
        }
    }
    std::vector<std::string> header{"resolution", "d_j", "d_std_error"};
    if (st) {
        for (std::size_t i = 0; i < map.param_dim(); ++i) header.push_back("theta_j_" + std::to_string(i + 1));
        header.push_back("err");
        header.push_back("oracle_spread");
    }
    auto& t = rep.table("resolutions", header);
    for (const auto& r : rows) {
        std::vector<std::string> row{std::to_string(r.resolution), csv::num(r.d), csv::num(r.d_std_error)};
        if (st) {
            for (double v : r.theta.coords()) row.push_back(csv::num(v));
            row.push_back(csv::num(r.error));
            row.push_back(csv::num(r.spread));
        }
        t.add(std::move(row));
    }
    bool improving = true;
    std::size_t bad = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto &a = rows[i - 1], &b = rows[i];
        const double slack = vc.se_slack * std::sqrt(a.d_std_error * a.d_std_error + b.d_std_error * b.d_std_error);
        const bool ok = b.d <= vc.exact_tolerance || b.d <= vc.improvement * a.d + slack;
        if (!ok && improving) improving = false, bad = i;
    }
    std::vector<double> ds;
    for (const auto& r : rows) ds.push_back(r.d);
    rep.verdict("d_j_improving", improving, "resolutions", bad, "d_j=" + detail::join_nums(ds));
    if (st) {
        const double step = st->theta0.grid_step;
        bool trend = true;
        std::size_t bad_e = 0;
        std::vector<double> errs;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            errs.push_back(rows[i].error);
            if (i && rows[i].error > rows[i - 1].error + step + 1e-12 && trend) trend = false, bad_e = i;
        }
        rep.verdict("theta_j_error_nonincreasing", trend, "resolutions", bad_e,
                    "errors=" + detail::join_nums(errs) + " grid step=" + csv::num(step));
        rep.verdict("theta_j_final_error", rows.back().error <= vc.final_error, "resolutions", rows.size() - 1,
                    "final error=" + csv::num(rows.back().error) + " limit=" + csv::num(vc.final_error));
    }
    return rep;
}

inline const std::vector<std::string>& study_ids() {
    static const std::vector<std::string> ids{"monotone", "feller",  "dominance", "neighborhood", "sandwich",
                                              "envelope-continuity", "ulln", "uniqueness", "approx", "coupling"};
    return ids;
}

} // namespace sme
