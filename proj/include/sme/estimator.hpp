#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sme/moments.hpp"
#include "sme/parallel.hpp"

namespace sme {

// ---------------------------------------------------------------------------
// Distance

/// Data values and their dispersions for the volatility-match preset.
inline constexpr double kVolatilityTargets[3] = {8.86, 3.31, 31.41};
inline constexpr double kVolatilityDispersion[3] = {0.0091, 0.0035, 0.0315};

/// Weighted quadratic G over the sample standard deviations of investment,
/// hours and stock, each weighted by the inverse of its dispersion.
inline double volatility_objective_preset(const std::array<double, 3>& sigma) {
    double g = 0.0;
    for (int i = 0; i < 3; ++i) {
        require(std::isfinite(sigma[i]) && sigma[i] >= 0.0, "volatility preset needs nonnegative sigma values");
        g += (sigma[i] - kVolatilityTargets[i]) * (sigma[i] - kVolatilityTargets[i]) / kVolatilityDispersion[i];
    }
    return g;
}

/// G(x, y) = sum_i w_i (x_i - y_i)^2 over selected statistics.
struct DistanceSpec {
    enum class Weighting { fixed, bootstrap };

    std::vector<std::string> statistics; ///< names from MomentSpec::stat_names; empty selects every primitive
    std::vector<double> weights;         ///< fixed weights; empty means all ones
    Weighting weighting = Weighting::fixed;
    std::size_t bootstrap_reps = 200;
    std::uint64_t bootstrap_seed = 1;
    std::vector<double> targets;         ///< when set, replaces the data statistics
    std::string preset;                  ///< informational tag

    /// Matches three named standard-deviation statistics to the preset targets.
    static DistanceSpec volatility_match(std::vector<std::string> stat_names) {
        require(stat_names.size() == 3, "volatility-match needs exactly three statistics");
        DistanceSpec d;
        d.statistics = std::move(stat_names);
        for (int i = 0; i < 3; ++i) {
            d.weights.push_back(1.0 / kVolatilityDispersion[i]);
            d.targets.push_back(kVolatilityTargets[i]);
        }
        d.preset = "volatility-match";
        return d;
    }
};

/// A distance resolved against a moment spec, with concrete weights.
class BoundDistance {
public:
    BoundDistance(MomentSpec spec, std::vector<std::size_t> indices, std::vector<double> weights,
                  std::vector<double> targets)
        : spec_(std::move(spec)), idx_(std::move(indices)), w_(std::move(weights)), targets_(std::move(targets)) {
        require(idx_.size() == w_.size() && !idx_.empty(), "distance needs one weight per selected statistic");
        for (double w : w_) require(std::isfinite(w) && w > 0.0, "distance weights must be finite and > 0");
        require(targets_.empty() || targets_.size() == idx_.size(), "distance targets must match the statistics");
    }

    const MomentSpec& spec() const { return spec_; }
    const std::vector<std::size_t>& indices() const { return idx_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& targets() const { return targets_; }

    /// G on statistic vectors already selected and ordered like indices().
    double on_selected(std::span<const double> x, std::span<const double> y) const {
        double g = 0.0;
        for (std::size_t i = 0; i < idx_.size(); ++i) g += w_[i] * (x[i] - y[i]) * (x[i] - y[i]);
        return g;
    }

    std::vector<double> select(std::span<const double> primitives) const {
        const auto stats = spec_.statistics(primitives);
        std::vector<double> out(idx_.size());
        for (std::size_t i = 0; i < idx_.size(); ++i) out[i] = stats[idx_[i]];
        return out;
    }

    /// G(stats(model), stats(data)), with the data side replaced by targets when configured.
    double operator()(std::span<const double> model_primitives, std::span<const double> data_primitives) const {
        const auto x = select(model_primitives);
        if (!targets_.empty()) return on_selected(x, targets_);
        return on_selected(x, select(data_primitives));
    }

    BoundDistance scaled(double c) const {
        auto w = w_;
        for (double& v : w) v *= c;
        return BoundDistance(spec_, idx_, std::move(w), targets_);
    }

private:
    MomentSpec spec_;
    std::vector<std::size_t> idx_;
    std::vector<double> w_;
    std::vector<double> targets_;
};

/// Per-period primitive values of the first N data rows.
inline std::vector<double> per_period_primitives(const DataSeries& d, const MomentSpec& spec, std::size_t N) {
    require(N >= 1 && N <= d.length(), "data window exceeds the data length");
    const std::size_t p = spec.size();
    std::vector<double> out(N * p);
    for (std::size_t n = 1; n <= N; ++n) spec.eval(d.row(n), std::span<double>(out.data() + (n - 1) * p, p));
    return out;
}

/// Moving-block bootstrap variance of selected statistics of the data mean,
/// block length ceil(N^(1/3)).
inline std::vector<double> block_bootstrap_variance(const DataSeries& d, const MomentSpec& spec,
                                                    const std::vector<std::size_t>& indices, std::size_t N,
                                                    std::size_t reps, std::uint64_t seed) {
    require(reps >= 2, "bootstrap needs at least 2 replicates");
    const std::size_t p = spec.size();
    const auto f = per_period_primitives(d, spec, N);
    const std::size_t L = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(N)) - 1e-9)));
    std::vector<double> prefix((N + 1) * p, 0.0);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t j = 0; j < p; ++j) prefix[(n + 1) * p + j] = prefix[n * p + j] + f[n * p + j];
    const std::size_t starts = N - std::min(L, N) + 1;
    UniformSource rng(seed, 0x626f6f74u);
    std::vector<std::vector<double>> draws(reps);
    std::vector<double> mean(p);
    for (std::size_t b = 0; b < reps; ++b) {
        std::fill(mean.begin(), mean.end(), 0.0);
        for (std::size_t filled = 0; filled < N;) {
            const std::size_t s = rng.below(starts);
            const std::size_t len = std::min({L, N - filled, N - s});
            for (std::size_t j = 0; j < p; ++j) mean[j] += prefix[(s + len) * p + j] - prefix[s * p + j];
            filled += len;
        }
        for (double& v : mean) v /= static_cast<double>(N);
        const auto stats = spec.statistics(mean);
        for (std::size_t i : indices) draws[b].push_back(stats[i]);
    }
    std::vector<double> var(indices.size(), 0.0);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        double m = 0.0;
        for (const auto& row : draws) m += row[i];
        m /= static_cast<double>(reps);
        for (const auto& row : draws) var[i] += (row[i] - m) * (row[i] - m);
        var[i] /= static_cast<double>(reps - 1);
    }
    return var;
}

/// Resolves statistic names and weights. Bootstrap weighting needs the data
/// window (first N rows) and uses inverse bootstrap variances.
inline BoundDistance bind_distance(const DistanceSpec& dist, const MomentSpec& spec, const DataSeries* data = nullptr,
                                   std::size_t N = 0) {
    std::vector<std::size_t> idx;
    if (dist.statistics.empty()) {
        for (std::size_t j = 0; j < spec.size(); ++j) idx.push_back(j);
    } else {
        for (const auto& name : dist.statistics) idx.push_back(spec.stat_index(name));
    }
    std::vector<double> w;
    if (dist.weighting == DistanceSpec::Weighting::bootstrap) {
        require(data != nullptr, "bootstrap weights need a data series");
        const auto var = block_bootstrap_variance(*data, spec, idx, N, dist.bootstrap_reps, dist.bootstrap_seed);
        for (std::size_t i = 0; i < var.size(); ++i) {
            require(var[i] > 0.0, "statistic '" + spec.stat_names()[idx[i]] + "' has zero bootstrap variance");
            w.push_back(1.0 / var[i]);
        }
    } else if (dist.weights.empty()) {
        w.assign(idx.size(), 1.0);
    } else {
        require(dist.weights.size() == idx.size(), "distance has " + std::to_string(dist.weights.size()) +
                                                       " weights for " + std::to_string(idx.size()) + " statistics");
        w = dist.weights;
    }
    return BoundDistance(spec, std::move(idx), std::move(w), dist.targets);
}

// ---------------------------------------------------------------------------
// Horizon and search configuration

/// tau_N = ceil(c N), optionally capped.
struct HorizonRule {
    double c = 1.0;
    std::optional<std::uint64_t> cap;

    std::uint64_t tau(std::uint64_t N) const {
        require(std::isfinite(c) && c > 0.0, "horizon factor c must be > 0");
        require(N >= 1, "N must be >= 1");
        auto t = static_cast<std::uint64_t>(std::ceil(c * static_cast<double>(N) - 1e-9));
        if (cap) t = std::min(t, *cap);
        return std::max<std::uint64_t>(t, 1);
    }
};

struct SearchConfig {
    std::size_t levels = 3;
    std::size_t points_per_dim = 11;
    double shrink = 0.2;
    bool polish = false;
    std::size_t polish_max_evals = 200;
    std::vector<std::pair<std::size_t, double>> fixed; ///< pinned (index, value) pairs

    void validate(const ParameterBox& box) const {
        require(levels >= 1, "search needs at least one level");
        require(points_per_dim >= 2, "search needs points_per_dim >= 2");
        require(shrink > 0.0 && shrink < 1.0, "search shrink factor must be in (0, 1)");
        for (const auto& [i, v] : fixed) {
            require(i < box.dim(), "fixed parameter index " + std::to_string(i) + " out of range");
            require(v >= box.lower()[i] && v <= box.upper()[i],
                    "fixed value for '" + box.names()[i] + "' lies outside the parameter box");
        }
    }
};

struct Estimate {
    Point theta;
    double objective = 0.0;
    std::size_t evaluations = 0;
    double grid_step = 0.0;        ///< largest final-level spacing over free dimensions
    double runner_up_gap = std::numeric_limits<double>::infinity(); ///< best coarse value away from the winner minus the minimum
    std::optional<Point> runner_up;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

inline bool better(double fa, std::span<const double> a, double fb, std::span<const double> b) {
    if (std::isnan(fa)) fa = std::numeric_limits<double>::infinity();
    if (std::isnan(fb)) fb = std::numeric_limits<double>::infinity();
    if (fa != fb) return fa < fb;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline double clean(double f) { return std::isnan(f) ? std::numeric_limits<double>::infinity() : f; }

/// Bounded Nelder-Mead over the free coordinates; returns the best point found.
inline std::pair<std::vector<double>, double> nelder_mead(const Objective& f, std::vector<double> start, double f0,
                                                          const std::vector<std::size_t>& free,
                                                          const ParameterBox& box, double step,
                                                          std::size_t max_evals, std::size_t& evals) {
    const std::size_t m = free.size();
    auto clip = [&](std::vector<double>& th) {
        for (std::size_t i : free) th[i] = std::clamp(th[i], box.lower()[i], box.upper()[i]);
    };
    std::vector<std::vector<double>> x(m + 1, start);
    std::vector<double> fx(m + 1, clean(f0));
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t i = free[j];
        x[j + 1][i] += (x[j + 1][i] + step <= box.upper()[i]) ? step : -step;
        clip(x[j + 1]);
        fx[j + 1] = clean(f(x[j + 1]));
        ++evals;
    }
    std::vector<std::size_t> order(m + 1);
    auto eval = [&](std::vector<double> th) {
        clip(th);
        ++evals;
        const double v = clean(f(th));
        return std::make_pair(std::move(th), v);
    };
    while (evals < max_evals) {
        for (std::size_t j = 0; j <= m; ++j) order[j] = j;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return better(fx[a], x[a], fx[b], x[b]); });
        const std::size_t best = order.front(), worst = order.back(), second = order[m - 1];
        if (fx[worst] - fx[best] <= 1e-12 * (1.0 + std::abs(fx[best]))) break;
        std::vector<double> c(start.size(), 0.0);
        for (std::size_t j = 0; j <= m; ++j)
            if (j != worst)
                for (std::size_t i : free) c[i] += x[j][i] / static_cast<double>(m);
        auto along = [&](double t) {
            std::vector<double> th = x[worst];
            for (std::size_t i : free) th[i] = c[i] + t * (x[worst][i] - c[i]);
            return th;
        };
        auto [xr, fr] = eval(along(-1.0));
        if (fr < fx[best]) {
            auto [xe, fe] = eval(along(-2.0));
            if (fe < fr) x[worst] = std::move(xe), fx[worst] = fe;
            else x[worst] = std::move(xr), fx[worst] = fr;
        } else if (fr < fx[second]) {
            x[worst] = std::move(xr), fx[worst] = fr;
        } else {
            auto [xc, fc] = eval(along(fr < fx[worst] ? -0.5 : 0.5));
            if (fc < std::min(fr, fx[worst])) {
                x[worst] = std::move(xc), fx[worst] = fc;
            } else {
                for (std::size_t j = 0; j <= m; ++j) {
                    if (j == best) continue;
                    std::vector<double> th = x[j];
                    for (std::size_t i : free) th[i] = x[best][i] + 0.5 * (x[j][i] - x[best][i]);
                    auto [xs, fs] = eval(std::move(th));
                    x[j] = std::move(xs), fx[j] = fs;
                }
            }
        }
    }
    std::size_t b = 0;
    for (std::size_t j = 1; j <= m; ++j)
        if (better(fx[j], x[j], fx[b], x[b])) b = j;
    return {x[b], fx[b]};
}

} // namespace detail

/// Deterministic coarse-to-fine grid search over the parameter box with
/// lexicographic tie-breaking among equal minima; each level is evaluated in
/// parallel and reduced in grid order.
inline Estimate minimize(const ParameterBox& box, const SearchConfig& cfg, const Objective& f) {
    cfg.validate(box);
    const std::size_t l = box.dim();
    std::vector<double> base = box.lower();
    std::vector<bool> pinned(l, false);
    for (const auto& [i, v] : cfg.fixed) base[i] = v, pinned[i] = true;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < l; ++i)
        if (!pinned[i] && box.lower()[i] < box.upper()[i]) free.push_back(i);
        else if (!pinned[i]) base[i] = box.lower()[i];

    Estimate est;
    std::vector<double> best = base;
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> lo(l), hi(l);
    for (std::size_t i = 0; i < l; ++i) lo[i] = box.lower()[i], hi[i] = box.upper()[i];

    const std::size_t P = cfg.points_per_dim;
    for (std::size_t level = 0; level < cfg.levels; ++level) {
        if (level > 0) {
            for (std::size_t i : free) {
                const double half = 0.5 * (box.upper()[i] - box.lower()[i]) * std::pow(cfg.shrink, double(level));
                lo[i] = std::max(box.lower()[i], best[i] - half);
                hi[i] = std::min(box.upper()[i], best[i] + half);
            }
        }
        std::size_t count = 1;
        for (std::size_t k = 0; k < free.size(); ++k) count *= P;
        std::vector<std::vector<double>> pts(count, best);
        for (std::size_t c = 0; c < count; ++c) {
            std::size_t rem = c;
            for (std::size_t k = free.size(); k-- > 0;) {
                const std::size_t i = free[k], q = rem % P;
                rem /= P;
                pts[c][i] = q + 1 == P ? hi[i] : lo[i] + (hi[i] - lo[i]) * static_cast<double>(q) / double(P - 1);
            }
        }
        std::vector<double> vals(count);
        parallel_for(count, [&](std::size_t c) { vals[c] = f(pts[c]); });
        est.evaluations += count;
        std::size_t arg = 0;
        for (std::size_t c = 1; c < count; ++c)
            if (detail::better(vals[c], pts[c], vals[arg], pts[arg])) arg = c;
        if (detail::better(vals[arg], pts[arg], best_f, best)) best = pts[arg], best_f = detail::clean(vals[arg]);
        if (level == 0 && !free.empty()) {
            // Runner-up: best coarse value more than one grid cell away from the winner.
            std::optional<std::size_t> ru;
            for (std::size_t c = 0; c < count; ++c) {
                bool far = false;
                for (std::size_t i : free) {
                    const double cell = (hi[i] - lo[i]) / double(P - 1);
                    if (std::abs(pts[c][i] - pts[arg][i]) > 1.5 * cell) far = true;
                }
                if (far && (!ru || detail::better(vals[c], pts[c], vals[*ru], pts[*ru]))) ru = c;
            }
            if (ru) {
                est.runner_up_gap = detail::clean(vals[*ru]) - detail::clean(vals[arg]);
                est.runner_up = Point(pts[*ru]);
            }
        }
        est.grid_step = 0.0;
        for (std::size_t i : free) est.grid_step = std::max(est.grid_step, (hi[i] - lo[i]) / double(P - 1));
    }
    if (free.empty()) best_f = detail::clean(f(best)), est.evaluations = 1;
    if (cfg.polish && !free.empty()) {
        auto [x, fx] = detail::nelder_mead(f, best, best_f, free, box, est.grid_step,
                                           est.evaluations + cfg.polish_max_evals, est.evaluations);
        if (detail::better(fx, x, best_f, best)) best = std::move(x), best_f = fx;
    }
    est.theta = Point(std::move(best));
    est.objective = best_f;
    return est;
}

// ---------------------------------------------------------------------------
// Population and finite-sample problems

/// theta0 = argmin G(E_theta(f), fbar) with oracle moments under a common
/// oracle seed for every theta.
inline Estimate population_solve(const MarkovMap& map, const BoundDistance& G, const std::vector<double>& fbar,
                                 const OracleConfig& oracle, const SearchConfig& search) {
    G.spec().validate(map.state_box());
    require(fbar.size() == G.spec().size(), "data moment vector has the wrong length");
    return minimize(map.params(), search, [&](std::span<const double> th) {
        const auto r = oracle_expectation(map, Point(std::vector<double>(th.begin(), th.end())), G.spec(), oracle);
        return G(r.moments.values, fbar);
    });
}

/// G_N((1/tau_N) sum f(simulated), (1/N) sum f(data)) for one theta.
inline double finite_sample_objective(const MarkovMap& map, const BoundDistance& G, std::span<const double> theta,
                                      const Point& s0, const ShockStream& stream, std::uint64_t N,
                                      const HorizonRule& horizon, const std::vector<double>& data_primitives) {
    const auto sim = chain_moments(map, G.spec(), s0.view(), stream, theta, horizon.tau(N), 0);
    return G(sim.values, data_primitives);
}

struct EstimationSetup {
    MomentSpec spec;
    DistanceSpec distance;
    HorizonRule horizon;
    SearchConfig search;
};

/// theta_hat_N: minimizer of the finite-sample objective with common random
/// numbers from `stream` and the first N data rows.
inline Estimate estimate(const MarkovMap& map, const EstimationSetup& setup, const DataSeries& data, const Point& s0,
                         const ShockStream& stream, std::uint64_t N) {
    require(N >= 1, "N must be >= 1");
    require_same_dim(map.state_dim(), data.dim, "data series");
    require(map.state_box().contains(s0), "simulation start s0 lies outside the state box");
    require_same_dim(map.shock_dim(), stream.dim(), "shock stream");
    setup.spec.validate(map.state_box());
    const auto G = bind_distance(setup.distance, setup.spec, &data, N);
    const auto fbar = data_moments(data, setup.spec, N).values;
    return minimize(map.params(), setup.search, [&](std::span<const double> th) {
        return finite_sample_objective(map, G, th, s0, stream, N, setup.horizon, fbar);
    });
}

/// Data generated by the model itself from an independent stream.
inline DataSeries synthetic_data(const MarkovMap& map, const Point& theta0, const Point& s0, std::uint64_t data_seed,
                                 std::uint64_t N, const std::vector<std::size_t>& observable) {
    return data_from_path(simulate_path(map, s0, ShockStream(data_seed, 2, map.shock_dim()), theta0, N), observable);
}

struct TraceEntry {
    std::uint64_t N = 0;
    Point theta;
    double objective = 0.0;
    double error = std::numeric_limits<double>::quiet_NaN(); ///< max-norm distance to theta0 when known
    std::size_t evaluations = 0;
};

struct EstimateTrace {
    std::vector<TraceEntry> entries; ///< sorted by N
    std::optional<Point> theta0;
    double slope = std::numeric_limits<double>::quiet_NaN(); ///< least-squares slope of log error on log N
    double error_floor = 0.0;        ///< errors below this are treated as equal to it in the slope fit
    double objective_floor = 0.0;    ///< objective at the largest N
    bool misspecified = false;       ///< objective_floor above the configured tolerance
    std::uint64_t sim_seed = 0;
    std::uint64_t data_seed = 0;

    const Point& final_theta() const { return entries.back().theta; }
};

/// Least-squares slope of log(y) on log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "slope fit needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
    mx /= double(x.size()), my /= double(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

struct ConsistencyConfig {
    std::vector<std::uint64_t> N_list;
    std::uint64_t sim_seed = 1;
    std::uint64_t data_seed = 2;
    double floor_tolerance = 1e-3;
};

/// Runs estimate for each N with nested data windows and a nested simulation stream.
inline EstimateTrace consistency_study(const MarkovMap& map, const EstimationSetup& setup, const DataSeries& data,
                                       const Point& s0, const ConsistencyConfig& cfg,
                                       const std::optional<Point>& theta0 = std::nullopt) {
    require(!cfg.N_list.empty(), "consistency study needs at least one N");
    for (std::size_t i = 1; i < cfg.N_list.size(); ++i)
        require(cfg.N_list[i] > cfg.N_list[i - 1], "N_list must be strictly increasing");
    require(cfg.N_list.back() <= data.length(), "data series shorter than the largest N");
    EstimateTrace tr;
    tr.theta0 = theta0;
    tr.sim_seed = cfg.sim_seed;
    tr.data_seed = cfg.data_seed;
    const ShockStream stream(cfg.sim_seed, 1, map.shock_dim());
    for (std::uint64_t N : cfg.N_list) {
        const auto est = estimate(map, setup, data, s0, stream, N);
        TraceEntry e{N, est.theta, est.objective, std::numeric_limits<double>::quiet_NaN(), est.evaluations};
        if (theta0) {
            e.error = 0.0;
            for (std::size_t i = 0; i < theta0->size(); ++i)
                e.error = std::max(e.error, std::abs(est.theta[i] - (*theta0)[i]));
        }
        tr.error_floor = std::max(tr.error_floor, est.grid_step);
        tr.entries.push_back(std::move(e));
    }
    if (tr.error_floor == 0.0) tr.error_floor = 1e-12;
    tr.objective_floor = tr.entries.back().objective;
    tr.misspecified = tr.objective_floor > cfg.floor_tolerance;
    if (theta0 && tr.entries.size() >= 2) {
        std::vector<double> xs, ys;
        for (const auto& e : tr.entries) xs.push_back(double(e.N)), ys.push_back(std::max(e.error, tr.error_floor));
        tr.slope = loglog_slope(xs, ys);
    }
    return tr;
}

/// `N,theta_1..theta_l,objective`.
inline csv::Table trace_table(const EstimateTrace& tr) {
    csv::Table t;
    t.header.push_back("N");
    const std::size_t l = tr.entries.empty() ? 0 : tr.entries.front().theta.size();
    for (std::size_t i = 0; i < l; ++i) t.header.push_back("theta_" + std::to_string(i + 1));
    t.header.push_back("objective");
    for (const auto& e : tr.entries) {
        std::vector<std::string> row{std::to_string(e.N)};
        for (double v : e.theta.coords()) row.push_back(csv::num(v));
        row.push_back(csv::num(e.objective));
        t.add(std::move(row));
    }
    return t;
}

/// Per-N error and evaluation counts alongside the estimates.
inline csv::Table trace_detail_table(const EstimateTrace& tr) {
    csv::Table t{{"N", "error", "evaluations", "sim_seed", "data_seed"}, {}};
    for (const auto& e : tr.entries)
        t.add({std::to_string(e.N), csv::num(e.error), std::to_string(e.evaluations), std::to_string(tr.sim_seed),
               std::to_string(tr.data_seed)});
    return t;
}

} // namespace sme
