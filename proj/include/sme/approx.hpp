#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "sme/estimator.hpp"

namespace sme {

inline constexpr std::size_t kInterpMaxDim = 6;

/// phi^j: multilinear interpolation in s of the base map over the
/// points_per_dim lattice of the state box, evaluated at the queried
/// (eps, theta) and projected.
class InterpolatedMap {
public:
    InterpolatedMap(MarkovMap base, std::size_t points_per_dim, std::size_t cap = kDefaultLatticeCap)
        : base_(std::move(base)), ppd_(points_per_dim), map_(build()) {
        (void)lattice_grid_count(cap);
    }

    const MarkovMap& map() const { return map_; }
    const MarkovMap& base() const { return base_; }
    std::size_t points_per_dim() const { return ppd_; }

private:
    std::size_t lattice_grid_count(std::size_t cap) const {
        std::size_t total = 1;
        for (std::size_t i = 0; i < base_.state_dim(); ++i) {
            if (total > cap / ppd_) throw Error("interpolation grid exceeds the lattice cap");
            total *= ppd_;
        }
        return total;
    }

    MarkovMap build() const {
        require(ppd_ >= 2, "interpolation needs points_per_dim >= 2");
        require(base_.state_dim() <= kInterpMaxDim, "interpolation supports state dimension <= 6");
        const Box& box = base_.state_box();
        const std::size_t k = box.dim();
        auto nodes = std::make_shared<std::vector<std::vector<double>>>(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t q = 0; q < ppd_; ++q) (*nodes)[i].push_back(lattice_coordinate(box, i, q, ppd_));
        const MarkovMap base = base_;
        auto rule = [base, nodes, k](std::span<const double> s, std::span<const double> eps,
                                     std::span<const double> theta, std::span<double> out) {
            std::array<std::size_t, kMaxDim> cell{};
            std::array<double, kMaxDim> t{};
            for (std::size_t i = 0; i < k; ++i) {
                const auto& g = (*nodes)[i];
                const double x = std::clamp(s[i], g.front(), g.back());
                auto it = std::upper_bound(g.begin(), g.end(), x);
                std::size_t c = it == g.begin() ? 0 : static_cast<std::size_t>(it - g.begin()) - 1;
                c = std::min(c, g.size() - 2);
                cell[i] = c;
                t[i] = (x - g[c]) / (g[c + 1] - g[c]);
            }
            // Nested lerp, one axis at a time: exact for equal endpoints and at
            // t in {0, 1}. Axes with t == 0 reuse the lower node.
            std::size_t live = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (t[i] != 0.0) live |= std::size_t{1} << i;
            const std::size_t corners = std::size_t{1} << k;
            std::array<Scratch, std::size_t{1} << kInterpMaxDim> val;
            Scratch node{};
            for (std::size_t c = 0; c < corners; ++c) {
                if ((c & live) != c) {
                    val[c] = val[c & live];
                    continue;
                }
                for (std::size_t i = 0; i < k; ++i) node[i] = (*nodes)[i][cell[i] + ((c >> i) & 1u)];
                base.apply(std::span<const double>(node.data(), k), eps, theta, std::span<double>(val[c].data(), k));
            }
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t c = 0; c < corners; ++c)
                    if (!((c >> i) & 1u))
                        for (std::size_t d = 0; d < k; ++d)
                            val[c][d] = std::lerp(val[c][d], val[c | (std::size_t{1} << i)][d], t[i]);
            for (std::size_t d = 0; d < k; ++d) out[d] = val[0][d];
        };
        return base_.with_rule(rule, base_.name() + "-interp" + std::to_string(ppd_), base_.info().monotone);
    }

    MarkovMap base_;
    std::size_t ppd_;
    MarkovMap map_;
};

inline InterpolatedMap build_interpolant(const MarkovMap& map, std::size_t points_per_dim) {
    return InterpolatedMap(map, points_per_dim);
}

/// State points for interpolation errors: a Latin hypercube, so the sample
/// never sits on a lattice that might coincide with the interpolation nodes.
inline std::vector<Point> approx_distance_points(const Box& box, std::size_t n = 1024, std::uint64_t seed = 3) {
    return latin_hypercube(box, n, seed);
}

struct ApproxErrorRow {
    std::size_t resolution = 0;
    double d = 0.0;        ///< max over probe theta of the map distance
    double std_error = 0.0; ///< standard error at the maximizing (theta, s)
    Point worst_theta;
};

inline void require_increasing(const std::vector<std::size_t>& r) {
    require(!r.empty(), "resolution ladder is empty");
    for (std::size_t i = 0; i < r.size(); ++i) {
        require(r[i] >= 2, "resolutions must be >= 2");
        if (i) require(r[i] > r[i - 1], "resolutions must be strictly increasing");
    }
}

/// d_j = max over probe theta of map_distance(base, interpolant_j, theta).
inline std::vector<ApproxErrorRow> approx_error_curve(const MarkovMap& map, const std::vector<Point>& probes,
                                                      const std::vector<std::size_t>& resolutions,
                                                      const std::vector<Point>& s_points, std::size_t mc_draws,
                                                      std::uint64_t seed) {
    require_increasing(resolutions);
    require(!probes.empty(), "approximation study needs at least one probe theta");
    std::vector<ApproxErrorRow> rows;
    for (std::size_t j : resolutions) {
        const auto interp = build_interpolant(map, j);
        ApproxErrorRow row{j, -1.0, 0.0, probes.front()};
        for (const auto& th : probes) {
            const auto d = map_distance(map, interp.map(), th, s_points, mc_draws, seed);
            if (d.value > row.d) row.d = d.value, row.std_error = d.std_error, row.worst_theta = th;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct ApproxStudyConfig {
    std::vector<std::size_t> resolutions{9, 17, 33, 65, 129};
    std::vector<Point> probes;   ///< theta values for d_j; empty skips the error curve
    std::size_t n_state_points = 1024;
    std::size_t mc_draws = 10'000;
    std::uint64_t seed = 3;
    OracleConfig oracle;
    SearchConfig search;
};

struct ApproxStudyRow {
    std::size_t resolution = 0;
    double d = std::numeric_limits<double>::quiet_NaN();
    double d_std_error = std::numeric_limits<double>::quiet_NaN();
    Point theta;
    double error = 0.0;  ///< max-norm distance to theta0
    double spread = 0.0; ///< oracle spread across starts under phi^j at theta^j
};

struct ApproxStudy {
    Estimate theta0;
    std::vector<ApproxStudyRow> rows;
};

/// theta^j = argmin G(E^j_theta(f), fbar) for each interpolant, compared with
/// theta0 from the exact map. All oracles share one seed.
inline ApproxStudy approx_estimation_study(const MarkovMap& map, const BoundDistance& G,
                                           const std::vector<double>& fbar, const ApproxStudyConfig& cfg) {
    require_increasing(cfg.resolutions);
    ApproxStudy out;
    out.theta0 = population_solve(map, G, fbar, cfg.oracle, cfg.search);
    std::vector<ApproxErrorRow> curve;
    if (!cfg.probes.empty())
        curve = approx_error_curve(map, cfg.probes, cfg.resolutions,
                                   approx_distance_points(map.state_box(), cfg.n_state_points, cfg.seed), cfg.mc_draws,
                                   cfg.seed);
    for (std::size_t r = 0; r < cfg.resolutions.size(); ++r) {
        const auto interp = build_interpolant(map, cfg.resolutions[r]);
        const auto est = population_solve(interp.map(), G, fbar, cfg.oracle, cfg.search);
        ApproxStudyRow row;
        row.resolution = cfg.resolutions[r];
        if (!curve.empty()) row.d = curve[r].d, row.d_std_error = curve[r].std_error;
        row.theta = est.theta;
        for (std::size_t i = 0; i < est.theta.size(); ++i)
            row.error = std::max(row.error, std::abs(est.theta[i] - out.theta0.theta[i]));
        row.spread = oracle_expectation(interp.map(), est.theta, G.spec(), cfg.oracle).spread;
        out.rows.push_back(std::move(row));
    }
    return out;
}

/// `resolution,d_j,theta_j_1..l,err`.
inline csv::Table approx_table(const ApproxStudy& s) {
    csv::Table t{{"resolution", "d_j"}, {}};
    const std::size_t l = s.theta0.theta.size();
    for (std::size_t i = 0; i < l; ++i) t.header.push_back("theta_j_" + std::to_string(i + 1));
    t.header.push_back("err");
    for (const auto& r : s.rows) {
        std::vector<std::string> row{std::to_string(r.resolution), csv::num(r.d)};
        for (double v : r.theta.coords()) row.push_back(csv::num(v));
        row.push_back(csv::num(r.error));
        t.add(std::move(row));
    }
    return t;
}

} // namespace sme
