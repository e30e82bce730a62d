#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sme/envelopes.hpp"
#include "sme/moments.hpp"
#include "sme/simulate.hpp"

namespace sme {

struct MonotoneReport {
    std::size_t pairs = 0;
    std::size_t violations = 0;
    double worst = 0.0; ///< most negative componentwise gap phi(s) - phi(s')
    std::string witness;
    bool passed() const { return violations == 0; }
};

/// Samples ordered pairs s >= s' (s = proj(s' + nonnegative vector)) with a
/// shared random (eps, theta) and checks phi(s) >= phi(s').
inline MonotoneReport check_monotone(const MarkovMap& map, std::size_t n_pairs, std::uint64_t seed) {
    require(n_pairs >= 1, "check_monotone needs n_pairs >= 1");
    const std::size_t k = map.state_dim(), e = map.shock_dim(), l = map.param_dim();
    const Box& box = map.state_box();
    UniformSource rng(seed, 0x6d6f6eu);
    MonotoneReport rep;
    rep.pairs = n_pairs;
    Scratch lo{}, hi{}, eps{}, th{}, vlo{}, vhi{};
    for (std::size_t n = 0; n < n_pairs; ++n) {
        detail::sample_state(rng, box, std::span<double>(lo.data(), k));
        for (std::size_t i = 0; i < k; ++i)
            hi[i] = lo[i] + rng.next() * rng.next() * (box.upper()[i] - box.lower()[i]);
        box.clamp_in_place(std::span<double>(hi.data(), k));
        detail::sample_box(rng, map.params().lower(), map.params().upper(), std::span<double>(th.data(), l));
        const std::span<const double> theta(th.data(), l);
        detail::sample_shock(rng, map, theta, std::span<double>(eps.data(), e));
        const std::span<const double> ev(eps.data(), e);
        map.apply(std::span<const double>(lo.data(), k), ev, theta, std::span<double>(vlo.data(), k));
        map.apply(std::span<const double>(hi.data(), k), ev, theta, std::span<double>(vhi.data(), k));
        double gap = 0.0;
        for (std::size_t i = 0; i < k; ++i) gap = std::min(gap, vhi[i] - vlo[i]);
        if (gap < 0.0) {
            if (rep.violations == 0)
                rep.witness = "s=" + detail::vec_str(std::span<const double>(hi.data(), k)) +
                              " >= s'=" + detail::vec_str(std::span<const double>(lo.data(), k)) +
                              " eps=" + detail::vec_str(ev) + " theta=" + detail::vec_str(theta) +
                              " but phi(s)=" + detail::vec_str(std::span<const double>(vhi.data(), k)) +
                              " phi(s')=" + detail::vec_str(std::span<const double>(vlo.data(), k));
            ++rep.violations;
            rep.worst = std::min(rep.worst, gap);
        }
    }
    return rep;
}

struct CouplingReport {
    std::size_t pairs = 0;
    std::uint64_t steps = 0;
    std::size_t violating_pairs = 0;
    std::uint64_t violations = 0; ///< (pair, n) with s_n(s0) >= s_n(s0') failing
    std::string witness;
    bool passed() const { return violations == 0; }
};

/// For n_pairs ordered starts s0 >= s0' at a random theta, runs both chains
/// off one stream per pair and checks the order at every step n <= steps.
inline CouplingReport check_coupling(const MarkovMap& map, std::size_t n_pairs, std::uint64_t steps,
                                     std::uint64_t seed) {
    require(n_pairs >= 1 && steps >= 1, "check_coupling needs n_pairs >= 1 and steps >= 1");
    const std::size_t k = map.state_dim(), l = map.param_dim();
    const Box& box = map.state_box();
    UniformSource rng(seed, 0x636f75u);
    CouplingReport rep;
    rep.pairs = n_pairs;
    rep.steps = steps;
    std::vector<double> lo(k), hi(k), th(l);
    for (std::size_t p = 0; p < n_pairs; ++p) {
        detail::sample_state(rng, box, lo);
        for (std::size_t i = 0; i < k; ++i) hi[i] = lo[i] + rng.next() * rng.next() * (box.upper()[i] - box.lower()[i]);
        box.clamp_in_place(hi);
        detail::sample_box(rng, map.params().lower(), map.params().upper(), th);
        const ShockStream stream(seed, 1000 + p, map.shock_dim());
        const Point theta(th);
        const auto a = simulate_path(map, Point(hi), stream, theta, steps);
        const auto b = simulate_path(map, Point(lo), stream, theta, steps);
        std::uint64_t bad = 0;
        for (std::uint64_t n = 1; n <= steps; ++n) {
            if (leq(b.state(n), a.state(n))) continue;
            if (rep.violations + bad == 0)
                rep.witness = "pair " + std::to_string(p) + " n=" + std::to_string(n) + " s0=" + detail::vec_str(hi) +
                              " s0'=" + detail::vec_str(lo) + " theta=" + detail::vec_str(th);
            ++bad;
        }
        rep.violations += bad;
        if (bad) ++rep.violating_pairs;
    }
    return rep;
}

struct FellerReport {
    std::vector<double> steps;                   ///< h_j = 2^-j
    std::vector<std::vector<double>> gaps;       ///< per direction, g_j
    std::vector<Point> directions;
    double tolerance = 0.0;
    /// Largest final-step gap over directions.
    double final_gap() const {
        double g = 0.0;
        for (const auto& d : gaps) g = std::max(g, d.back());
        return g;
    }
    bool decays() const {
        for (const auto& d : gaps)
            if (!(d.back() <= tolerance && d.back() <= d.front())) return false;
        return true;
    }
};

/// g_j = max_p |mean_eps f_p(phi(s + h_j d)) - mean_eps f_p(phi(s))| with one shared eps sample.
inline FellerReport check_feller(const MarkovMap& map, const MomentSpec& f, const Point& theta, const Point& s,
                                 std::size_t n_dirs, std::size_t mc_draws, std::uint64_t seed, int levels = 12,
                                 double tolerance = 1e-2) {
    require(map.state_box().contains(s), "feller check point outside the state box");
    map.params().require_contains(theta.view());
    f.validate(map.state_box());
    require(n_dirs >= 1 && mc_draws >= 1 && levels >= 1, "feller check needs positive sizes");
    const std::size_t k = map.state_dim(), e = map.shock_dim(), p = f.size();
    const ShockStream stream(seed, 11, e);
    std::vector<double> eps(mc_draws * e);
    Scratch u{};
    for (std::size_t m = 0; m < mc_draws; ++m) {
        stream.fill(m + 1, std::span<double>(u.data(), e));
        map.shocks().transform(std::span<const double>(u.data(), e), theta.view(),
                               std::span<double>(eps.data() + m * e, e));
    }
    auto expect = [&](std::span<const double> x) {
        std::vector<double> mean(p, 0.0), fx(p);
        Scratch out{};
        for (std::size_t m = 0; m < mc_draws; ++m) {
            map.apply(x, std::span<const double>(eps.data() + m * e, e), theta.view(), std::span<double>(out.data(), k));
            f.eval(std::span<const double>(out.data(), k), fx);
            for (std::size_t j = 0; j < p; ++j) mean[j] += fx[j];
        }
        for (double& v : mean) v /= static_cast<double>(mc_draws);
        return mean;
    };
    FellerReport rep;
    rep.tolerance = tolerance;
    for (int j = 1; j <= levels; ++j) rep.steps.push_back(std::ldexp(1.0, -j));
    const auto base = expect(s.view());
    UniformSource rng(seed, 0x66656cu);
    for (std::size_t d = 0; d < n_dirs; ++d) {
        std::vector<double> dir(k);
        double norm = 0.0;
        for (auto& x : dir) {
            x = normal_quantile(rng.next());
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (auto& x : dir) x /= norm;
        std::vector<double> g;
        for (double h : rep.steps) {
            std::vector<double> x(k);
            for (std::size_t i = 0; i < k; ++i) x[i] = s[i] + h * dir[i];
            map.state_box().clamp_in_place(x);
            const auto moved = expect(x);
            double gap = 0.0;
            for (std::size_t j = 0; j < p; ++j) gap = std::max(gap, std::abs(moved[j] - base[j]));
            g.push_back(gap);
        }
        rep.directions.emplace_back(std::move(dir));
        rep.gaps.push_back(std::move(g));
    }
    return rep;
}

} // namespace sme
