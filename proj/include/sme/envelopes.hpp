#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sme/models.hpp"
#include "sme/rng.hpp"

namespace sme {

enum class EnvelopeSide { majorant, minorant };

/// phi^kappa(s, eps, theta) = proj_S[phi(proj_S[s + kappa e], eps, theta) + kappa e]
/// and the minorant with -kappa.
class EnvelopeMap {
public:
    EnvelopeMap(MarkovMap base, double kappa, EnvelopeSide side)
        : base_(std::move(base)), kappa_(kappa), side_(side), map_(build(base_, kappa_, side_)) {}

    const MarkovMap& base() const { return base_; }
    double kappa() const { return kappa_; }
    EnvelopeSide side() const { return side_; }
    const MarkovMap& map() const { return map_; }

private:
    static MarkovMap build(const MarkovMap& base, double kappa, EnvelopeSide side) {
        require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be a finite value >= 0");
        const double shift = side == EnvelopeSide::majorant ? kappa : -kappa;
        auto rule = [base, shift](std::span<const double> s, std::span<const double> eps,
                                  std::span<const double> theta, std::span<double> out) {
            const std::size_t k = s.size();
            Scratch moved{};
            for (std::size_t i = 0; i < k; ++i) moved[i] = s[i] + shift;
            base.state_box().clamp_in_place(std::span<double>(moved.data(), k));
            base.apply(std::span<const double>(moved.data(), k), eps, theta, out);
            for (std::size_t i = 0; i < k; ++i) out[i] += shift;
        };
        const char* tag = side == EnvelopeSide::majorant ? "majorant" : "minorant";
        return base.with_rule(rule, base.name() + "/" + tag + "(" + std::to_string(kappa) + ")",
                              base.info().monotone);
    }

    MarkovMap base_;
    double kappa_;
    EnvelopeSide side_;
    MarkovMap map_;
};

inline EnvelopeMap majorize(const MarkovMap& map, double kappa) { return {map, kappa, EnvelopeSide::majorant}; }
inline EnvelopeMap minorize(const MarkovMap& map, double kappa) { return {map, kappa, EnvelopeSide::minorant}; }

namespace detail {

inline void sample_box(UniformSource& rng, std::span<const double> lo, std::span<const double> hi,
                       std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lo[i] == hi[i] ? lo[i] : rng.uniform(lo[i], hi[i]);
}

/// Uniform state with probability 7/8, otherwise a random corner of the box.
inline void sample_state(UniformSource& rng, const Box& box, std::span<double> out) {
    if (rng.next() < 0.125) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = rng.next() < 0.5 ? box.lower()[i] : box.upper()[i];
    } else {
        sample_box(rng, box.lower(), box.upper(), out);
    }
}

inline void sample_shock(UniformSource& rng, const MarkovMap& map, std::span<const double> theta,
                         std::span<double> eps) {
    Scratch u{};
    for (std::size_t i = 0; i < eps.size(); ++i) u[i] = rng.next();
    map.shocks().transform(std::span<const double>(u.data(), eps.size()), theta, eps);
}

inline std::string vec_str(std::span<const double> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + ")";
}

} // namespace detail

struct DominanceReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst = 0.0; ///< most negative componentwise margin observed (0 if none)
    std::string witness;
    bool passed() const { return violations == 0; }
};

/// Samples (s, eps, theta) and checks majorant >= base >= minorant exactly.
inline DominanceReport check_dominance(const MarkovMap& map, double kappa, std::size_t n_samples, std::uint64_t seed) {
    const MarkovMap up = majorize(map, kappa).map();
    const MarkovMap lo = minorize(map, kappa).map();
    const std::size_t k = map.state_dim(), e = map.shock_dim(), l = map.param_dim();
    UniformSource rng(seed, 0x646f6du);
    DominanceReport rep;
    rep.samples = n_samples;
    Scratch s{}, eps{}, th{}, vu{}, vb{}, vl{};
    for (std::size_t n = 0; n < n_samples; ++n) {
        detail::sample_state(rng, map.state_box(), std::span<double>(s.data(), k));
        detail::sample_box(rng, map.params().lower(), map.params().upper(), std::span<double>(th.data(), l));
        const std::span<const double> theta(th.data(), l);
        detail::sample_shock(rng, map, theta, std::span<double>(eps.data(), e));
        const std::span<const double> sv(s.data(), k), ev(eps.data(), e);
        up.apply(sv, ev, theta, std::span<double>(vu.data(), k));
        map.apply(sv, ev, theta, std::span<double>(vb.data(), k));
        lo.apply(sv, ev, theta, std::span<double>(vl.data(), k));
        double margin = 0.0;
        for (std::size_t i = 0; i < k; ++i) margin = std::min({margin, vu[i] - vb[i], vb[i] - vl[i]});
        if (margin < 0.0) {
            if (rep.violations == 0)
                rep.witness = "s=" + detail::vec_str(sv) + " eps=" + detail::vec_str(ev) + " theta=" +
                              detail::vec_str(theta);
            ++rep.violations;
            rep.worst = std::min(rep.worst, margin);
        }
    }
    return rep;
}

struct NeighborhoodReport {
    double requested_radius = 0.0;
    std::size_t samples_per_radius = 0;
    std::vector<double> radii;                 ///< tested, descending
    std::vector<std::size_t> violations;       ///< per tested radius
    double largest_passing_radius = 0.0;       ///< 0 if none passed
    std::string witness;                       ///< first violation at the requested radius
    bool passed() const { return !violations.empty() && violations.front() == 0; }
};

/// Samples theta' in the max-norm ball of the given radius around theta
/// (intersected with Theta) and random (s, eps); checks
/// phi^kappa(s,eps,theta) >= phi(s,eps,theta') >= phi_kappa(s,eps,theta).
/// The radius is halved `halvings` times to report the largest passing one.
inline NeighborhoodReport check_parameter_neighborhood(const MarkovMap& map, const Point& theta, double kappa,
                                                       double radius, std::size_t n_samples, std::uint64_t seed,
                                                       int halvings = 6) {
    map.params().require_contains(theta.view());
    require(radius > 0.0, "neighborhood radius must be > 0");
    const MarkovMap up = majorize(map, kappa).map();
    const MarkovMap lo = minorize(map, kappa).map();
    const std::size_t k = map.state_dim(), e = map.shock_dim(), l = map.param_dim();
    NeighborhoodReport rep;
    rep.requested_radius = radius;
    rep.samples_per_radius = n_samples;
    double r = radius;
    for (int h = 0; h <= halvings; ++h, r *= 0.5) {
        UniformSource rng(seed, 0x6e6268u + static_cast<std::uint64_t>(h));
        Scratch blo{}, bhi{}, s{}, eps{}, tp{}, vu{}, vb{}, vl{};
        for (std::size_t i = 0; i < l; ++i) {
            blo[i] = std::max(map.params().lower()[i], theta[i] - r);
            bhi[i] = std::min(map.params().upper()[i], theta[i] + r);
        }
        std::size_t bad = 0;
        for (std::size_t n = 0; n < n_samples; ++n) {
            detail::sample_state(rng, map.state_box(), std::span<double>(s.data(), k));
            detail::sample_box(rng, std::span<const double>(blo.data(), l), std::span<const double>(bhi.data(), l),
                               std::span<double>(tp.data(), l));
            // The shock is drawn once per sample and shared by all three maps, using theta's transform.
            detail::sample_shock(rng, map, theta.view(), std::span<double>(eps.data(), e));
            const std::span<const double> sv(s.data(), k), ev(eps.data(), e), tpv(tp.data(), l);
            up.apply(sv, ev, theta.view(), std::span<double>(vu.data(), k));
            map.apply(sv, ev, tpv, std::span<double>(vb.data(), k));
            lo.apply(sv, ev, theta.view(), std::span<double>(vl.data(), k));
            bool ok = true;
            for (std::size_t i = 0; i < k; ++i) ok = ok && vu[i] >= vb[i] && vb[i] >= vl[i];
            if (!ok) {
                if (bad == 0 && h == 0)
                    rep.witness = "s=" + detail::vec_str(sv) + " eps=" + detail::vec_str(ev) +
                                  " theta'=" + detail::vec_str(tpv);
                ++bad;
            }
        }
        rep.radii.push_back(r);
        rep.violations.push_back(bad);
        if (bad == 0 && rep.largest_passing_radius == 0.0) rep.largest_passing_radius = r;
    }
    return rep;
}

} // namespace sme
