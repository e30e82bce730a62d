#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sme/error.hpp"
#include "sme/shocks.hpp"
#include "sme/state_space.hpp"

namespace sme {

/// Upper bound on state and parameter dimension; hot paths use fixed stack buffers.
inline constexpr std::size_t kMaxDim = 8;
using Scratch = std::array<double, kMaxDim>;

/// Compact parameter set Theta = [lower, upper] (degenerate intervals allowed).
class ParameterBox {
public:
    ParameterBox(std::vector<double> lower, std::vector<double> upper, std::vector<std::string> names = {})
        : lower_(std::move(lower)), upper_(std::move(upper)), names_(std::move(names)) {
        require(!lower_.empty() && lower_.size() <= kMaxDim, "parameter dimension must be in [1, 8]");
        require_same_dim(lower_.size(), upper_.size(), "parameter box bounds");
        if (names_.empty())
            for (std::size_t i = 0; i < lower_.size(); ++i) names_.push_back("theta_" + std::to_string(i + 1));
        require_same_dim(lower_.size(), names_.size(), "parameter names");
        for (std::size_t i = 0; i < lower_.size(); ++i) {
            require(std::isfinite(lower_[i]) && std::isfinite(upper_[i]),
                    "parameter bound " + names_[i] + " is not finite");
            require(lower_[i] <= upper_[i], "parameter bound " + names_[i] + ": lower must be <= upper");
        }
    }

    std::size_t dim() const { return lower_.size(); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<std::string>& names() const { return names_; }

    bool contains(std::span<const double> theta) const {
        if (theta.size() != dim()) return false;
        for (std::size_t i = 0; i < dim(); ++i)
            if (!(lower_[i] <= theta[i] && theta[i] <= upper_[i])) return false;
        return true;
    }

    void require_contains(std::span<const double> theta) const {
        require_same_dim(dim(), theta.size(), "parameter vector");
        for (std::size_t i = 0; i < dim(); ++i)
            if (!(lower_[i] <= theta[i] && theta[i] <= upper_[i]))
                throw Error("parameter " + names_[i] + " = " + std::to_string(theta[i]) + " outside [" +
                            std::to_string(lower_[i]) + ", " + std::to_string(upper_[i]) + "]");
    }

    bool singleton() const { return lower_ == upper_; }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<std::string> names_;
};

/// Raw transition rule; the owning MarkovMap projects the result into S.
/// `out` never aliases `s`.
using TransitionRule =
    std::function<void(std::span<const double> s, std::span<const double> eps, std::span<const double> theta,
                       std::span<double> out)>;

/// The random dynamical system s_n = phi(s_{n-1}, eps_n, theta) on a box S.
class MarkovMap {
public:
    struct Info {
        std::string name;
        bool monotone = true;
        std::vector<std::string> coord_names;
        std::vector<double> default_theta;
        std::vector<double> default_s0;
    };

    MarkovMap(Box state_box, ShockSpec shocks, ParameterBox params, TransitionRule rule, Info info)
        : box_(std::move(state_box)), shocks_(std::move(shocks)), params_(std::move(params)), rule_(std::move(rule)),
          info_(std::move(info)) {
        require(box_.dim() <= kMaxDim, "state dimension must be <= 8");
        require(shocks_.dim() <= kMaxDim, "shock dimension must be <= 8");
        require(static_cast<bool>(rule_), "transition rule is empty");
        shocks_.validate_links(params_.lower(), params_.dim());
        if (info_.coord_names.empty())
            for (std::size_t i = 0; i < box_.dim(); ++i) info_.coord_names.push_back("s_" + std::to_string(i + 1));
        if (info_.default_theta.empty()) {
            for (std::size_t i = 0; i < params_.dim(); ++i)
                info_.default_theta.push_back(0.5 * (params_.lower()[i] + params_.upper()[i]));
        }
        if (info_.default_s0.empty()) info_.default_s0 = box_.lower();
        require_same_dim(box_.dim(), info_.coord_names.size(), "coordinate names");
        params_.require_contains(info_.default_theta);
        require(box_.contains(info_.default_s0), "default s0 outside the state box");
    }

    const Box& state_box() const { return box_; }
    const ShockSpec& shocks() const { return shocks_; }
    const ParameterBox& params() const { return params_; }
    const Info& info() const { return info_; }
    const TransitionRule& rule() const { return rule_; }
    const std::string& name() const { return info_.name; }
    std::size_t state_dim() const { return box_.dim(); }
    std::size_t shock_dim() const { return shocks_.dim(); }
    std::size_t param_dim() const { return params_.dim(); }

    /// Unchecked hot path: writes phi(s, eps, theta) into out and reports whether the projection bound.
    bool apply(std::span<const double> s, std::span<const double> eps, std::span<const double> theta,
               std::span<double> out) const {
        rule_(s, eps, theta, out);
        return box_.clamp_in_place(out);
    }

    /// Validated evaluation.
    Point eval(const Point& s, std::span<const double> eps, std::span<const double> theta) const {
        require_same_dim(box_.dim(), s.size(), "eval state");
        require_same_dim(shocks_.dim(), eps.size(), "eval shock");
        params_.require_contains(theta);
        if (!box_.contains(s)) throw Error("state outside the state box of model '" + name() + "'");
        std::vector<double> out(box_.dim());
        apply(s.view(), eps, theta, out);
        return Point(std::move(out));
    }

    MarkovMap with_rule(TransitionRule rule, std::string name, bool monotone) const {
        Info info = info_;
        info.name = std::move(name);
        info.monotone = monotone;
        return MarkovMap(box_, shocks_, params_, std::move(rule), std::move(info));
    }

private:
    Box box_;
    ShockSpec shocks_;
    ParameterBox params_;
    TransitionRule rule_;
    Info info_;
};

// ---------------------------------------------------------------------------
// Zoo

inline MarkovMap make_constant(const Box& box, const Point& value,
                               ParameterBox params = ParameterBox({0.0}, {1.0}, {"theta"})) {
    require_same_dim(box.dim(), value.size(), "constant map value");
    require(box.contains(value), "constant map value outside the box");
    std::vector<double> c = value.coords();
    auto rule = [c](std::span<const double>, std::span<const double>, std::span<const double>, std::span<double> out) {
        for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i];
    };
    return MarkovMap(box, ShockSpec({ShockCoordinate::gaussian(0.0, 1.0)}), std::move(params), rule,
                     {"constant", true, {}, {}, c});
}

/// phi(s, eps, theta) = s + eps + theta, plus 5 once that sum exceeds 2; eps ~ N(0, 0.5), theta in [-0.5, 0.5].
inline MarkovMap make_threshold_jump(const Box& box = Box({0.0}, {10.0}), std::string name = "threshold") {
    require(box.dim() == 1, "threshold map is scalar");
    auto rule = [](std::span<const double> s, std::span<const double> eps, std::span<const double> theta,
                   std::span<double> out) {
        const double sum = s[0] + eps[0] + theta[0];
        out[0] = sum <= 2.0 ? sum : sum + 5.0;
    };
    const double s0 = std::max(box.lower()[0], std::min(0.0, box.upper()[0]));
    return MarkovMap(box, ShockSpec({ShockCoordinate::gaussian(0.0, 0.5)}), ParameterBox({-0.5}, {0.5}, {"theta"}),
                     rule, {std::move(name), true, {"s"}, {0.1}, {s0}});
}

/// Threshold map on S = [0, 3]: the top face is left with positive probability,
/// so the chain is ergodic with a theta-dependent invariant law.
inline MarkovMap make_threshold_recurrent() { return make_threshold_jump(Box({0.0}, {3.0}), "threshold-recurrent"); }

/// Log capital in the stochastic growth model with full depreciation:
/// x' = ln(alpha beta) + alpha x + eps, eps ~ N(0, sigma^2), theta = (alpha, sigma), beta = 0.95.
inline MarkovMap make_log_growth() {
    constexpr double beta = 0.95;
    auto rule = [](std::span<const double> s, std::span<const double> eps, std::span<const double> theta,
                   std::span<double> out) {
        const double alpha = theta[0];
        out[0] = std::log(alpha * beta) + alpha * s[0] + eps[0];
    };
    const double x_star = std::log(0.3 * beta) / (1.0 - 0.3);
    return MarkovMap(Box({-6.0}, {2.0}), ShockSpec({ShockCoordinate::gaussian(0.0, 0.1).sd_from(1)}),
                     ParameterBox({0.1, 0.01}, {0.9, 0.5}, {"alpha", "sigma"}), rule,
                     {"log-growth", true, {"x"}, {0.3, 0.1}, {x_star}});
}

inline constexpr double kAdoptionPhi = 0.97;

/// Reduced-form technology diffusion with a constant adoption probability:
/// ln x' = phi_x ln x + eps, Z' = phi Z + x', A' = lambda (Z - A) + phi A,
/// state (ln x, Z, A), theta = (phi_x, sigma_x, lambda), phi = 0.97.
inline MarkovMap make_adoption_diffusion() {
    static const Box box({-3.0, 0.0, 0.0}, {3.0, 700.0, 700.0});
    auto rule = [](std::span<const double> s, std::span<const double> eps, std::span<const double> theta,
                   std::span<double> out) {
        const double phi_x = theta[0], lambda = theta[2];
        double lnx = phi_x * s[0] + eps[0];
        lnx = std::min(std::max(lnx, box.lower()[0]), box.upper()[0]);
        out[0] = lnx;
        out[1] = kAdoptionPhi * s[1] + std::exp(lnx);
        out[2] = lambda * (s[1] - s[2]) + kAdoptionPhi * s[2];
    };
    const double lambda = 0.1;
    const double z_star = 1.0 / (1.0 - kAdoptionPhi);
    const double a_star = lambda * z_star / (1.0 - kAdoptionPhi + lambda);
    return MarkovMap(box, ShockSpec({ShockCoordinate::gaussian(0.0, 0.1).sd_from(1)}),
                     ParameterBox({0.1, 0.01, 0.01}, {0.99, 0.5, 0.5}, {"phi_x", "sigma_x", "lambda"}), rule,
                     {"adoption", true, {"lnx", "Z", "A"}, {0.5, 0.1, lambda}, {0.0, z_star, a_star}});
}

/// s' = -s + eps on [-1, 1]: order reversing, used to exercise failing checks.
inline MarkovMap make_decreasing() {
    auto rule = [](std::span<const double> s, std::span<const double> eps, std::span<const double>,
                   std::span<double> out) { out[0] = -s[0] + eps[0]; };
    return MarkovMap(Box({-1.0}, {1.0}), ShockSpec({ShockCoordinate::gaussian(0.0, 0.3)}),
                     ParameterBox({0.0}, {0.0}, {"theta"}), rule, {"decreasing", false, {"s"}, {0.0}, {0.0}});
}

/// s' = 2 s - 0.5 + eps on [0, 1] with eps ~ N(0, 0.05): monotone, with two
/// absorbing faces and hence two invariant laws.
inline MarkovMap make_bistable() {
    auto rule = [](std::span<const double> s, std::span<const double> eps, std::span<const double>,
                   std::span<double> out) { out[0] = 2.0 * s[0] - 0.5 + eps[0]; };
    return MarkovMap(Box({0.0}, {1.0}), ShockSpec({ShockCoordinate::gaussian(0.0, 0.05)}),
                     ParameterBox({0.0}, {0.0}, {"theta"}), rule, {"bistable", true, {"s"}, {0.0}, {0.5}});
}

inline const std::vector<std::string>& zoo_ids() {
    static const std::vector<std::string> ids{"threshold", "threshold-recurrent", "log-growth", "adoption",
                                              "constant",  "decreasing",          "bistable"};
    return ids;
}

/// Models with a monotone-by-construction guarantee, the set every property check runs on.
inline const std::vector<std::string>& monotone_zoo_ids() {
    static const std::vector<std::string> ids{"threshold", "threshold-recurrent", "log-growth", "adoption"};
    return ids;
}

inline MarkovMap make_zoo_model(const std::string& id) {
    if (id == "threshold") return make_threshold_jump();
    if (id == "threshold-recurrent") return make_threshold_recurrent();
    if (id == "log-growth") return make_log_growth();
    if (id == "adoption") return make_adoption_diffusion();
    if (id == "constant") return make_constant(Box({0.0}, {1.0}), Point{0.5});
    if (id == "decreasing") return make_decreasing();
    if (id == "bistable") return make_bistable();
    std::string valid;
    for (const auto& z : zoo_ids()) valid += (valid.empty() ? "" : ", ") + z;
    throw Error("unknown model '" + id + "'; valid models: " + valid);
}

} // namespace sme
