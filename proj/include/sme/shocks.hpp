#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sme/error.hpp"

namespace sme {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Standard normal inverse CDF: Acklam's rational approximation (relative
/// error 1.15e-9) followed by one Halley step, giving absolute error well
/// below 1e-12 on (0, 1).
inline double normal_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    require(p > 0.0 && p < 1.0, "normal_quantile: p must lie in (0, 1)");
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

enum class ShockFamily { uniform, gaussian, truncated_gaussian };

/// One shock coordinate. `mean_theta` / `sd_theta` name parameter indices
/// whose values replace the fixed mean / sd at transform time.
struct ShockCoordinate {
    ShockFamily family = ShockFamily::gaussian;
    double mean = 0.0;
    double sd = 1.0;
    double lo = 0.0;
    double hi = 1.0;
    std::optional<std::size_t> mean_theta;
    std::optional<std::size_t> sd_theta;

    static ShockCoordinate uniform(double lo, double hi) {
        require(lo < hi, "uniform shock requires lo < hi");
        return {ShockFamily::uniform, 0.0, 1.0, lo, hi, {}, {}};
    }
    static ShockCoordinate gaussian(double mean, double sd) {
        require(sd > 0.0, "gaussian shock requires sd > 0");
        return {ShockFamily::gaussian, mean, sd, 0.0, 0.0, {}, {}};
    }
    static ShockCoordinate truncated_gaussian(double mean, double sd, double lo, double hi) {
        require(sd > 0.0, "truncated gaussian shock requires sd > 0");
        require(lo < hi, "truncated gaussian shock requires lo < hi");
        return {ShockFamily::truncated_gaussian, mean, sd, lo, hi, {}, {}};
    }
    ShockCoordinate& sd_from(std::size_t theta_index) {
        sd_theta = theta_index;
        return *this;
    }
    ShockCoordinate& mean_from(std::size_t theta_index) {
        mean_theta = theta_index;
        return *this;
    }

    /// Strictly increasing map from a base uniform u in (0,1) to the shock.
    double quantile(double u, std::span<const double> theta) const {
        const double m = mean_theta ? theta[*mean_theta] : mean;
        const double s = sd_theta ? theta[*sd_theta] : sd;
        switch (family) {
        case ShockFamily::uniform:
            return lo + (hi - lo) * u;
        case ShockFamily::gaussian:
            return m + s * normal_quantile(u);
        case ShockFamily::truncated_gaussian: {
            const double fa = normal_cdf((lo - m) / s);
            const double fb = normal_cdf((hi - m) / s);
            const double z = m + s * normal_quantile(fa + u * (fb - fa));
            return z < lo ? lo : (z > hi ? hi : z);
        }
        }
        return 0.0;
    }
};

/// The law Q of the i.i.d. shock, realized as per-coordinate quantile transforms.
class ShockSpec {
public:
    ShockSpec() = default;
    explicit ShockSpec(std::vector<ShockCoordinate> coords) : coords_(std::move(coords)) {
        require(!coords_.empty(), "shock dimension must be at least 1");
    }

    std::size_t dim() const { return coords_.size(); }
    const std::vector<ShockCoordinate>& coords() const { return coords_; }

    void transform(std::span<const double> u, std::span<const double> theta, std::span<double> eps) const {
        for (std::size_t i = 0; i < coords_.size(); ++i) eps[i] = coords_[i].quantile(u[i], theta);
    }

    /// Checks theta-linked parameters are well defined over the whole parameter box.
    void validate_links(std::span<const double> theta_lower, std::size_t theta_dim) const {
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            const auto& c = coords_[i];
            if (c.mean_theta) require(*c.mean_theta < theta_dim, "shock " + std::to_string(i) + ": mean link out of range");
            if (c.sd_theta) {
                require(*c.sd_theta < theta_dim, "shock " + std::to_string(i) + ": sd link out of range");
                require(theta_lower[*c.sd_theta] > 0.0,
                        "shock " + std::to_string(i) + ": sd-linked parameter must be bounded away from 0");
            }
        }
    }

private:
    std::vector<ShockCoordinate> coords_;
};

} // namespace sme
