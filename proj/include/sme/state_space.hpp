#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "sme/error.hpp"

namespace sme {

/// A finite vector of reals. Non-finite coordinates are rejected.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) { validate(); }
    Point(std::initializer_list<double> coords) : coords_(coords) { validate(); }

    static Point filled(std::size_t k, double value) { return Point(std::vector<double>(k, value)); }

    std::size_t size() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> view() const { return coords_; }
    const std::vector<double>& coords() const { return coords_; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    void validate() const {
        for (std::size_t i = 0; i < coords_.size(); ++i)
            require(std::isfinite(coords_[i]), "point coordinate " + std::to_string(i) + " is not finite");
    }

    std::vector<double> coords_;
};

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw Error(std::string("dimension mismatch in ") + what + ": " + std::to_string(a) + " vs " +
                    std::to_string(b));
}

/// Componentwise x <= y.
inline bool leq(std::span<const double> x, std::span<const double> y) {
    require_same_dim(x.size(), y.size(), "leq");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] <= y[i])) return false;
    return true;
}

inline bool leq(const Point& x, const Point& y) { return leq(x.view(), y.view()); }

/// Hyper-rectangle S = {s : lower_i <= s_i <= upper_i} with lower_i < upper_i.
class Box {
public:
    Box(std::vector<double> lower, std::vector<double> upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
        require(!lower_.empty(), "box dimension must be at least 1");
        require_same_dim(lower_.size(), upper_.size(), "box bounds");
        for (std::size_t i = 0; i < lower_.size(); ++i) {
            require(std::isfinite(lower_[i]) && std::isfinite(upper_[i]),
                    "box bound " + std::to_string(i) + " is not finite");
            require(lower_[i] < upper_[i], "box bound " + std::to_string(i) + ": lower must be < upper");
        }
    }

    std::size_t dim() const { return lower_.size(); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    Point lower_corner() const { return Point(lower_); }
    Point upper_corner() const { return Point(upper_); }

    bool contains(std::span<const double> x) const {
        require_same_dim(dim(), x.size(), "box membership");
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!(lower_[i] <= x[i] && x[i] <= upper_[i])) return false;
        return true;
    }
    bool contains(const Point& x) const { return contains(x.view()); }

    /// Clamps in place; returns true if any coordinate moved. No dimension check.
    bool clamp_in_place(std::span<double> x) const {
        bool moved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < lower_[i]) {
                x[i] = lower_[i];
                moved = true;
            } else if (x[i] > upper_[i]) {
                x[i] = upper_[i];
                moved = true;
            }
        }
        return moved;
    }

    /// True if some coordinate sits exactly on a face.
    bool on_boundary(std::span<const double> x) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] == lower_[i] || x[i] == upper_[i]) return true;
        return false;
    }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Minimum-Euclidean-distance projection onto the box, i.e. the componentwise clamp.
inline Point project(const Box& box, const Point& x) {
    require_same_dim(box.dim(), x.size(), "project");
    std::vector<double> c = x.coords();
    box.clamp_in_place(c);
    return Point(std::move(c));
}

inline constexpr std::size_t kDefaultLatticeCap = 1u << 22;

/// Equispaced lattice with `points_per_dim` points per axis (corners included),
/// lexicographic order with the first coordinate varying slowest.
/// Coordinate q of points_per_dim equispaced values on axis i, with exact endpoints.
inline double lattice_coordinate(const Box& box, std::size_t i, std::size_t q, std::size_t points_per_dim) {
    if (q == 0) return box.lower()[i];
    if (q + 1 == points_per_dim) return box.upper()[i];
    return box.lower()[i] +
           (box.upper()[i] - box.lower()[i]) * (static_cast<double>(q) / static_cast<double>(points_per_dim - 1));
}

inline std::vector<Point> lattice_grid(const Box& box, std::size_t points_per_dim,
                                       std::size_t cap = kDefaultLatticeCap) {
    require(points_per_dim >= 2, "lattice points_per_dim must be >= 2");
    const std::size_t k = box.dim();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (total > cap / points_per_dim)
            throw Error("lattice point count " + std::to_string(points_per_dim) + "^" + std::to_string(k) +
                        " exceeds cap " + std::to_string(cap));
        total *= points_per_dim;
    }
    std::vector<Point> out;
    out.reserve(total);
    std::vector<std::size_t> idx(k, 0);
    std::vector<double> c(k);
    for (std::size_t n = 0; n < total; ++n) {
        for (std::size_t i = 0; i < k; ++i) c[i] = lattice_coordinate(box, i, idx[i], points_per_dim);
        out.emplace_back(c);
        for (std::size_t i = k; i-- > 0;) {
            if (++idx[i] < points_per_dim) break;
            idx[i] = 0;
        }
    }
    return out;
}

} // namespace sme
