#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "sme/csv.hpp"
#include "sme/envelopes.hpp"
#include "sme/models.hpp"
#include "sme/rng.hpp"

namespace sme {

/// The base-uniform sequence omega = {u_n}, n = 1, 2, ..., materialized lazily.
/// u_n depends only on (seed, stream_id, n); every theta reads the same u_n
/// and applies its own quantile transform (common random numbers).
class ShockStream {
public:
    ShockStream(std::uint64_t seed, std::uint64_t stream_id, std::size_t dim_e)
        : seed_(seed), stream_(stream_id), dim_(dim_e) {
        require(dim_e >= 1 && dim_e <= kMaxDim, "shock stream dimension must be in [1, 8]");
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::size_t dim() const { return dim_; }

    /// Base uniforms for step n (1-based).
    void fill(std::uint64_t n, std::span<double> u) const {
        require(n >= 1 && n <= 0xFFFFFFFFull, "shock stream index out of range");
        const Philox4x32::Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
        for (std::size_t block = 0; 2 * block < dim_; ++block) {
            const Philox4x32::Counter ctr{static_cast<std::uint32_t>(n - 1), static_cast<std::uint32_t>(block),
                                          static_cast<std::uint32_t>(stream_),
                                          static_cast<std::uint32_t>(stream_ >> 32)};
            const auto out = Philox4x32::block(ctr, key);
            u[2 * block] = to_open_unit((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
            if (2 * block + 1 < dim_) u[2 * block + 1] = to_open_unit((static_cast<std::uint64_t>(out[2]) << 32) | out[3]);
        }
    }

    double uniform(std::uint64_t n, std::size_t d) const {
        Scratch u{};
        fill(n, std::span<double>(u.data(), dim_));
        return u[d];
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::size_t dim_;
};

/// Iterates s_n = phi(s_{n-1}, eps_n, theta) for n = 1..steps, calling
/// visit(n, state, clamped) after each step. No validation, no storage.
template <class Visit>
void run_chain(const MarkovMap& map, std::span<const double> s0, const ShockStream& stream,
               std::span<const double> theta, std::uint64_t steps, Visit&& visit) {
    const std::size_t k = map.state_dim(), e = map.shock_dim();
    Scratch a{}, b{}, u{}, eps{};
    std::copy(s0.begin(), s0.end(), a.begin());
    double* cur = a.data();
    double* next = b.data();
    for (std::uint64_t n = 1; n <= steps; ++n) {
        stream.fill(n, std::span<double>(u.data(), e));
        map.shocks().transform(std::span<const double>(u.data(), e), theta, std::span<double>(eps.data(), e));
        const bool clamped = map.apply(std::span<const double>(cur, k), std::span<const double>(eps.data(), e), theta,
                                       std::span<double>(next, k));
        std::swap(cur, next);
        visit(n, std::span<const double>(cur, k), clamped);
    }
}

/// A simulated trajectory s_1..s_N (s0 kept separately), stored row-major.
struct Path {
    std::size_t dim = 0;
    Point s0;
    Point theta;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t clamp_count = 0;
    std::vector<double> states;

    std::size_t length() const { return dim == 0 ? 0 : states.size() / dim; }
    /// State n, 1-based.
    std::span<const double> state(std::size_t n) const { return {states.data() + (n - 1) * dim, dim}; }
};

inline void validate_run(const MarkovMap& map, const Point& s0, const ShockStream& stream, const Point& theta,
                         std::uint64_t steps) {
    require(steps >= 1, "N must be >= 1");
    require_same_dim(map.state_dim(), s0.size(), "initial state");
    require(map.state_box().contains(s0), "initial state outside the state box of model '" + map.name() + "'");
    map.params().require_contains(theta.view());
    require_same_dim(map.shock_dim(), stream.dim(), "shock stream");
}

inline Path simulate_path(const MarkovMap& map, const Point& s0, const ShockStream& stream, const Point& theta,
                          std::uint64_t steps) {
    validate_run(map, s0, stream, theta, steps);
    Path p;
    p.dim = map.state_dim();
    p.s0 = s0;
    p.theta = theta;
    p.seed = stream.seed();
    p.stream_id = stream.stream_id();
    p.states.reserve(steps * p.dim);
    run_chain(map, s0.view(), stream, theta.view(), steps, [&](std::uint64_t, std::span<const double> s, bool clamped) {
        p.states.insert(p.states.end(), s.begin(), s.end());
        if (clamped) ++p.clamp_count;
    });
    return p;
}

struct SandwichPaths {
    Path upper; ///< majorant at theta_center
    Path base;  ///< base map at theta
    Path lower; ///< minorant at theta_center
};

/// Simulates the majorant and minorant at theta_center and the base map at
/// theta off one stream and one s0.
inline SandwichPaths simulate_sandwich(const MarkovMap& map, double kappa, const Point& s0, const ShockStream& stream,
                                       const Point& theta, const Point& theta_center, std::uint64_t steps) {
    validate_run(map, s0, stream, theta_center, steps);
    const MarkovMap up = majorize(map, kappa).map();
    const MarkovMap lo = minorize(map, kappa).map();
    return {simulate_path(up, s0, stream, theta_center, steps), simulate_path(map, s0, stream, theta, steps),
            simulate_path(lo, s0, stream, theta_center, steps)};
}

/// Number of stored states lying on a face of the box.
inline std::uint64_t count_boundary_states(const Path& p, const Box& box) {
    std::uint64_t c = 0;
    for (std::size_t n = 1; n <= p.length(); ++n)
        if (box.on_boundary(p.state(n))) ++c;
    return c;
}

/// Header `n,s_1,...,s_k`, one row per step.
inline csv::Table path_table(const Path& p) {
    csv::Table t;
    t.header.push_back("n");
    for (std::size_t i = 0; i < p.dim; ++i) t.header.push_back("s_" + std::to_string(i + 1));
    t.rows.reserve(p.length());
    for (std::size_t n = 1; n <= p.length(); ++n) {
        std::vector<std::string> row{std::to_string(n)};
        for (double v : p.state(n)) row.push_back(csv::num(v));
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace sme
