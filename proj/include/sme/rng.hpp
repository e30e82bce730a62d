#pragma once

#include <array>
#include <cstdint>

namespace sme {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output is a pure function of (key, counter); distinct counters never
/// overlap, which gives stream splitting for free.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Maps 64 random bits to a double strictly inside (0, 1).
inline double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// SplitMix64 finalizer; used to derive child seeds from (seed, tag) pairs.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) { return mix64(seed ^ mix64(tag)); }

/// Sequential uniform source over a Philox stream, for auxiliary sampling
/// (random test points, bootstrap draws) rather than model shocks.
class UniformSource {
public:
    UniformSource(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    double next() {
        if (have_ == 0) refill();
        return buf_[--have_];
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
    std::uint64_t below(std::uint64_t n) {
        auto r = static_cast<std::uint64_t>(next() * static_cast<double>(n));
        return r < n ? r : n - 1;
    }

private:
    void refill() {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        const Philox4x32::Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
        const auto out = Philox4x32::block(ctr, key);
        buf_[1] = to_open_unit((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
        buf_[0] = to_open_unit((static_cast<std::uint64_t>(out[2]) << 32) | out[3]);
        have_ = 2;
        ++counter_;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<double, 2> buf_{};
    int have_ = 0;
};

} // namespace sme
