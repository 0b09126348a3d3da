#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace spikebasis {

/// Deterministic random source. std::mt19937_64 supplies the bit stream and
/// the distributions are implemented here, because the standard library's
/// distribution objects are not required to produce identical sequences
/// across implementations. Independent streams come from seed + stream
/// index; callers that need k streams reserve seeds seed..seed+k-1.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in {0, ..., n-1} by rejection, so the law is exact.
    int uniform_index(int n) {
        if (n <= 0) throw std::invalid_argument("Rng::uniform_index: n must be positive");
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return static_cast<int>(v % un);
    }

    /// Standard normal via the Marsaglia polar method; one spare is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// Random sign, +1 or -1 with equal probability.
    double sign() { return (gen_() & 1u) ? 1.0 : -1.0; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace spikebasis
