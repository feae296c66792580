#pragma once

// Deterministic RNG helpers. We deliberately avoid std::*_distribution:
// their algorithms are implementation-defined, and benchmark outputs must be
// byte-for-byte reproducible. The transforms below are fixed.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ccd {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0,1) with 53 random bits
    double uniform01() {
        return (eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; one value per call (second value discarded for stream simplicity)
    double normal() {
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Knuth product method; fine for the lambdas used here (<= ~150)
    int poisson(double lambda) {
        double L = std::exp(-lambda), p = 1.0;
        int k = 0;
        do {
            ++k;
            p *= uniform01();
        } while (p > L);
        return k - 1;
    }

    // integer in [0, n)
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

private:
    std::mt19937_64 eng_;
};

// Stable seed mixing (splitmix64 finalizer) so that derived streams
// (seed, replication) are decorrelated and platform-independent.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// point uniform on the surface of the unit (d-1)-sphere
inline void unit_direction(Rng& rng, int d, double* out) {
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (int k = 0; k < d; ++k) {
            out[k] = rng.normal();
            norm2 += out[k] * out[k];
        }
    } while (norm2 == 0.0);
    double inv = 1.0 / std::sqrt(norm2);
    for (int k = 0; k < d; ++k) out[k] *= inv;
}

// point uniform in the ball B(0, 1): direction * U^{1/d}
inline void unit_ball_point(Rng& rng, int d, double* out) {
    unit_direction(rng, d, out);
    double r = std::pow(rng.uniform01(), 1.0 / d);
    for (int k = 0; k < d; ++k) out[k] *= r;
}

} // namespace ccd
