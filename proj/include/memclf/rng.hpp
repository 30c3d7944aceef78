#pragma once

#include <cmath>
#include <cstdint>

namespace memclf {

// SplitMix64. Small state, splittable via derive(), and the output sequence
// is fully pinned by this file, so serialized artifacts stay stable across
// platforms and standard-library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), unbiased via rejection. n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    int next_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Box-Muller, cosine branch only; consumes exactly two uniforms per call.
    double next_normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Knuth inversion below mean 10, Hormann's PTRS transformed rejection above.
    long next_poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        if (mean < 10.0) {
            double limit = std::exp(-mean);
            double p = 1.0;
            long k = -1;
            do {
                ++k;
                p *= next_double();
            } while (p > limit);
            return k;
        }
        double b = 0.931 + 2.53 * std::sqrt(mean);
        double a = -0.059 + 0.02483 * b;
        double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = next_double() - 0.5;
            double v = next_double();
            double us = 0.5 - std::abs(u);
            long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
            if (us >= 0.07 && v <= v_r) return k;
            if (k < 0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0))
                return k;
        }
    }

private:
    std::uint64_t state_;
};

// Hash-derive an independent stream id from a parent seed. Chain calls for
// deeper paths: derive(derive(seed, class_idx), item_idx).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed + 0x9e3779b97f4a7c15ull) ^
                 mix64(stream + 0xd1b54a32d192ed03ull));
}

}  // namespace memclf
