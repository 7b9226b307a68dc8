#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace maxsum {

/// splitmix64 step; used both as a seed scrambler and for stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Child-seed derivation rule: child(root, k) = splitmix64 applied to
/// root after k+1 increments. Replicate k of a run always sees the same
/// stream regardless of scheduling, which is what makes parallel cells
/// reproducible.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t s = root;
    std::uint64_t z = 0;
    // two rounds so that nearby indices decorrelate
    s += index * 0xD1342543DE82EF95ULL;
    z = splitmix64(s);
    z ^= splitmix64(s);
    return z;
}

/// Randomness source. All sampling in this project goes through the
/// helpers below (inverse transforms on 53-bit uniforms) rather than
/// std:: distributions, so that a seed pins the byte stream.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed), state_seed_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe to take logs of.
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate = 1.0) {
        return -std::log(uniform_pos()) / rate;
    }

    /// Standard normal, Box-Muller. One value per call, no caching, so the
    /// consumed stream length is a pure function of the call sequence.
    double normal() {
        double u1 = uniform_pos();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    /// Pareto with P{X > x} = (x/x_min)^(-alpha) for x >= x_min.
    double pareto(double alpha, double x_min = 1.0) {
        return x_min * std::pow(uniform_pos(), -1.0 / alpha);
    }

    std::uint64_t poisson(double mean) {
        // inversion for small means, normal-ish rejection not needed at our scales;
        // for larger means fall back to summing exponentials.
        if (mean <= 0.0) return 0;
        if (mean < 64.0) {
            double l = std::exp(-mean);
            double p = 1.0;
            std::uint64_t k = 0;
            do {
                ++k;
                p *= uniform();
            } while (p > l);
            return k - 1;
        }
        std::uint64_t count = 0;
        double acc = exponential();
        while (acc <= mean) {
            ++count;
            acc += exponential();
        }
        return count;
    }

    RngStream child(std::uint64_t index) {
        return RngStream(derive_seed(state_seed_, index));
    }

    static RngStream from_root(std::uint64_t root, std::uint64_t index) {
        return RngStream(derive_seed(root, index));
    }

  private:
    std::mt19937_64 engine_;
    std::uint64_t state_seed_ = 0;
};

} // namespace maxsum
