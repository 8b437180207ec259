#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sosp {

/// Comparison tolerance for angles, capacities and setup gaps.
inline constexpr double kEps = 1e-9;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON syntax, missing/mistyped fields).
struct ParseError : Error {
    using Error::Error;
};

/// Well-formed data that breaks a model invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// Bad call-site arguments (orbit mismatch, empty range list, ...).
struct ArgumentError : Error {
    using Error::Error;
};

/// Exact solver ran out of its node budget or the instance is over limits.
struct BudgetError : Error {
    using Error::Error;
};

// Deterministic RNG wrapper. All randomness in the library flows through
// this class so that runs are reproducible bit-for-bit across platforms;
// std::uniform_real_distribution et al. are implementation-defined and
// must not be used on the hot paths.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 bits of entropy.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi], inclusive. Rejection-sampled, unbiased.
    long long uniform_int(long long lo, long long hi) {
        if (lo > hi) throw ArgumentError("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<long long>(engine_());  // full 64-bit range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return lo + static_cast<long long>(draw % span);
    }

    /// Knuth's product-of-uniforms Poisson sampler. Fine for small means.
    int poisson(double mean) {
        const double threshold = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > threshold);
        return k - 1;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace sosp
