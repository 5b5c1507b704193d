#pragma once

#include <cstdint>
#include <random>

namespace mos {

/// Deterministic random source: std::mt19937_64 (whose output sequence is
/// pinned by the standard) plus hand-rolled uniform/normal transforms, so
/// streams are reproducible across standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Mixes (seed, a, b) into an independent stream seed, so per-sample
/// generators can be derived without sharing state.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

} // namespace mos
