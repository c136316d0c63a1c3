/**
 * @file rng.hpp
 * @brief Counter-based random streams with deterministic substream derivation
 *
 * Every stream is a splitmix64 counter: the k-th output is the splitmix64
 * finalizer applied to state + k * golden_gamma. Substreams are keyed by
 *
 *   mix_seed(seed, index) = fmix64(seed ^ fmix64(index + golden_gamma))
 *
 * so the sample matrix column c of trial i always draws from
 * Stream(mix_seed(mix_seed(seed, i), c)) no matter which thread builds it.
 */

#pragma once

#include <cstdint>

namespace portfeas::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// splitmix64 output finalizer (a bijection on 64-bit words).
constexpr std::uint64_t fmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    return fmix64(seed ^ fmix64(index + kGoldenGamma));
}

class Stream {
public:
    explicit constexpr Stream(std::uint64_t key) : state_(key) {}

    constexpr std::uint64_t next_u64() {
        state_ += kGoldenGamma;
        return fmix64(state_);
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double next_open_unit();

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double next_normal();

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape must be >= 1.
    double next_gamma(double shape);

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace portfeas::rng
