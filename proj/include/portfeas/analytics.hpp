/**
 * @file analytics.hpp
 * @brief Closed-form Minimax feasibility probability for elliptical returns
 *
 *   p(N, T) = step(T - N) * 2^-(T-1) * sum_{k=N-1}^{T-1} C(T-1, k)
 *
 * with step(x) = 1 for x >= 0 and 0 for x < 0. This is the upper tail
 * P[B >= N-1] of a Binomial(T-1, 1/2) variable.
 */

#pragma once

#include <cstdint>

namespace portfeas {

struct FeasibilityProbability {
    std::int64_t n_assets = 0;
    std::int64_t n_periods = 0;
    double probability = 0.0;
};

/// Exact (correctly rounded) for T <= 64; log-space compensated summation beyond.
FeasibilityProbability exact_minimax_feasibility(std::int64_t n_assets, std::int64_t n_periods);

/// Large N, T limit at fixed N/T: 1 below 1/2, 0 above, 1/2 at the midpoint.
double limiting_feasibility(double ratio);

}  // namespace portfeas
