#include "portfeas/analytics.hpp"

#include "portfeas/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace portfeas {

namespace {

// sum_{k=lo}^{n} C(n, k) / 2^n with integer arithmetic; n <= 63.
double exact_upper_tail(std::int64_t n, std::int64_t lo) {
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (std::int64_t r = 1; r <= n; ++r) {
        for (std::int64_t k = r; k > 0; --k) row[k] += row[k - 1];
    }
    std::uint64_t sum = 0;
    for (std::int64_t k = lo; k <= n; ++k) sum += row[static_cast<std::size_t>(k)];
    return std::ldexp(static_cast<double>(sum), -static_cast<int>(n));
}

long double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<long double>(n) + 1.0L) -
           std::lgamma(static_cast<long double>(k) + 1.0L) -
           std::lgamma(static_cast<long double>(n - k) + 1.0L);
}

// Same tail in log space: terms are scaled by the largest one in range and
// accumulated with Kahan summation in extended precision.
double log_space_upper_tail(std::int64_t n, std::int64_t lo) {
    const std::int64_t peak = std::max(lo, n / 2);
    const long double log_peak = log_choose(n, peak);
    long double sum = 0.0L;
    long double carry = 0.0L;
    for (std::int64_t k = lo; k <= n; ++k) {
        const long double rel = log_choose(n, k) - log_peak;
        if (rel < -80.0L) {
            if (k > peak) break;
            continue;
        }
        const long double y = std::exp(rel) - carry;
        const long double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    const long double log_p =
        std::log(sum) + log_peak - static_cast<long double>(n) * std::log(2.0L);
    return static_cast<double>(std::exp(log_p));
}

}  // namespace

FeasibilityProbability exact_minimax_feasibility(std::int64_t n_assets, std::int64_t n_periods) {
    if (n_assets < 1 || n_periods < 1) {
        throw InputError("asset and period counts must be positive, got N=" +
                         std::to_string(n_assets) + ", T=" + std::to_string(n_periods));
    }
    FeasibilityProbability out{n_assets, n_periods, 0.0};
    if (n_periods < n_assets) return out;
    const std::int64_t n = n_periods - 1;
    const std::int64_t lo = n_assets - 1;
    out.probability = n <= 63 ? exact_upper_tail(n, lo) : log_space_upper_tail(n, lo);
    if (out.probability > 1.0) out.probability = 1.0;
    return out;
}

double limiting_feasibility(double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw InputError("ratio must be positive and finite");
    }
    if (ratio < 0.5) return 1.0;
    if (ratio > 0.5) return 0.0;
    return 0.5;
}

}  // namespace portfeas
