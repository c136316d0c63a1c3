/**
 * @file dominance.hpp
 * @brief Strict dominance between normalized portfolios on a sample
 *
 * u' strictly dominates v' on X when sum_i u'_i x_it >= sum_i v'_i x_it for
 * every period t, with strict inequality in at least one period. Any such pair
 * differs by a zero-sum direction d = u' - v' with nonnegative gaps X^T d, so
 * detection reduces to a bounded LP over d:
 *
 *   maximize sum_t (X^T d)_t   s.t.   X^T d >= 0,  sum_i d_i = 0,  -1 <= d_i <= 1.
 */

#pragma once

#include "portfeas/risk.hpp"
#include "portfeas/sample.hpp"

#include <Eigen/Dense>

#include <optional>

namespace portfeas {

inline constexpr double kStrictnessThreshold = 1e-7;

struct DominanceWitness {
    Portfolio dominating;
    Portfolio dominated;
    Eigen::VectorXd gaps;  ///< per-period return of dominating minus dominated
};

/// A witness exists iff some normalized pair is strictly dominating. The
/// dominated portfolio is equal-weight; the dominating one adds the LP direction.
std::optional<DominanceWitness> find_strict_dominance(const ReturnSample& sample);

/// Whether `u` dominates `v` on the sample after normalizing both. Strict
/// requires one gap above kStrictnessThreshold; ties are allowed within 1e-9.
bool dominates(const ReturnSample& sample, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
               bool strict);

}  // namespace portfeas
