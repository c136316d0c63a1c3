/**
 * @file risk.hpp
 * @brief Maximal Loss (Minimax) and Expected Shortfall optimizers on a sample
 *
 * Both problems are global minimum-risk problems over normalized portfolios
 * (weights sum to one). Short positions are unrestricted unless `long_only`
 * is set. When the sample admits a zero-sum direction along which the risk
 * estimate keeps falling, the report carries that direction instead of a
 * portfolio.
 *
 * Expected Shortfall is estimated by the Rockafellar-Uryasev form
 *
 *   ES(w) = min_nu  nu + 1/((1-alpha) T) * sum_t max(loss_t(w) - nu, 0),
 *   loss_t(w) = -sum_i w_i x_it,
 *
 * which is coherent on every sample. For (1-alpha) T <= 1 it coincides with
 * the maximal loss max_t loss_t(w).
 */

#pragma once

#include "portfeas/sample.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace portfeas {

struct Portfolio {
    Eigen::VectorXd weights;
    bool normalized = false;

    /// Checks that the weights sum to one within 1e-9; throws InputError otherwise.
    static Portfolio normalized_from(Eigen::VectorXd weights);
    static Portfolio equal_weight(Eigen::Index n_assets);
};

enum class RiskStatus { Optimal, UnboundedBelow, InfeasibleInput };

std::string_view to_string(RiskStatus status);

struct OptimizationReport {
    RiskStatus status = RiskStatus::InfeasibleInput;
    Portfolio portfolio;          ///< iff Optimal
    double risk_value = 0.0;      ///< iff Optimal
    Eigen::VectorXd direction;    ///< iff UnboundedBelow; zero-sum, unit max-norm
};

struct EsParams {
    double alpha = 0.95;
    bool long_only = false;
};

/// Per-period losses -X^T w for arbitrary (not necessarily normalized) weights.
Eigen::VectorXd portfolio_losses(const ReturnSample& sample, const Eigen::VectorXd& weights);

/// max_t loss_t(w). No normalization requirement.
double maximal_loss(const ReturnSample& sample, const Eigen::VectorXd& weights);

/// Rockafellar-Uryasev ES of arbitrary weights, exact scan over the T loss values.
double expected_shortfall(const ReturnSample& sample, const Eigen::VectorXd& weights,
                          double alpha);

/// ES of a normalized portfolio; throws InputError for a non-normalized one.
double evaluate_es(const ReturnSample& sample, const Portfolio& portfolio, double alpha);

OptimizationReport optimize_minimax(const ReturnSample& sample, bool long_only = false);

OptimizationReport optimize_es(const ReturnSample& sample, const EsParams& params);

}  // namespace portfeas
