#include "portfeas/risk.hpp"

#include "portfeas/errors.hpp"
#include "portfeas/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace portfeas {

Portfolio Portfolio::normalized_from(Eigen::VectorXd weights) {
    const double total = weights.sum();
    if (!weights.allFinite() || std::abs(total - 1.0) > 1e-9) {
        throw InputError("portfolio weights sum to " + std::to_string(total) + ", not 1");
    }
    return Portfolio{std::move(weights), true};
}

Portfolio Portfolio::equal_weight(Eigen::Index n_assets) {
    return Portfolio{Eigen::VectorXd::Constant(n_assets, 1.0 / static_cast<double>(n_assets)),
                     true};
}

std::string_view to_string(RiskStatus status) {
    switch (status) {
    case RiskStatus::Optimal: return "optimal";
    case RiskStatus::UnboundedBelow: return "unbounded";
    case RiskStatus::InfeasibleInput: return "infeasible";
    }
    return "unknown";
}

namespace {

void check_weights(const ReturnSample& sample, const Eigen::VectorXd& weights) {
    if (weights.size() != sample.n_assets()) {
        throw InputError("portfolio has " + std::to_string(weights.size()) +
                         " weights but the sample has " + std::to_string(sample.n_assets()) +
                         " assets");
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

// Shared epilogue: translate the LP outcome over [w, extra...] into a report.
OptimizationReport make_report(const ReturnSample& sample, const lp::LpOutcome& outcome,
                               const std::function<double(const Eigen::VectorXd&)>& risk) {
    const Eigen::Index n = sample.n_assets();
    OptimizationReport report;
    switch (outcome.status) {
    case lp::LpStatus::Optimal: {
        Eigen::VectorXd w = outcome.solution.head(n);
        if (std::abs(w.sum() - 1.0) > 1e-9) {
            throw NumericalError("optimizer returned weights summing to " +
                                 std::to_string(w.sum()));
        }
        report.status = RiskStatus::Optimal;
        report.risk_value = risk(w);
        report.portfolio = Portfolio{std::move(w), true};
        break;
    }
    case lp::LpStatus::Unbounded: {
        Eigen::VectorXd d = outcome.ray.head(n);
        d.array() -= d.mean();
        const double scale = d.cwiseAbs().maxCoeff();
        if (!(scale > 1e-12)) throw NumericalError("unbounded ray has no weight component");
        report.status = RiskStatus::UnboundedBelow;
        report.direction = d / scale;
        break;
    }
    case lp::LpStatus::Infeasible:
        report.status = RiskStatus::InfeasibleInput;
        break;
    }
    return report;
}

}  // namespace

Eigen::VectorXd portfolio_losses(const ReturnSample& sample, const Eigen::VectorXd& weights) {
    check_weights(sample, weights);
    return -(sample.returns().transpose() * weights);
}

double maximal_loss(const ReturnSample& sample, const Eigen::VectorXd& weights) {
    return portfolio_losses(sample, weights).maxCoeff();
}

double expected_shortfall(const ReturnSample& sample, const Eigen::VectorXd& weights,
                          double alpha) {
    check_alpha(alpha);
    const Eigen::VectorXd losses = portfolio_losses(sample, weights);
    std::vector<double> sorted(losses.data(), losses.data() + losses.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double tail = (1.0 - alpha) * static_cast<double>(sorted.size());

    // The objective is convex piecewise linear in nu with kinks at the losses,
    // so its minimum sits on one of them. With nu = sorted[j] only the j
    // larger losses contribute.
    double best = sorted.front();
    double prefix = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        const double nu = sorted[j];
        const double value = nu + (prefix - static_cast<double>(j) * nu) / tail;
        best = std::min(best, value);
        prefix += nu;
    }
    return best;
}

double evaluate_es(const ReturnSample& sample, const Portfolio& portfolio, double alpha) {
    if (!portfolio.normalized || std::abs(portfolio.weights.sum() - 1.0) > 1e-9) {
        throw InputError("expected shortfall is evaluated on normalized portfolios only");
    }
    return expected_shortfall(sample, portfolio.weights, alpha);
}

OptimizationReport optimize_minimax(const ReturnSample& sample, bool long_only) {
    const Eigen::Index n = sample.n_assets();
    const Eigen::Index t = sample.n_periods();
    if (sample.returns().isZero(0.0)) {
        return OptimizationReport{RiskStatus::Optimal, Portfolio::equal_weight(n), 0.0, {}};
    }

    // Variables [w_1..w_N, u]: minimize u with u + sum_i w_i x_it >= 0, sum_i w_i = 1.
    auto problem = lp::LpProblem::with_shape(t + 1, n + 1);
    problem.objective(n) = 1.0;
    for (Eigen::Index j = 0; j < t; ++j) {
        problem.constraints.row(j).head(n) = sample.returns().col(j).transpose();
        problem.constraints(j, n) = 1.0;
        problem.relations[static_cast<std::size_t>(j)] = lp::Relation::GreaterEqual;
    }
    problem.constraints.row(t).head(n).setOnes();
    problem.relations[static_cast<std::size_t>(t)] = lp::Relation::Equal;
    problem.rhs(t) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!long_only) problem.set_free(i);
    }
    problem.set_free(n);

    return make_report(sample, lp::solve_lp(problem),
                       [&](const Eigen::VectorXd& w) { return maximal_loss(sample, w); });
}

OptimizationReport optimize_es(const ReturnSample& sample, const EsParams& params) {
    check_alpha(params.alpha);
    const Eigen::Index n = sample.n_assets();
    const Eigen::Index t = sample.n_periods();
    if (sample.returns().isZero(0.0)) {
        return OptimizationReport{RiskStatus::Optimal, Portfolio::equal_weight(n), 0.0, {}};
    }

    // Variables [w_1..w_N, nu, z_1..z_T]:
    //   minimize nu + 1/((1-alpha) T) sum_t z_t
    //   z_t + nu + sum_i w_i x_it >= 0,  z_t >= 0,  sum_i w_i = 1.
    const double tail_weight = 1.0 / ((1.0 - params.alpha) * static_cast<double>(t));
    auto problem = lp::LpProblem::with_shape(t + 1, n + 1 + t);
    problem.objective(n) = 1.0;
    problem.objective.tail(t).setConstant(tail_weight);
    for (Eigen::Index j = 0; j < t; ++j) {
        problem.constraints.row(j).head(n) = sample.returns().col(j).transpose();
        problem.constraints(j, n) = 1.0;
        problem.constraints(j, n + 1 + j) = 1.0;
        problem.relations[static_cast<std::size_t>(j)] = lp::Relation::GreaterEqual;
    }
    problem.constraints.row(t).head(n).setOnes();
    problem.relations[static_cast<std::size_t>(t)] = lp::Relation::Equal;
    problem.rhs(t) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!params.long_only) problem.set_free(i);
    }
    problem.set_free(n);

    return make_report(sample, lp::solve_lp(problem), [&](const Eigen::VectorXd& w) {
        return expected_shortfall(sample, w, params.alpha);
    });
}

}  // namespace portfeas
