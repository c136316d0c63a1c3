#include "portfeas/dominance.hpp"

#include "portfeas/errors.hpp"
#include "portfeas/lp.hpp"

#include <cmath>

namespace portfeas {

std::optional<DominanceWitness> find_strict_dominance(const ReturnSample& sample) {
    const Eigen::Index n = sample.n_assets();
    const Eigen::Index t = sample.n_periods();
    if (n < 2) return std::nullopt;

    const Eigen::MatrixXd& x = sample.returns();
    auto problem = lp::LpProblem::with_shape(t + 1, n);
    problem.objective = -x.rowwise().sum();
    for (Eigen::Index j = 0; j < t; ++j) {
        problem.constraints.row(j) = x.col(j).transpose();
        problem.relations[static_cast<std::size_t>(j)] = lp::Relation::GreaterEqual;
    }
    problem.constraints.row(t).setOnes();
    problem.relations[static_cast<std::size_t>(t)] = lp::Relation::Equal;
    problem.lower.setConstant(-1.0);
    problem.upper.setConstant(1.0);

    const lp::LpOutcome outcome = lp::solve_lp(problem);
    if (outcome.status != lp::LpStatus::Optimal) {
        // d = 0 is always feasible and the box keeps the objective bounded.
        throw NumericalError("dominance LP reported " + std::string(lp::to_string(outcome.status)));
    }
    if (-outcome.value <= kStrictnessThreshold) return std::nullopt;

    Eigen::VectorXd d = outcome.solution;
    d.array() -= d.mean();
    Portfolio baseline = Portfolio::equal_weight(n);
    Portfolio top{baseline.weights + d, true};
    DominanceWitness witness{std::move(top), std::move(baseline), x.transpose() * d};
    return witness;
}

bool dominates(const ReturnSample& sample, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
               bool strict) {
    if (u.size() != sample.n_assets() || v.size() != sample.n_assets()) {
        throw InputError("portfolio length does not match the sample");
    }
    const double su = u.sum();
    const double sv = v.sum();
    if (std::abs(su) < 1e-15 || std::abs(sv) < 1e-15) {
        throw InputError("a portfolio with zero total weight has no normalized counterpart");
    }
    const Eigen::VectorXd gaps = sample.returns().transpose() * (u / su - v / sv);
    if (gaps.minCoeff() < -1e-9) return false;
    return !strict || gaps.maxCoeff() > kStrictnessThreshold;
}

}  // namespace portfeas
