/**
 * @file lp.hpp
 * @brief Dense two-phase primal simplex with unbounded/infeasible certificates
 *
 * Problem form:
 *
 *   minimize     c . z
 *   subject to   A_r . z  (<=, =, >=)  b_r      for every row r
 *                lower_j <= z_j <= upper_j      (either side may be infinite)
 *
 * Variables with an infinite lower bound and finite upper bound are reflected,
 * fully free variables keep one column that never blocks the ratio test,
 * and finite upper bounds become explicit rows. Every solve is a pure function
 * of its input.
 */

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace portfeas::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpProblem {
    Eigen::VectorXd objective;
    Eigen::MatrixXd constraints;
    std::vector<Relation> relations;
    Eigen::VectorXd rhs;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    /// Zero-filled problem of the given shape with bounds 0 <= z < +inf.
    static LpProblem with_shape(Eigen::Index rows, Eigen::Index cols);

    Eigen::Index num_rows() const { return constraints.rows(); }
    Eigen::Index num_cols() const { return constraints.cols(); }

    /// Mark variable j as free (-inf, +inf).
    void set_free(Eigen::Index j);
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

std::string_view to_string(LpStatus status);

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd solution;  ///< set iff Optimal
    double value = 0.0;        ///< set iff Optimal
    Eigen::VectorXd ray;       ///< set iff Unbounded: objective . ray < 0
    std::size_t iterations = 0;
};

struct SolverOptions {
    double pivot_tolerance = 1e-9;
    double feasibility_tolerance = 1e-7;
    double optimality_tolerance = 1e-7;
    /// Dantzig pricing until this many iterations per (rows + cols), then Bland.
    std::size_t bland_switch_factor = 5;
    /// Hard cap per (rows + cols); exceeding it throws NumericalError.
    std::size_t iteration_cap_factor = 50;
};

/// Classify and solve. Throws InputError on inconsistent dimensions or bounds
/// and NumericalError when the iteration cap is hit.
LpOutcome solve_lp(const LpProblem& problem, const SolverOptions& options = {});

/// Largest violation of the row constraints and bounds at z (0 when feasible).
double max_violation(const LpProblem& problem, const Eigen::VectorXd& z);

}  // namespace portfeas::lp
