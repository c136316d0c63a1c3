/**
 * @file lp_generators.hpp
 * @brief Random LP families with known classification
 */

#pragma once

#include "oracles.hpp"

namespace portfeas::testing {

inline lp::Relation random_relation(Rng& rng) {
    const double u = uniform(rng, 0.0, 1.0);
    if (u < 0.7) return lp::Relation::LessEqual;
    if (u < 0.9) return lp::Relation::GreaterEqual;
    return lp::Relation::Equal;
}

/// Box-bounded LP with up to 4 variables and 6 rows. Usually feasible; the
/// occasional tightened row can make it infeasible.
inline lp::LpProblem random_bounded_lp(Rng& rng) {
    const auto n = static_cast<Eigen::Index>(std::uniform_int_distribution<int>(1, 4)(rng));
    const auto m = static_cast<Eigen::Index>(std::uniform_int_distribution<int>(1, 6)(rng));
    auto p = lp::LpProblem::with_shape(m, n);
    Eigen::VectorXd inside(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        p.lower(j) = uniform(rng, -2.0, 0.0);
        p.upper(j) = p.lower(j) + uniform(rng, 0.5, 3.0);
        inside(j) = uniform(rng, p.lower(j), p.upper(j));
        p.objective(j) = uniform(rng, -1.0, 1.0);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) p.constraints(i, j) = uniform(rng, -1.0, 1.0);
        const double at = p.constraints.row(i).dot(inside);
        const lp::Relation r = random_relation(rng);
        p.relations[static_cast<std::size_t>(i)] = r;
        const double slack = uniform(rng, -0.15, 1.0);
        switch (r) {
        case lp::Relation::LessEqual: p.rhs(i) = at + slack; break;
        case lp::Relation::GreaterEqual: p.rhs(i) = at - slack; break;
        case lp::Relation::Equal: p.rhs(i) = at; break;
        }
    }
    return p;
}

/// Feasible LP with a known recession direction `ray` along which the
/// objective strictly decreases.
inline lp::LpProblem random_unbounded_lp(Rng& rng) {
    const auto n = static_cast<Eigen::Index>(std::uniform_int_distribution<int>(2, 5)(rng));
    const auto m = static_cast<Eigen::Index>(std::uniform_int_distribution<int>(1, 5)(rng));
    auto p = lp::LpProblem::with_shape(m, n);
    Eigen::VectorXd ray(n);
    Eigen::VectorXd start(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (uniform(rng, 0.0, 1.0) < 0.25) {
            p.set_free(j);
            ray(j) = uniform(rng, -1.0, 1.0);
        } else {
            ray(j) = uniform(rng, 0.0, 1.0);
        }
        start(j) = uniform(rng, 0.0, 2.0);
    }
    const double rr = ray.squaredNorm();
    for (Eigen::Index i = 0; i < m; ++i) {
        Eigen::VectorXd a(n);
        for (Eigen::Index j = 0; j < n; ++j) a(j) = uniform(rng, -1.0, 1.0);
        const lp::Relation r = random_relation(rng);
        double target = 0.0;
        if (r == lp::Relation::LessEqual) target = -uniform(rng, 0.0, 0.5);
        if (r == lp::Relation::GreaterEqual) target = uniform(rng, 0.0, 0.5);
        a += (target - a.dot(ray)) / rr * ray;
        p.constraints.row(i) = a.transpose();
        p.relations[static_cast<std::size_t>(i)] = r;
        const double at = a.dot(start);
        p.rhs(i) = r == lp::Relation::LessEqual      ? at + uniform(rng, 0.0, 1.0)
                   : r == lp::Relation::GreaterEqual ? at - uniform(rng, 0.0, 1.0)
                                                     : at;
    }
    Eigen::VectorXd c(n);
    for (Eigen::Index j = 0; j < n; ++j) c(j) = uniform(rng, -1.0, 1.0);
    c += (-uniform(rng, 0.1, 1.0) - c.dot(ray)) / rr * ray;
    p.objective = c;
    return p;
}

/// LP whose constraints contradict each other or the box.
inline lp::LpProblem random_infeasible_lp(Rng& rng) {
    lp::LpProblem p = random_bounded_lp(rng);
    const Eigen::Index n = p.num_cols();
    const Eigen::Index m = p.num_rows();
    const bool against_box = uniform(rng, 0.0, 1.0) < 0.5;
    p.constraints.conservativeResize(m + 2, n);
    p.rhs.conservativeResize(m + 2);
    p.relations.resize(static_cast<std::size_t>(m + 2));
    if (against_box) {
        // sum z >= sum upper + gap, which the box forbids.
        p.constraints.row(m).setOnes();
        p.rhs(m) = p.upper.sum() + uniform(rng, 0.1, 1.0);
        p.relations[static_cast<std::size_t>(m)] = lp::Relation::GreaterEqual;
        p.constraints.row(m + 1).setZero();
        p.rhs(m + 1) = 1.0;
        p.relations[static_cast<std::size_t>(m + 1)] = lp::Relation::LessEqual;
    } else {
        Eigen::VectorXd a(n);
        for (Eigen::Index j = 0; j < n; ++j) a(j) = uniform(rng, -1.0, 1.0);
        const double b = uniform(rng, -1.0, 1.0);
        p.constraints.row(m) = a.transpose();
        p.rhs(m) = b;
        p.relations[static_cast<std::size_t>(m)] = lp::Relation::LessEqual;
        p.constraints.row(m + 1) = a.transpose();
        p.rhs(m + 1) = b + uniform(rng, 0.1, 1.0);
        p.relations[static_cast<std::size_t>(m + 1)] = lp::Relation::GreaterEqual;
    }
    return p;
}

/// Homogeneous check of a ray against the problem's relations and bounds.
inline bool ray_is_recession_direction(const lp::LpProblem& p, const Eigen::VectorXd& ray,
                                       double tol = 1e-7) {
    const Eigen::VectorXd ar = p.constraints * ray;
    const double scale = 1.0 + ray.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < p.num_rows(); ++i) {
        switch (p.relations[static_cast<std::size_t>(i)]) {
        case lp::Relation::LessEqual:
            if (ar(i) > tol * scale) return false;
            break;
        case lp::Relation::GreaterEqual:
            if (ar(i) < -tol * scale) return false;
            break;
        case lp::Relation::Equal:
            if (std::abs(ar(i)) > tol * scale) return false;
            break;
        }
    }
    for (Eigen::Index j = 0; j < p.num_cols(); ++j) {
        if (std::isfinite(p.lower(j)) && ray(j) < -tol * scale) return false;
        if (std::isfinite(p.upper(j)) && ray(j) > tol * scale) return false;
    }
    return p.objective.dot(ray) < 0.0;
}

}  // namespace portfeas::testing
