/**
 * @file lp.cpp
 * @brief Two-phase dense tableau simplex
 */

#include "portfeas/lp.hpp"

#include "portfeas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace portfeas::lp {

LpProblem LpProblem::with_shape(Eigen::Index rows, Eigen::Index cols) {
    LpProblem p;
    p.objective = Eigen::VectorXd::Zero(cols);
    p.constraints = Eigen::MatrixXd::Zero(rows, cols);
    p.relations.assign(static_cast<std::size_t>(rows), Relation::LessEqual);
    p.rhs = Eigen::VectorXd::Zero(rows);
    p.lower = Eigen::VectorXd::Zero(cols);
    p.upper = Eigen::VectorXd::Constant(cols, kInfinity);
    return p;
}

void LpProblem::set_free(Eigen::Index j) {
    lower(j) = -kInfinity;
    upper(j) = kInfinity;
}

std::string_view to_string(LpStatus status) {
    switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// How an original variable is expressed through tableau columns. Free
// variables keep a single column that is never bounded in the ratio test.
enum class VarKind { Shifted, Reflected, Free };

struct VarMap {
    VarKind kind;
    Eigen::Index column;  // first tableau column
    double offset;        // lower bound (Shifted) or upper bound (Reflected)
};

void validate(const LpProblem& p) {
    const auto m = p.constraints.rows();
    const auto n = p.constraints.cols();
    if (p.objective.size() != n) {
        throw InputError("objective length " + std::to_string(p.objective.size()) +
                         " does not match " + std::to_string(n) + " columns");
    }
    if (p.rhs.size() != m || static_cast<Eigen::Index>(p.relations.size()) != m) {
        throw InputError("rhs/relations length does not match " + std::to_string(m) + " rows");
    }
    if (p.lower.size() != n || p.upper.size() != n) {
        throw InputError("bound vectors do not match " + std::to_string(n) + " columns");
    }
    if (!p.objective.allFinite() || !p.constraints.allFinite() || !p.rhs.allFinite()) {
        throw InputError("objective, constraints and rhs must be finite");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const double lo = p.lower(j);
        const double hi = p.upper(j);
        if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInfinity || hi == -kInfinity) {
            throw InputError("invalid bounds on variable " + std::to_string(j));
        }
    }
}

class Tableau {
public:
    Tableau(Eigen::Index rows, Eigen::Index cols)
        : tab_(RowMajor::Zero(rows + 1, cols + 1)),
          basis_(static_cast<std::size_t>(rows)),
          free_(static_cast<std::size_t>(cols), false),
          sign_(static_cast<std::size_t>(cols), 1.0) {}

    Eigen::Index rows() const { return tab_.rows() - 1; }
    Eigen::Index cols() const { return tab_.cols() - 1; }

    double& at(Eigen::Index r, Eigen::Index c) { return tab_(r, c); }
    double at(Eigen::Index r, Eigen::Index c) const { return tab_(r, c); }
    double& rhs(Eigen::Index r) { return tab_(r, cols()); }
    double rhs(Eigen::Index r) const { return tab_(r, cols()); }
    double& cost(Eigen::Index c) { return tab_(rows(), c); }
    double cost(Eigen::Index c) const { return tab_(rows(), c); }
    auto cost_row() { return tab_.row(rows()); }
    /// Constraint block without the cost row and rhs column.
    Eigen::MatrixXd body() const { return tab_.topLeftCorner(rows(), cols()); }
    auto row(Eigen::Index r) { return tab_.row(r); }

    Eigen::Index& basic(Eigen::Index r) { return basis_[static_cast<std::size_t>(r)]; }
    Eigen::Index basic(Eigen::Index r) const { return basis_[static_cast<std::size_t>(r)]; }

    bool is_free(Eigen::Index c) const { return free_[static_cast<std::size_t>(c)]; }
    void mark_free(Eigen::Index c) { free_[static_cast<std::size_t>(c)] = true; }
    /// +1, or -1 once a free column has been negated to enter downwards.
    double sign(Eigen::Index c) const { return sign_[static_cast<std::size_t>(c)]; }

    void negate_column(Eigen::Index c) {
        tab_.col(c) *= -1.0;
        sign_[static_cast<std::size_t>(c)] *= -1.0;
    }

    void pivot(Eigen::Index r, Eigen::Index c) {
        const double inv = 1.0 / tab_(r, c);
        tab_.row(r) *= inv;
        tab_(r, c) = 1.0;
        for (Eigen::Index i = 0; i < tab_.rows(); ++i) {
            if (i == r) continue;
            const double f = tab_(i, c);
            if (f == 0.0) continue;
            tab_.row(i).noalias() -= f * tab_.row(r);
            tab_(i, c) = 0.0;
        }
        basic(r) = c;
    }

private:
    RowMajor tab_;
    std::vector<Eigen::Index> basis_;
    std::vector<bool> free_;
    std::vector<double> sign_;
};

enum class PhaseResult { Optimal, Unbounded };

class Simplex {
public:
    Simplex(Tableau& tab, const SolverOptions& opt)
        : tab_(tab),
          opt_(opt),
          bland_after_(opt.bland_switch_factor * static_cast<std::size_t>(tab.rows() + tab.cols())),
          cap_(opt.iteration_cap_factor * static_cast<std::size_t>(tab.rows() + tab.cols())) {}

    // Runs until optimal or an unbounded column is found. Columns at or past
    // `entering_end` never enter the basis.
    PhaseResult run(Eigen::Index entering_end, Eigen::Index& unbounded_column) {
        while (true) {
            if (iterations_ >= cap_) {
                throw NumericalError("simplex iteration cap of " + std::to_string(cap_) +
                                     " exceeded");
            }
            const bool bland = iterations_ >= bland_after_;
            const Eigen::Index col = choose_entering(entering_end, bland);
            if (col < 0) return PhaseResult::Optimal;
            const Eigen::Index row = choose_leaving(col);
            if (row < 0) {
                unbounded_column = col;
                return PhaseResult::Unbounded;
            }
            tab_.pivot(row, col);
            clean_rhs();
            ++iterations_;
        }
    }

    std::size_t iterations() const { return iterations_; }

private:
    // A nonbasic free column with positive reduced cost is negated so that
    // every entering column improves the objective when increased.
    Eigen::Index choose_entering(Eigen::Index end, bool bland) {
        Eigen::Index best = -1;
        double best_score = opt_.optimality_tolerance;
        for (Eigen::Index j = 0; j < end; ++j) {
            const double d = tab_.cost(j);
            const double score = tab_.is_free(j) ? std::abs(d) : -d;
            if (score > best_score) {
                best = j;
                if (bland) break;
                best_score = score;
            }
        }
        if (best >= 0 && tab_.cost(best) > 0.0) tab_.negate_column(best);
        return best;
    }

    // Minimum-ratio row; ties go to the lowest basic variable index.
    Eigen::Index choose_leaving(Eigen::Index col) const {
        Eigen::Index best = -1;
        double best_ratio = 0.0;
        for (Eigen::Index i = 0; i < tab_.rows(); ++i) {
            const double a = tab_.at(i, col);
            if (a <= opt_.pivot_tolerance || tab_.is_free(tab_.basic(i))) continue;
            const double ratio = tab_.rhs(i) / a;
            if (best < 0) {
                best = i;
                best_ratio = ratio;
                continue;
            }
            const double tie = 1e-12 * (1.0 + std::abs(best_ratio));
            if (ratio < best_ratio - tie ||
                (ratio <= best_ratio + tie && tab_.basic(i) < tab_.basic(best))) {
                best = i;
                best_ratio = ratio;
            }
        }
        return best;
    }

    void clean_rhs() {
        for (Eigen::Index i = 0; i < tab_.rows(); ++i) {
            if (tab_.is_free(tab_.basic(i))) continue;
            double& b = tab_.rhs(i);
            if (b < 0.0 && b > -opt_.feasibility_tolerance) b = 0.0;
        }
    }

    Tableau& tab_;
    const SolverOptions& opt_;
    std::size_t bland_after_;
    std::size_t cap_;
    std::size_t iterations_ = 0;
};

}  // namespace

LpOutcome solve_lp(const LpProblem& problem, const SolverOptions& options) {
    validate(problem);
    const Eigen::Index m = problem.num_rows();
    const Eigen::Index n = problem.num_cols();

    // Variable substitution.
    std::vector<VarMap> vars;
    vars.reserve(static_cast<std::size_t>(n));
    Eigen::Index structural = 0;
    std::vector<std::pair<Eigen::Index, double>> upper_rows;  // column, width
    for (Eigen::Index j = 0; j < n; ++j) {
        const double lo = problem.lower(j);
        const double hi = problem.upper(j);
        if (std::isfinite(lo)) {
            vars.push_back({VarKind::Shifted, structural, lo});
            if (std::isfinite(hi)) upper_rows.emplace_back(structural, hi - lo);
            structural += 1;
        } else if (std::isfinite(hi)) {
            vars.push_back({VarKind::Reflected, structural, hi});
            structural += 1;
        } else {
            vars.push_back({VarKind::Free, structural, 0.0});
            structural += 1;
        }
    }

    const Eigen::Index rows = m + static_cast<Eigen::Index>(upper_rows.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, structural);
    Eigen::VectorXd b(rows);
    std::vector<Relation> rel(static_cast<std::size_t>(rows));
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(structural);

    for (Eigen::Index j = 0; j < n; ++j) {
        const VarMap& v = vars[static_cast<std::size_t>(j)];
        const double c = problem.objective(j);
        switch (v.kind) {
        case VarKind::Shifted:
            cost(v.column) = c;
            break;
        case VarKind::Reflected:
            cost(v.column) = -c;
            break;
        case VarKind::Free:
            cost(v.column) = c;
            break;
        }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        double bi = problem.rhs(i);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double aij = problem.constraints(i, j);
            if (aij == 0.0) continue;
            const VarMap& v = vars[static_cast<std::size_t>(j)];
            switch (v.kind) {
            case VarKind::Shifted:
                a(i, v.column) = aij;
                bi -= aij * v.offset;
                break;
            case VarKind::Reflected:
                a(i, v.column) = -aij;
                bi -= aij * v.offset;
                break;
            case VarKind::Free:
                a(i, v.column) = aij;
                break;
            }
        }
        b(i) = bi;
        rel[static_cast<std::size_t>(i)] = problem.relations[static_cast<std::size_t>(i)];
    }
    for (std::size_t k = 0; k < upper_rows.size(); ++k) {
        const Eigen::Index i = m + static_cast<Eigen::Index>(k);
        a(i, upper_rows[k].first) = 1.0;
        b(i) = upper_rows[k].second;
        rel[static_cast<std::size_t>(i)] = Relation::LessEqual;
    }

    // Nonnegative rhs; homogeneous >= rows flip to <= so their slack can start basic.
    for (Eigen::Index i = 0; i < rows; ++i) {
        Relation& r = rel[static_cast<std::size_t>(i)];
        const bool flip = b(i) < 0.0 || (b(i) == 0.0 && r == Relation::GreaterEqual);
        if (!flip) continue;
        a.row(i) *= -1.0;
        b(i) = b(i) == 0.0 ? 0.0 : -b(i);
        if (r == Relation::LessEqual) r = Relation::GreaterEqual;
        else if (r == Relation::GreaterEqual) r = Relation::LessEqual;
    }

    Eigen::Index slack_count = 0;
    Eigen::Index artificial_count = 0;
    for (Relation r : rel) {
        if (r != Relation::Equal) ++slack_count;
        if (r != Relation::LessEqual) ++artificial_count;
    }
    const Eigen::Index slack_start = structural;
    const Eigen::Index artificial_start = slack_start + slack_count;
    const Eigen::Index total = artificial_start + artificial_count;

    Tableau tab(rows, total);
    for (const VarMap& v : vars) {
        if (v.kind == VarKind::Free) tab.mark_free(v.column);
    }
    Eigen::Index next_slack = slack_start;
    Eigen::Index next_art = artificial_start;
    for (Eigen::Index i = 0; i < rows; ++i) {
        tab.row(i).head(structural) = a.row(i);
        tab.rhs(i) = b(i);
        switch (rel[static_cast<std::size_t>(i)]) {
        case Relation::LessEqual:
            tab.at(i, next_slack) = 1.0;
            tab.basic(i) = next_slack++;
            break;
        case Relation::GreaterEqual:
            tab.at(i, next_slack++) = -1.0;
            tab.at(i, next_art) = 1.0;
            tab.basic(i) = next_art++;
            break;
        case Relation::Equal:
            tab.at(i, next_art) = 1.0;
            tab.basic(i) = next_art++;
            break;
        }
    }

    const Eigen::MatrixXd initial = tab.body();
    Simplex simplex(tab, options);
    LpOutcome out;
    Eigen::Index entering = -1;

    if (artificial_count > 0) {
        tab.cost_row().setZero();
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (tab.basic(i) >= artificial_start) tab.cost_row() -= tab.row(i);
        }
        for (Eigen::Index j = artificial_start; j < total; ++j) tab.cost(j) = 0.0;
        simplex.run(total, entering);  // phase one is bounded below by zero
        const double infeasibility = -tab.cost(total);
        const double scale = 1.0 + (b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
        if (infeasibility > options.feasibility_tolerance * scale) {
            out.status = LpStatus::Infeasible;
            out.iterations = simplex.iterations();
            return out;
        }
        // Drive remaining artificials out; rows with no usable pivot are redundant.
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (tab.basic(i) < artificial_start) continue;
            Eigen::Index pick = -1;
            double best = options.pivot_tolerance;
            for (Eigen::Index j = 0; j < artificial_start; ++j) {
                if (std::abs(tab.at(i, j)) > best) {
                    best = std::abs(tab.at(i, j));
                    pick = j;
                }
            }
            if (pick >= 0) tab.pivot(i, pick);
        }
    }

    // Phase two. Costs follow any free column negated during phase one.
    for (Eigen::Index j = 0; j < structural; ++j) cost(j) *= tab.sign(j);
    tab.cost_row().setZero();
    tab.cost_row().head(structural) = cost.transpose();
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Eigen::Index bj = tab.basic(i);
        const double cb = bj < structural ? cost(bj) : 0.0;
        if (cb != 0.0) tab.cost_row() -= cb * tab.row(i);
    }
    const PhaseResult result = simplex.run(artificial_start, entering);
    out.iterations = simplex.iterations();

    auto to_original = [&](Eigen::VectorXd std_vec, bool homogeneous) {
        for (Eigen::Index j = 0; j < structural; ++j) std_vec(j) *= tab.sign(j);
        Eigen::VectorXd z(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const VarMap& v = vars[static_cast<std::size_t>(j)];
            const double base = homogeneous ? 0.0 : v.offset;
            switch (v.kind) {
            case VarKind::Shifted: z(j) = base + std_vec(v.column); break;
            case VarKind::Reflected: z(j) = base - std_vec(v.column); break;
            case VarKind::Free: z(j) = std_vec(v.column); break;
            }
        }
        return z;
    };

    if (result == PhaseResult::Unbounded) {
        Eigen::VectorXd dir = Eigen::VectorXd::Zero(total);
        dir(entering) = 1.0;
        for (Eigen::Index i = 0; i < rows; ++i) dir(tab.basic(i)) = -tab.at(i, entering);
        out.status = LpStatus::Unbounded;
        out.ray = to_original(dir, true);
        return out;
    }

    // Re-solve the final basis against the original rows to shed pivot drift.
    Eigen::VectorXd basic_values(rows);
    for (Eigen::Index i = 0; i < rows; ++i) basic_values(i) = tab.rhs(i);
    if (rows > 0) {
        Eigen::MatrixXd basis(rows, rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const Eigen::Index bj = tab.basic(i);
            basis.col(i) = (bj < structural ? tab.sign(bj) : 1.0) * initial.col(bj);
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
        if (lu.isInvertible()) {
            const Eigen::VectorXd refined = lu.solve(b);
            const double drift = (refined - basic_values).cwiseAbs().maxCoeff();
            if (refined.allFinite() && drift <= 1e-6 * (1.0 + basic_values.cwiseAbs().maxCoeff())) {
                basic_values = refined;
            }
        }
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(total);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Eigen::Index bj = tab.basic(i);
        x(bj) = tab.is_free(bj) ? basic_values(i) : std::max(0.0, basic_values(i));
    }
    out.status = LpStatus::Optimal;
    out.solution = to_original(x, false);
    out.value = problem.objective.dot(out.solution);
    return out;
}

double max_violation(const LpProblem& problem, const Eigen::VectorXd& z) {
    double worst = 0.0;
    const Eigen::VectorXd lhs = problem.constraints * z;
    for (Eigen::Index i = 0; i < problem.num_rows(); ++i) {
        const double gap = lhs(i) - problem.rhs(i);
        switch (problem.relations[static_cast<std::size_t>(i)]) {
        case Relation::LessEqual: worst = std::max(worst, gap); break;
        case Relation::GreaterEqual: worst = std::max(worst, -gap); break;
        case Relation::Equal: worst = std::max(worst, std::abs(gap)); break;
        }
    }
    for (Eigen::Index j = 0; j < problem.num_cols(); ++j) {
        worst = std::max(worst, problem.lower(j) - z(j));
        worst = std::max(worst, z(j) - problem.upper(j));
    }
    return worst;
}

}  // namespace portfeas::lp
