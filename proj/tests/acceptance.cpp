// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "lp_generators.hpp"
#include "oracles.hpp"
#include "portfeas/analytics.hpp"
#include "portfeas/dominance.hpp"
#include "portfeas/experiments.hpp"
#include "portfeas/risk.hpp"
#include "portfeas/rng.hpp"
#include "portfeas/sample.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace portfeas;
using testing::Rng;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string format(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

Eigen::Index uniform_index(Rng& rng, Eigen::Index lo, Eigen::Index hi) {
    return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng);
}

Eigen::VectorXd random_normalized(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = testing::uniform(rng, -1.0, 2.0);
    w.array() += (1.0 - w.sum()) / static_cast<double>(n);
    return w;
}

Verdict exact_values() {
    struct Case {
        long n, t;
        double expected;
    };
    const Case cases[] = {{10, 5, 0.0},
                          {2, 2, 0.5},
                          {1, 10, 1.0},
                          {5, 20, (524288.0 - 1160.0) / 524288.0}};
    double worst = 0.0;
    for (const auto& c : cases) {
        worst = std::max(worst, std::abs(exact_minimax_feasibility(c.n, c.t).probability - c.expected));
    }
    return {worst <= 1e-12, format("max |error| = %.3g", worst)};
}

Verdict monte_carlo_vs_exact() {
    const std::pair<long, long> cells[] = {{2, 4}, {5, 20}, {10, 25}, {20, 50}};
    bool pass = true;
    std::string detail;
    for (auto [n, t] : cells) {
        const auto est = estimate_feasibility(Measure::minimax(), n, t,
                                              DistributionSpec::iid_gaussian(), 10000, 20240 + n, 0);
        const double p = exact_minimax_feasibility(n, t).probability;
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(est.trials));
        const double z = sigma > 0.0 ? std::abs(est.fraction - p) / sigma : 0.0;
        const bool ok = std::abs(est.fraction - p) <= 3.0 * sigma && est.anomalies == 0;
        pass = pass && ok;
        detail += format("(%ld,%ld) %.4f vs %.4f z=%.2f anomalies=%lld; ", n, t, est.fraction, p, z,
                         static_cast<long long>(est.anomalies));
    }
    return {pass, detail};
}

struct DominanceRun {
    int samples = 0;
    int agree = 0;
    std::vector<ReturnSample> positives;
};

DominanceRun run_dominance_oracle() {
    DominanceRun run;
    Rng rng(31337);
    const auto spec = DistributionSpec::iid_gaussian();
    for (std::uint64_t i = 0; i < 1200; ++i) {
        const long n = static_cast<long>(uniform_index(rng, 2, 10));
        const long t = static_cast<long>(uniform_index(rng, 2, 20));
        const ReturnSample s = generate_sample(spec, n, t, rng::mix_seed(77, i));
        const bool witness = find_strict_dominance(s).has_value();
        const bool unbounded = optimize_minimax(s).status == RiskStatus::UnboundedBelow;
        ++run.samples;
        if (witness == unbounded) ++run.agree;
        if (witness) run.positives.push_back(s);
    }
    return run;
}

Verdict dominance_equivalence(const DominanceRun& run) {
    return {run.agree == run.samples && run.samples >= 1000,
            format("%d/%d agree, %zu dominance-positive", run.agree, run.samples,
                   run.positives.size())};
}

Verdict es_unbounded_on_dominance(const DominanceRun& run) {
    int total = 0;
    int unbounded = 0;
    for (const auto& s : run.positives) {
        for (double alpha : {0.5, 0.9, 0.99}) {
            ++total;
            if (optimize_es(s, EsParams{alpha, false}).status == RiskStatus::UnboundedBelow) {
                ++unbounded;
            }
        }
    }
    return {total > 0 && unbounded == total, format("%d/%d unbounded", unbounded, total)};
}

Verdict phase_boundary() {
    const std::vector<double> alphas{0.5, 0.8, 0.95, 0.99, 0.999};
    SweepOptions options;
    options.threads = 0;
    const auto points = sweep_phase_boundary(alphas, 200, 2000, 4242, options);
    bool monotone = true;
    std::string detail;
    for (std::size_t i = 0; i < points.size(); ++i) {
        detail += format("a=%g:%.4f ", points[i].alpha, points[i].critical_ratio);
        if (i > 0 && i < 4 && points[i].critical_ratio < points[i - 1].critical_ratio) {
            monotone = false;
        }
    }
    const double last = points.back().critical_ratio;
    const bool near_half = last >= 0.4 && last <= 0.5;
    detail += format("| monotone=%s, a=0.999 in [0.4,0.5]=%s", monotone ? "yes" : "no",
                     near_half ? "yes" : "no");
    return {monotone && near_half, detail};
}

Verdict limits() {
    const double below = exact_minimax_feasibility(400, 1000).probability;
    const double above = exact_minimax_feasibility(600, 1000).probability;
    return {std::abs(below - 1.0) <= 1e-6 && std::abs(above) <= 1e-6,
            format("p(400,1000)=%.12g p(600,1000)=%.3g", below, above)};
}

Verdict coherence() {
    Rng rng(9001);
    int violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const Eigen::Index n = uniform_index(rng, 2, 8);
        const Eigen::Index t = uniform_index(rng, 2, 40);
        const ReturnSample s(testing::gaussian_matrix(rng, n, t));
        const double alpha = testing::uniform(rng, 0.05, 0.995);
        const Eigen::VectorXd u = random_normalized(rng, n);
        const Eigen::VectorXd v = random_normalized(rng, n);
        const double a = testing::uniform(rng, 0.1, 5.0);
        const double shift = testing::uniform(rng, -2.0, 2.0);
        auto es = [&](const ReturnSample& x, const Eigen::VectorXd& w) {
            return expected_shortfall(x, w, alpha);
        };
        auto track = [&](double excess) {
            worst = std::max(worst, excess);
            if (excess > 1e-9) ++violations;
        };

        track(std::abs(es(s, a * u) - a * es(s, u)) / std::max(1.0, a));
        track(es(s, u + v) - es(s, u) - es(s, v));
        const ReturnSample shifted(s.returns().array() + shift);
        track(std::abs(es(shifted, u) - (es(s, u) - shift)));

        // Extra asset with nonnegative returns: holding it can only help.
        Eigen::MatrixXd extended(n + 1, t);
        extended.topRows(n) = s.returns();
        for (Eigen::Index j = 0; j < t; ++j) extended(n, j) = testing::uniform(rng, 0.0, 1.0);
        const ReturnSample ext(extended);
        Eigen::VectorXd with(n + 1);
        Eigen::VectorXd without(n + 1);
        with << u, 1.0;
        without << u, 0.0;
        track(es(ext, with) - es(ext, without));
    }
    return {violations == 0, format("%d violations, worst excess %.3g", violations, worst)};
}

Verdict es_matches_minimax() {
    Rng rng(2718);
    int feasible = 0;
    double worst = 0.0;
    bool statuses_match = true;
    while (feasible < 200) {
        const Eigen::Index n = uniform_index(rng, 2, 8);
        const Eigen::Index t = uniform_index(rng, 3 * n, 40);
        const ReturnSample s(testing::gaussian_matrix(rng, n, t));
        const auto mm = optimize_minimax(s);
        if (mm.status != RiskStatus::Optimal) continue;
        ++feasible;
        const double alpha = 1.0 - testing::uniform(rng, 0.05, 1.0) / static_cast<double>(t);
        const auto es = optimize_es(s, EsParams{alpha, false});
        if (es.status != RiskStatus::Optimal) {
            statuses_match = false;
            continue;
        }
        worst = std::max(worst, std::abs(es.risk_value - mm.risk_value));
    }
    return {statuses_match && worst <= 1e-6,
            format("200 feasible samples, max |ES - ML| = %.3g", worst)};
}

Verdict lp_oracle() {
    Rng rng(555);
    int bounded_ok = 0;
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto p = testing::random_bounded_lp(rng);
        const auto reference = testing::vertex_enumeration_min(p);
        const auto out = lp::solve_lp(p);
        if (!reference) {
            if (out.status == lp::LpStatus::Infeasible) ++bounded_ok;
            continue;
        }
        if (out.status != lp::LpStatus::Optimal) continue;
        const double err = std::abs(out.value - *reference);
        worst = std::max(worst, err);
        if (err <= 1e-7 && lp::max_violation(p, out.solution) <= 1e-7) ++bounded_ok;
    }
    int unbounded_ok = 0;
    for (int i = 0; i < 100; ++i) {
        const auto p = testing::random_unbounded_lp(rng);
        const auto out = lp::solve_lp(p);
        if (out.status == lp::LpStatus::Unbounded && testing::ray_is_recession_direction(p, out.ray)) {
            ++unbounded_ok;
        }
    }
    int infeasible_ok = 0;
    for (int i = 0; i < 100; ++i) {
        if (lp::solve_lp(testing::random_infeasible_lp(rng)).status == lp::LpStatus::Infeasible) {
            ++infeasible_ok;
        }
    }
    return {bounded_ok == 500 && unbounded_ok == 100 && infeasible_ok == 100,
            format("bounded %d/500 (max err %.3g), unbounded %d/100, infeasible %d/100",
                   bounded_ok, worst, unbounded_ok, infeasible_ok)};
}

Verdict long_only(const DominanceRun& run) {
    int checked = 0;
    int ok = 0;
    for (const auto& s : run.positives) {
        if (checked == 100) break;
        ++checked;
        bool good = true;
        for (const auto& r : {optimize_minimax(s, true), optimize_es(s, EsParams{0.9, true})}) {
            good = good && r.status == RiskStatus::Optimal &&
                   r.portfolio.weights.minCoeff() >= -1e-9 &&
                   r.portfolio.weights.cwiseAbs().minCoeff() <= 1e-9;
        }
        if (good) ++ok;
    }
    return {checked == 100 && ok == 100,
            format("%d/%d optimal with a zero weight (minimax and ES 0.9)", ok, checked)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* title, const std::function<Verdict()>& check) {
        const auto start = std::chrono::steady_clock::now();
        const Verdict v = check();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, title,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
        if (!v.pass) ++failures;
    };

    report(1, "exact feasibility values", exact_values);
    report(2, "Monte Carlo agrees with the closed form", monte_carlo_vs_exact);
    DominanceRun run;
    report(3, "dominance iff minimax unbounded", [&] {
        run = run_dominance_oracle();
        return dominance_equivalence(run);
    });
    report(4, "ES unbounded on dominance-positive samples", [&] { return es_unbounded_on_dominance(run); });
    report(5, "phase boundary at T=200", phase_boundary);
    report(6, "large-T limits", limits);
    report(7, "ES coherence", coherence);
    report(8, "ES equals minimax when (1-alpha)T <= 1", es_matches_minimax);
    report(9, "LP core against vertex enumeration", lp_oracle);
    report(10, "long-only sticks to the boundary", [&] { return long_only(run); });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
