#include "portfeas/experiments.hpp"

#include "portfeas/errors.hpp"
#include "portfeas/risk.hpp"
#include "portfeas/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace portfeas {

Measure Measure::expected_shortfall(double alpha) {
    if (alpha == 1.0) return minimax();
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    return {Kind::ExpectedShortfall, alpha};
}

std::string Measure::name() const { return kind == Kind::Minimax ? "minimax" : "es"; }

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials) {
    if (trials <= 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    return {std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

bool is_feasible(const ReturnSample& sample, const Measure& measure) {
    const OptimizationReport report = measure.kind == Measure::Kind::Minimax
                                          ? optimize_minimax(sample)
                                          : optimize_es(sample, EsParams{measure.alpha, false});
    return report.status == RiskStatus::Optimal;
}

FeasibilityEstimate estimate_feasibility(const Measure& measure, std::int64_t n_assets,
                                         std::int64_t n_periods, const DistributionSpec& spec,
                                         std::int64_t trials, std::uint64_t seed,
                                         unsigned threads) {
    if (trials < 1) throw InputError("trials must be positive");
    if (n_assets < 1 || n_periods < 1) throw InputError("N and T must be positive");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, trials));

    std::atomic<std::int64_t> next{0};
    std::atomic<std::int64_t> feasible{0};
    std::atomic<std::int64_t> anomalies{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        std::int64_t local_feasible = 0;
        std::int64_t local_anomalies = 0;
        try {
            for (std::int64_t i = next++; i < trials; i = next++) {
                const ReturnSample sample =
                    generate_sample(spec, n_assets, n_periods,
                                    rng::mix_seed(seed, static_cast<std::uint64_t>(i)));
                try {
                    if (is_feasible(sample, measure)) ++local_feasible;
                } catch (const NumericalError&) {
                    ++local_anomalies;
                }
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = trials;
        }
        feasible += local_feasible;
        anomalies += local_anomalies;
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    if (anomalies * 1000 > trials) {
        throw NumericalError(std::to_string(anomalies.load()) + " of " + std::to_string(trials) +
                             " trials hit solver failures (budget 0.1%)");
    }
    FeasibilityEstimate est;
    est.measure = measure;
    est.n_assets = n_assets;
    est.n_periods = n_periods;
    est.trials = trials - anomalies;
    est.feasible = feasible;
    est.anomalies = anomalies;
    est.seed = seed;
    est.fraction = est.trials > 0 ? static_cast<double>(est.feasible) / est.trials : 0.0;
    const WilsonInterval ci = wilson_interval(est.feasible, est.trials);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    return est;
}

std::vector<PhaseBoundaryPoint> sweep_phase_boundary(const std::vector<double>& alphas,
                                                     std::int64_t n_periods,
                                                     std::int64_t trials_per_cell,
                                                     std::uint64_t seed,
                                                     const SweepOptions& options) {
    if (alphas.empty()) throw InputError("at least one alpha is required");
    if (n_periods < 3) throw InputError("phase sweep needs T >= 3");
    if (trials_per_cell < 1) throw InputError("trials per cell must be positive");

    std::vector<double> sorted = alphas;
    std::sort(sorted.begin(), sorted.end());
    std::vector<PhaseBoundaryPoint> points;
    const double t = static_cast<double>(n_periods);

    for (double alpha : sorted) {
        const Measure measure = Measure::expected_shortfall(alpha);
        std::map<std::int64_t, FeasibilityEstimate> cells;
        auto cell = [&](std::int64_t n) -> const FeasibilityEstimate& {
            auto it = cells.find(n);
            if (it == cells.end()) {
                it = cells
                         .emplace(n, estimate_feasibility(measure, n, n_periods, options.spec,
                                                          trials_per_cell, seed, options.threads))
                         .first;
            }
            return it->second;
        };
        auto straddles = [](const FeasibilityEstimate& e) {
            return e.ci_low <= 0.5 && 0.5 <= e.ci_high;
        };

        PhaseBoundaryPoint point{alpha, 0.0, 0.0, n_periods, trials_per_cell, seed};
        std::int64_t lo = 1;
        std::int64_t hi = n_periods - 1;
        if (cell(hi).fraction >= 0.5) {
            point.critical_ratio = static_cast<double>(hi) / t;
            point.bracket_width = 1.0 / t;
            points.push_back(point);
            continue;
        }
        bool settled = false;
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            const FeasibilityEstimate& e = cell(mid);
            if (straddles(e)) {
                point.critical_ratio = static_cast<double>(mid) / t;
                point.bracket_width = static_cast<double>(hi - lo) / t;
                settled = true;
                break;
            }
            if (e.fraction >= 0.5) lo = mid;
            else hi = mid;
        }
        if (!settled) {
            // Linear interpolation of the crossing inside the final one-asset bracket.
            const double f_lo = cell(lo).fraction;
            const double f_hi = cell(hi).fraction;
            const double share = f_lo > f_hi ? (f_lo - 0.5) / (f_lo - f_hi) : 0.5;
            point.critical_ratio = (static_cast<double>(lo) + share) / t;
            point.bracket_width = static_cast<double>(hi - lo) / t;
        }
        points.push_back(point);
    }
    return points;
}

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path,
                                                 const std::string& header,
                                                 std::size_t columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw ParseError("unexpected header in " + path.string(), 1, 0);
    }
    std::vector<std::vector<std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != columns) {
            throw ParseError("line " + std::to_string(lineno) + " has " +
                                 std::to_string(cells.size()) + " fields",
                             lineno, 0);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

std::string format_csv(const std::vector<FeasibilityEstimate>& results) {
    std::string out = std::string(kFeasibilityCsvHeader) + "\n";
    for (const auto& e : results) {
        out += e.measure.name() + "," + fmt12(e.measure.alpha) + "," +
               std::to_string(e.n_assets) + "," + std::to_string(e.n_periods) + "," +
               std::to_string(e.trials) + "," + std::to_string(e.feasible) + "," +
               fmt12(e.fraction) + "," + fmt12(e.ci_low) + "," + fmt12(e.ci_high) + "," +
               std::to_string(e.seed) + "\n";
    }
    return out;
}

std::string format_csv(std::vector<PhaseBoundaryPoint> results) {
    std::stable_sort(results.begin(), results.end(),
                     [](const auto& a, const auto& b) { return a.alpha < b.alpha; });
    std::string out = std::string(kPhaseCsvHeader) + "\n";
    for (const auto& p : results) {
        out += fmt12(p.alpha) + "," + fmt12(p.critical_ratio) + "," + fmt12(p.bracket_width) +
               "," + std::to_string(p.n_periods) + "," + std::to_string(p.trials_per_cell) + "," +
               std::to_string(p.seed) + "\n";
    }
    return out;
}

void export_csv(const std::vector<FeasibilityEstimate>& results,
                const std::filesystem::path& path) {
    if (results.empty()) throw InputError("nothing to export");
    write_text(format_csv(results), path);
}

void export_csv(const std::vector<PhaseBoundaryPoint>& results,
                const std::filesystem::path& path) {
    if (results.empty()) throw InputError("nothing to export");
    write_text(format_csv(results), path);
}

std::vector<FeasibilityEstimate> read_feasibility_csv(const std::filesystem::path& path) {
    std::vector<FeasibilityEstimate> out;
    for (const auto& c : read_table(path, kFeasibilityCsvHeader, 10)) {
        FeasibilityEstimate e;
        const double alpha = std::stod(c[1]);
        if (c[0] == "minimax") e.measure = Measure::minimax();
        else if (c[0] == "es") e.measure = Measure{Measure::Kind::ExpectedShortfall, alpha};
        else throw ParseError("unknown measure '" + c[0] + "'", out.size() + 2, 1);
        e.n_assets = std::stoll(c[2]);
        e.n_periods = std::stoll(c[3]);
        e.trials = std::stoll(c[4]);
        e.feasible = std::stoll(c[5]);
        e.fraction = std::stod(c[6]);
        e.ci_low = std::stod(c[7]);
        e.ci_high = std::stod(c[8]);
        e.seed = std::stoull(c[9]);
        out.push_back(e);
    }
    return out;
}

std::vector<PhaseBoundaryPoint> read_phase_csv(const std::filesystem::path& path) {
    std::vector<PhaseBoundaryPoint> out;
    for (const auto& c : read_table(path, kPhaseCsvHeader, 6)) {
        out.push_back({std::stod(c[0]), std::stod(c[1]), std::stod(c[2]), std::stoll(c[3]),
                       std::stoll(c[4]), std::stoull(c[5])});
    }
    return out;
}

}  // namespace portfeas
