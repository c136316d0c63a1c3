/**
 * @file experiments.hpp
 * @brief Monte Carlo feasibility estimates and the ES phase-boundary sweep
 *
 * Trial i of a run draws its sample from substream rng::mix_seed(seed, i), so
 * counts are identical for any thread count or execution order.
 */

#pragma once

#include "portfeas/sample.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace portfeas {

struct Measure {
    enum class Kind { Minimax, ExpectedShortfall };
    Kind kind = Kind::Minimax;
    double alpha = 1.0;  ///< 1 for Minimax

    static Measure minimax() { return {Kind::Minimax, 1.0}; }
    /// alpha = 1 is accepted and maps to Minimax.
    static Measure expected_shortfall(double alpha);

    std::string name() const;
    bool operator==(const Measure&) const = default;
};

struct FeasibilityEstimate {
    Measure measure;
    std::int64_t n_assets = 0;
    std::int64_t n_periods = 0;
    std::int64_t trials = 0;     ///< counted trials (anomalies excluded)
    std::int64_t feasible = 0;
    double fraction = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t seed = 0;
    std::int64_t anomalies = 0;  ///< solver numerical failures, not in `trials`
};

struct PhaseBoundaryPoint {
    double alpha = 1.0;
    double critical_ratio = 0.0;
    double bracket_width = 0.0;
    std::int64_t n_periods = 0;
    std::int64_t trials_per_cell = 0;
    std::uint64_t seed = 0;
};

struct WilsonInterval {
    double low;
    double high;
};

/// 95% Wilson score interval for `successes` out of `trials`.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials);

/// Counts OPTIMAL outcomes over `trials` independent samples. Solver
/// failures are tallied separately; more than 0.1% of trials throws
/// NumericalError. `threads` = 0 uses the hardware concurrency.
FeasibilityEstimate estimate_feasibility(const Measure& measure, std::int64_t n_assets,
                                         std::int64_t n_periods, const DistributionSpec& spec,
                                         std::int64_t trials, std::uint64_t seed,
                                         unsigned threads = 1);

/// Feasibility of a single sample under a measure (OPTIMAL or not).
bool is_feasible(const ReturnSample& sample, const Measure& measure);

struct SweepOptions {
    DistributionSpec spec = DistributionSpec::iid_gaussian();
    unsigned threads = 1;
};

/// For each alpha (alpha = 1 meaning Minimax) bisect on integer N in [1, T-1]
/// for the 0.5 crossing of the feasible fraction. Refinement stops at a
/// bracket of one asset or at a cell whose Wilson interval contains 0.5.
/// Every cell reuses `seed`, so all alphas and all N see the same trial streams.
std::vector<PhaseBoundaryPoint> sweep_phase_boundary(const std::vector<double>& alphas,
                                                     std::int64_t n_periods,
                                                     std::int64_t trials_per_cell,
                                                     std::uint64_t seed,
                                                     const SweepOptions& options = {});

inline constexpr const char* kFeasibilityCsvHeader =
    "measure,alpha,n_assets,n_periods,trials,feasible,fraction,ci_low,ci_high,seed";
inline constexpr const char* kPhaseCsvHeader =
    "alpha,critical_ratio,bracket_width,n_periods,trials_per_cell,seed";

std::string format_csv(const std::vector<FeasibilityEstimate>& results);
std::string format_csv(std::vector<PhaseBoundaryPoint> results);

/// Throws InputError on empty input and IoError when the path is not writable.
void export_csv(const std::vector<FeasibilityEstimate>& results,
                const std::filesystem::path& path);
void export_csv(const std::vector<PhaseBoundaryPoint>& results, const std::filesystem::path& path);

std::vector<FeasibilityEstimate> read_feasibility_csv(const std::filesystem::path& path);
std::vector<PhaseBoundaryPoint> read_phase_csv(const std::filesystem::path& path);

}  // namespace portfeas
