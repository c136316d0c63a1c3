/**
 * @file sample.hpp
 * @brief Return samples: the N x T matrix every optimizer runs on
 *
 * Rows are assets, columns are observation periods. Columns of generated
 * samples are i.i.d. draws from an elliptical law; each column owns its own
 * random substream so generation order never changes the result.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

namespace portfeas {

class ReturnSample {
public:
    /// Throws InputError unless the matrix is nonempty and finite.
    explicit ReturnSample(Eigen::MatrixXd returns);

    const Eigen::MatrixXd& returns() const { return returns_; }
    Eigen::Index n_assets() const { return returns_.rows(); }
    Eigen::Index n_periods() const { return returns_.cols(); }
    double operator()(Eigen::Index asset, Eigen::Index period) const {
        return returns_(asset, period);
    }

    bool operator==(const ReturnSample& other) const = default;

private:
    Eigen::MatrixXd returns_;
};

enum class Family { IidGaussian, CorrelatedGaussian, StudentTElliptical };

std::string_view to_string(Family family);
/// Accepts the CLI spellings gauss, corr-gauss and student-t.
std::optional<Family> parse_family(std::string_view text);

struct DistributionSpec {
    Family family = Family::IidGaussian;
    /// Ignored for IidGaussian; empty means identity for StudentTElliptical.
    Eigen::MatrixXd covariance;
    double degrees_of_freedom = 0.0;  ///< StudentTElliptical only, must exceed 2
    Eigen::VectorXd mean;             ///< empty means zero

    static DistributionSpec iid_gaussian() { return {}; }
    static DistributionSpec correlated_gaussian(Eigen::MatrixXd covariance);
    static DistributionSpec student_t(double dof, Eigen::MatrixXd covariance = {});
};

/// Deterministic in (spec, n_assets, n_periods, seed). Column t draws from
/// rng::Stream(rng::mix_seed(seed, t)). Throws InputError for a covariance
/// that is not symmetric positive definite, a dimension mismatch, or dof <= 2.
ReturnSample generate_sample(const DistributionSpec& spec, Eigen::Index n_assets,
                             Eigen::Index n_periods, std::uint64_t seed);

/// Plain CSV: one row per asset, T comma-separated values, no header.
/// Throws ParseError naming the row and column of the first bad cell.
ReturnSample load_sample(const std::filesystem::path& path);
ReturnSample parse_sample(std::string_view text);

/// Writes 17 significant digits so load_sample reproduces every bit.
void save_sample(const ReturnSample& sample, const std::filesystem::path& path);
std::string format_sample(const ReturnSample& sample);

/// Generic numeric CSV matrix reader used for covariance files.
Eigen::MatrixXd parse_matrix_csv(std::string_view text);

}  // namespace portfeas
