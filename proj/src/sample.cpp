#include "portfeas/sample.hpp"

#include "portfeas/errors.hpp"
#include "portfeas/rng.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace portfeas {

ReturnSample::ReturnSample(Eigen::MatrixXd returns) : returns_(std::move(returns)) {
    if (returns_.rows() < 1 || returns_.cols() < 1) {
        throw InputError("return sample needs at least one asset and one period");
    }
    if (!returns_.allFinite()) {
        throw InputError("return sample contains non-finite entries");
    }
}

std::string_view to_string(Family family) {
    switch (family) {
    case Family::IidGaussian: return "gauss";
    case Family::CorrelatedGaussian: return "corr-gauss";
    case Family::StudentTElliptical: return "student-t";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view text) {
    if (text == "gauss") return Family::IidGaussian;
    if (text == "corr-gauss") return Family::CorrelatedGaussian;
    if (text == "student-t") return Family::StudentTElliptical;
    return std::nullopt;
}

DistributionSpec DistributionSpec::correlated_gaussian(Eigen::MatrixXd covariance) {
    DistributionSpec spec;
    spec.family = Family::CorrelatedGaussian;
    spec.covariance = std::move(covariance);
    return spec;
}

DistributionSpec DistributionSpec::student_t(double dof, Eigen::MatrixXd covariance) {
    DistributionSpec spec;
    spec.family = Family::StudentTElliptical;
    spec.degrees_of_freedom = dof;
    spec.covariance = std::move(covariance);
    return spec;
}

namespace {

// Lower Cholesky factor, or nullopt for the identity.
std::optional<Eigen::MatrixXd> cholesky_factor(const DistributionSpec& spec, Eigen::Index n) {
    if (spec.family == Family::IidGaussian) return std::nullopt;
    if (spec.covariance.size() == 0) {
        if (spec.family == Family::CorrelatedGaussian) {
            throw InputError("correlated gaussian requires a covariance matrix");
        }
        return std::nullopt;
    }
    const Eigen::MatrixXd& cov = spec.covariance;
    if (cov.rows() != n || cov.cols() != n) {
        throw InputError("covariance is " + std::to_string(cov.rows()) + "x" +
                         std::to_string(cov.cols()) + " but sample has " + std::to_string(n) +
                         " assets");
    }
    if (!cov.allFinite() || (cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InputError("covariance must be finite and symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw InputError("covariance is not positive definite");
    }
    return Eigen::MatrixXd(llt.matrixL());
}

double chi_square(rng::Stream& stream, double dof) {
    const double whole = std::floor(dof);
    if (whole == dof && dof <= 64.0) {
        double sum = 0.0;
        for (int k = 0; k < static_cast<int>(dof); ++k) {
            const double z = stream.next_normal();
            sum += z * z;
        }
        return sum;
    }
    return 2.0 * stream.next_gamma(0.5 * dof);
}

}  // namespace

ReturnSample generate_sample(const DistributionSpec& spec, Eigen::Index n_assets,
                             Eigen::Index n_periods, std::uint64_t seed) {
    if (n_assets < 1 || n_periods < 1) {
        throw InputError("sample dimensions must be positive");
    }
    const bool student = spec.family == Family::StudentTElliptical;
    if (student && !(spec.degrees_of_freedom > 2.0 && std::isfinite(spec.degrees_of_freedom))) {
        throw InputError("student-t degrees of freedom must exceed 2");
    }
    if (spec.mean.size() != 0 && spec.mean.size() != n_assets) {
        throw InputError("mean vector length does not match asset count");
    }
    const auto factor = cholesky_factor(spec, n_assets);

    Eigen::MatrixXd x(n_assets, n_periods);
    Eigen::VectorXd z(n_assets);
    for (Eigen::Index t = 0; t < n_periods; ++t) {
        rng::Stream stream(rng::mix_seed(seed, static_cast<std::uint64_t>(t)));
        for (Eigen::Index i = 0; i < n_assets; ++i) z(i) = stream.next_normal();
        if (factor) z = (*factor) * z;
        if (student) {
            z *= std::sqrt(spec.degrees_of_freedom / chi_square(stream, spec.degrees_of_freedom));
        }
        if (spec.mean.size() != 0) z += spec.mean;
        x.col(t) = z;
    }
    return ReturnSample(std::move(x));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::vector<double>> parse_rows(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        const std::size_t stop = end == std::string_view::npos ? text.size() : end;
        lines.push_back(text.substr(start, stop - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("empty sample file", 0, 0);

    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        std::vector<double> values;
        std::string_view line = lines[r];
        std::size_t col = 0;
        while (true) {
            ++col;
            const std::size_t comma = line.find(',');
            const std::string_view cell =
                trim(comma == std::string_view::npos ? line : line.substr(0, comma));
            double v = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
                throw ParseError("row " + std::to_string(r + 1) + ", column " +
                                     std::to_string(col) + ": not a finite number: '" +
                                     std::string(cell) + "'",
                                 r + 1, col);
            }
            values.push_back(v);
            if (comma == std::string_view::npos) break;
            line.remove_prefix(comma + 1);
        }
        if (!rows.empty() && values.size() != rows.front().size()) {
            throw ParseError("row " + std::to_string(r + 1) + " has " +
                                 std::to_string(values.size()) + " values, expected " +
                                 std::to_string(rows.front().size()),
                             r + 1, 0);
        }
        rows.push_back(std::move(values));
    }
    return rows;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

Eigen::MatrixXd parse_matrix_csv(std::string_view text) {
    const auto rows = parse_rows(text);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

ReturnSample parse_sample(std::string_view text) { return ReturnSample(parse_matrix_csv(text)); }

ReturnSample load_sample(const std::filesystem::path& path) {
    return parse_sample(read_file(path));
}

std::string format_sample(const ReturnSample& sample) {
    std::string out;
    char buf[32];
    for (Eigen::Index i = 0; i < sample.n_assets(); ++i) {
        for (Eigen::Index t = 0; t < sample.n_periods(); ++t) {
            if (t > 0) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", sample(i, t));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void save_sample(const ReturnSample& sample, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << format_sample(sample);
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace portfeas
