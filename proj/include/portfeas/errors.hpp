/**
 * @file errors.hpp
 * @brief Exception types shared by every portfeas module
 */

#pragma once

#include <stdexcept>
#include <string>

namespace portfeas {

/// Malformed arguments: dimension mismatch, out-of-range parameter, bad sample.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The solver gave up (iteration cap, lost feasibility). Distinct from an
/// unbounded or infeasible classification, which are regular results.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CSV ingestion failure; the message names the offending row and column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : std::runtime_error(what), row_(row), column_(column) {}

    /// 1-based line of the file.
    std::size_t row() const noexcept { return row_; }
    /// 1-based cell within the line (0 when the whole row is at fault).
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace portfeas
