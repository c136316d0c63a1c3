/**
 * @file cli.hpp
 * @brief Command-line frontend; `run_cli` is the whole program minus main()
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace portfeas::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kNumericalFailure = 2 };

/// `args` excludes the program name. Machine-readable results go to `out`
/// (or the --out file), human-readable summaries to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace portfeas::cli
