#pragma once

#include <ostream>
#include <stdexcept>
#include <string>

#include "nemem/core_algebra.hpp"

namespace nemem {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitUsage = 2, kExitDomain = 3, kExitIO = 4 };

/// Malformed command-line value; the message names the offending token.
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses "a b; c d; e f": rows separated by ';', entries by whitespace.
/// Throws ParseError unless the shape is exactly rows x cols.
Eigen::MatrixXd parse_matrix(const std::string& text, int rows, int cols);

/// Entry point of the `nemem` tool, with streams injectable for testing.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nemem
