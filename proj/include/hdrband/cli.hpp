#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hdrband/sample.hpp"

namespace hdrband::cli {

//! Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kPipelineError = 3;

//! Bad input data or arguments (exit code 2).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//! One value per line, or a single-column CSV whose first line may be a
//! header. Blank lines are skipped. Throws DataError naming the first bad
//! line, or when no values are present.
Sample read_sample(std::istream& in, const std::string& source = "input");

//! Entry point of the `hdrband` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hdrband::cli
