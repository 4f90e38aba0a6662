#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace actimetry::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitEmpty = 3;
inline constexpr int kExitDegenerate = 4;

/// Runs one command line (without the program name) and returns its exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace actimetry::cli
