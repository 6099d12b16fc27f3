// cli.hpp
//
// Command-line front end: solve, audit, refine, barrier-scan, blowdown.
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace translab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace translab
