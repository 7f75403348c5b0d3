#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thetablock {

/// Exit codes: 0 verified or true, 1 mathematical mismatch, 2 usage or window error.
inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitError = 2;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thetablock
