#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace l1sketch::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;      // parse / validation error
inline constexpr int kExitParameter = 3;  // bad flag or out-of-range value
inline constexpr int kExitInternal = 4;   // invariant breach

// Runs one invocation. args excludes the program name. Data goes to `out`
// unless --out is given; diagnostics and timing go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l1sketch::cli
