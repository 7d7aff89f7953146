#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdlseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // anything unexpected
inline constexpr int kExitIo = 2;
inline constexpr int kExitValidation = 3;

/// Runs one command line (args[0] is the program name). Result documents go
/// to --output or `out`; diagnostics go to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mdlseg::cli
