#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fairfaucet::cli {

/// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairfaucet::cli
