#pragma once

// Command-line front end: expand, verify, branch, list.
//
// Exit codes: 0 success or all cases pass, 1 a verification failed,
// 2 usage or configuration error.

#include <iosfwd>
#include <string>
#include <vector>

namespace n3 {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

/// Runs the tool on args (args[0] is the program name), writing results to out
/// and diagnostics to err.  Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace n3
