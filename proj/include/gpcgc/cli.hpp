#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gpcgc::cli {

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kParseError = 3;
constexpr int kModelMismatch = 4;
constexpr int kTrainingFailure = 5;

// Dispatches `gpcgc <train|encode|decode|eval|sweep> ...` writing normal
// output to `out` and diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gpcgc::cli
