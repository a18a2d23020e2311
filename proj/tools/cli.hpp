// Command-line front end: exact finite-d, limit and Monte-Carlo tables.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mfe::cli {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Runs one subcommand. args excludes the program name. Results go to out
// (or to the --output file), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mfe::cli
