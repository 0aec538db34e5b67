#ifndef MAXBCG_CLI_HPP
#define MAXBCG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace maxbcg::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kMismatch = 2 };

/// Entry point behind the `maxbcg` executable. `args` excludes the program
/// name. Subcommands: generate, find-clusters, compare, bench, oracle-check.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxbcg::cli

#endif  // MAXBCG_CLI_HPP
