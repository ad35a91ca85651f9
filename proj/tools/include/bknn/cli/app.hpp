#ifndef BKNN_CLI_APP_HPP
#define BKNN_CLI_APP_HPP

#include <iosfwd>

namespace bknn::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2 };

/// Entry point of the `bknn` tool. Subcommands: grid, replicate, run,
/// report, validate. Human-readable output goes to `out`, progress and
/// diagnostics to `err`.
int cli_main(int argc, const char *const *argv, std::ostream &out,
             std::ostream &err);

} // namespace bknn::cli

#endif
