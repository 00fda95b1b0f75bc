#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opn::cli {

/// Process exit codes. Scripts rely on these values.
enum ExitCode : int {
    kSuccess = 0,
    kSemanticFailure = 1,  // not enabled, invalid net, no witness under --expect
    kUsageError = 2,       // bad flags, unreadable or unparsable input
};

/// Runs the `opn` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opn::cli
