#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stockloan::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kOk = 0,
    kIoFailure = 1,     ///< output could not be written
    kInputError = 2,    ///< usage, config, parameter or regime errors
    kGateFailure = 3,   ///< verify: an oracle disagreed beyond its tolerance
};

/// Runs one invocation; args exclude the program name. Errors are written to
/// `err` as a single `<Kind>: <message>` line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stockloan::cli
