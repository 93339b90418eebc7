#pragma once

#include <string>
#include <vector>

namespace cavent::cli {

// Parses the argument list (without the program name) and runs the chosen
// subcommand.  Returns the process exit code: 0 on success, 2 for usage
// problems (bad flags, malformed settings, unknown scenarios), 3 for
// runtime failures.
int parse_and_dispatch(std::vector<std::string> args);

}  // namespace cavent::cli
