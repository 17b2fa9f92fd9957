#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stochopt {

// Command-line entry point. args excludes the program name.
// Exit codes: 0 success, 1 validation error, 2 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses a flat key=value file ('#' comments, blank lines ignored) into
// "--key=value" arguments.
std::vector<std::string> config_to_args(const std::string& path);

}  // namespace stochopt
