#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hdgc::cli {

/// Runs one subcommand (fit, test, simulate, forecast). Returns the process
/// exit status; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdgc::cli
