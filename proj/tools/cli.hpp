#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pathvar::cli {

/// Runs one command line (args excludes the program name). Returns 0 on
/// success, 2 on invalid input, 1 on numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pathvar::cli
