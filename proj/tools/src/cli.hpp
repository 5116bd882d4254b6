#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace confassist::cli {

// Runs the confassist command line with argv[0] already stripped. Returns
// the process exit code; output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confassist::cli
