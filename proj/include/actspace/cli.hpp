#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace actspace {

// Runs the command line `args` (without the program name). Returns the
// process exit code: 0 on success, 2 on a usage error, 1 on a data error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace actspace
