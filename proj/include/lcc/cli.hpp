#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lcc::cli {

/// Runs one subcommand; `args` excludes the program name.
/// Exit status: 0 success, 1 usage or configuration error, 2 certification failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lcc::cli
