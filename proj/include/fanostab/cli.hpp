#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fano::cli {

/// Runs one CLI invocation. Exit codes: 0 success, 1 sound-but-negative
/// result (stuck chase, not special, not stable), 2 usage or input errors.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace fano::cli
