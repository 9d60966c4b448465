#pragma once

#include <ostream>
#include <string>

namespace fano::selftest {

/// Runs the acceptance suite against the shipped data under `data_root`
/// (expects scripts/ and facts/ subdirectories), printing one pass/fail
/// line per criterion. Returns the number of failed criteria.
int run(const std::string& data_root, std::ostream& out);

} // namespace fano::selftest
