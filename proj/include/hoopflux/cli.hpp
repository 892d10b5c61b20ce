#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#include <ostream>
#include <string>
#include <vector>

namespace hoopflux::cli {

/// `args` excludes the program name. Returns the exit status: 0 on success,
/// 1 on a domain error or failed verdict-style check, 2 on bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Closest candidate by edit distance, or empty when nothing is close.
std::string suggest(const std::string& name, const std::vector<std::string>& candidates);

}  // namespace hoopflux::cli
