#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace minorient {

/// Exit codes: 0 success, 1 usage, 2 unreadable input, 3 precondition
/// violated, 4 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace minorient
