#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace framesurf::cli {

enum ExitCode { kOk = 0, kUsage = 2, kAbort = 3 };

// Entry point shared by the executable and the tests; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "3,5" or "3..8" or a mix such as "1..3,6".
std::vector<int> parse_int_list(const std::string& s);

}  // namespace framesurf::cli
