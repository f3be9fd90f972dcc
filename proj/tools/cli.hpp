#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrft::cli {

enum ExitCode { ok = 0, invalid_config = 2, partial = 3, computation_error = 4 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrft::cli
