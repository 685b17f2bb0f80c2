#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padicrot::cli {

// Runs one command line (without the program name). Results go to `out` as a
// single JSON object or CSV table; usage text goes to `err`. Returns 0 on
// success, 1 for domain errors and 2 for usage errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padicrot::cli
