#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fluted::cli {

// args excludes the program name. Exit codes: 0 success or SAT, 1 UNSAT or no
// model, 2 usage or input error, 3 cap exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace fluted::cli
