#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pltlf::cli {

/// `args` is argv including the program name.
/// Exit codes: 0 yes/success, 1 no/unsatisfiable/violation, 2 error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pltlf::cli
