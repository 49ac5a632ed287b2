#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liftlab::cli {

/// Runs one command line (without the program name). Reports go to `out`,
/// usage errors to `err`. Returns 0 when everything checked out, 1 on a
/// verification or solver failure, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liftlab::cli
