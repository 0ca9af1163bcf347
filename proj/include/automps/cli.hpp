#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace automps::cli {

/// Runs one CLI invocation. argv excludes the program name. Returns 0 on
/// success, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err);

}  // namespace automps::cli
