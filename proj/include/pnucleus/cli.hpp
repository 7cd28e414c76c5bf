#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnucleus {

// Full command-line front end; returns the process exit code.
// 0 = success, 1 = I/O or validation failure, 2 = enumeration budget hit.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pnucleus
