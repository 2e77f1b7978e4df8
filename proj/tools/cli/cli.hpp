#pragma once

#include <iosfwd>

namespace rootsim {

/// Entry point of the `rootsim` command. Returns the process exit code:
/// 0 success, 1 run or input failure, 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rootsim
