#ifndef SPHERECLAMP_TOOLS_CLI_APP_HPP
#define SPHERECLAMP_TOOLS_CLI_APP_HPP

#include <ostream>
#include <string>
#include <vector>

namespace sphereclamp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitUnsafe = 3;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sphereclamp::cli

#endif
