#ifndef CARNOTKIT_CLI_HPP
#define CARNOTKIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace carnotkit {

/// Command driver behind the carnotkit binary. `args` excludes the
/// program name. Exit codes: 0 success / property holds, 1 property
/// violated (witness printed), 2 usage or parse error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carnotkit

#endif
