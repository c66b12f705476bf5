#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace liouville::cli {

enum ExitStatus : int { exit_success = 0, exit_check_failure = 1, exit_config_error = 2 };

/// `<tool> <subcommand> --config <path> [--out <dir>] [--seed <u64>]`
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liouville::cli
