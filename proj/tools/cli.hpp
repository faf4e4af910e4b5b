#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace modbasis::cli {

// Exit codes shared by every subcommand.
enum Exit : int {
  kPass = 0,
  kFail = 1,
  kUsage = 2,
  kDataIntegrity = 3,
  kPrecision = 4,
};

// Runs one command line (without the program name). Output goes to `out`,
// diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modbasis::cli
