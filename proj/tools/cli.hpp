#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace expnet::cli {

// Process exit codes; part of the tool's scripting contract.
enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kInstance = 3,
  kIo = 4,
  kNumerical = 5,
};

// Runs the expnet command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace expnet::cli
