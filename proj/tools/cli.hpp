#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace srw::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kNotConverged = 2,
  kIoError = 3,
};

/// Runs one command line; args[0] is the program name. Data goes to `out`
/// (or to --out files), diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace srw::cli
