#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sobolcap::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,       ///< bad arguments, unreadable files, inconsistent specs
  kInvalidCapacity = 3,  ///< capacity fails the axioms
  kNumericalFailure = 4,
};

/// Runs `sobolcap <subcommand> ...`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sobolcap::cli
