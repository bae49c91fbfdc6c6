// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_CLI_HPP
#define BIBEE_CLI_HPP

#include <iosfwd>
#include <span>
#include <string>

namespace bibee
{

// Process exit codes. Stable; documented in the README.
enum ExitCode : int
{
  kExitOk = 0,
  kExitFailure = 1,    // I/O failure writing outputs, unexpected errors
  kExitUsage = 2,      // bad flags or arguments
  kExitInput = 3,      // unreadable/malformed input, empty input, bad mesh topology or geometry
  kExitDomain = 4,     // precondition violated (charge outside cavity, bad parameter range)
  kExitNumerical = 5,  // non-convergence or internal consistency failure
};

// Runs the command line tool in-process. args excludes the program name.
// Nothing is written to 'out' unless the whole command succeeds.
int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err);

}  // namespace bibee

#endif  // BIBEE_CLI_HPP
