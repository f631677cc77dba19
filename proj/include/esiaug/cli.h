//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_CLI_H_
#define ESIAUG_CLI_H_

#include <iosfwd>
#include <span>
#include <string>

namespace esiaug {

/// Exit status of a command.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitNumeric = 4,
};

/// Runs one command line; `args` starts with the subcommand. Progress and
/// the resolved config hash go to `out`. A failure writes exactly one line
/// `error code=<CODE> message=<text>` to `err` and returns the matching
/// exit code.
int run_cli(std::span<const std::string> args, std::ostream &out,
            std::ostream &err);

}  // namespace esiaug

#endif  // ESIAUG_CLI_H_
