// Copyright 2026 The bioevents Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The `bioevents` command line: one subcommand per module operation.

#ifndef BIOEVENTS_TOOLS_CLI_H_
#define BIOEVENTS_TOOLS_CLI_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bioevents/core/error.h"

namespace bioevents::cli {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitParse = 3,
  kExitValidation = 4,
  kExitIo = 5,
  kExitInsufficientData = 6,
  kExitNetwork = 7,
  kExitSchemaChange = 8,
  kExitRebuildRequired = 9,
  kExitPartialFailure = 10,
  kExitNumeric = 11,
};

int exit_code_for(ErrorCode code);

struct Settings;

// The full option tree bound to `settings`; used by run() and by tests that
// introspect the documented flags.
std::unique_ptr<CLI::App> make_app(Settings& settings);
std::unique_ptr<CLI::App> make_app();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bioevents::cli

#endif  // BIOEVENTS_TOOLS_CLI_H_
