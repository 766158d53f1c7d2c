// Copyright 2026 The CMM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef CMM_CLI_H
#define CMM_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace cmm {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitPrecondition = 3 };

/// Runs the command line front end. args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace cmm

#endif
