/* Copyright 2026 The DAGAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DAGAM_TOOLS_CLI_H_
#define DAGAM_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace dagam::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataOrConfig = 2,
  kDivergence = 3,
};

// Runs one command line. args[0] is the program name. Normal output goes to
// `out`, diagnostics and usage text to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dagam::cli

#endif  // DAGAM_TOOLS_CLI_H_
