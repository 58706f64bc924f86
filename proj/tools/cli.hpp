/*
 * Copyright 2026 The ckksid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CKKSID_TOOLS_CLI_HPP_
#define CKKSID_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "ckksid/arx.hpp"

namespace ckksid::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFail = 1,
  kExitConfig = 2,
  kExitCorrectness = 3,
};

// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string report_to_text(const ParamReport& rep);
std::string report_to_json(const ParamReport& rep);

}  // namespace ckksid::cli

#endif  // CKKSID_TOOLS_CLI_HPP_
