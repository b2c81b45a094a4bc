// Copyright 2026 The logdoc Authors.
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

#ifndef LOGDOC_CLI_HPP_
#define LOGDOC_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace logdoc {

// Process exit codes of the command-line interface.
enum ExitCode : int {
  kExitOk = 0,
  kExitNoResults = 1,
  kExitConfig = 2,
  kExitDuplicate = 3,
  kExitUnknownTrace = 4,
};

// Runs one command; args exclude the program name. The LOGDOC_CONFIG
// environment variable names a config file when --config is absent.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Sidecar file holding the traces of records-format queries.
std::string traces_path(const std::string& kb_path);

// "<16 hex digits of the query hash>-<1-based passage index>".
std::string trace_id(std::string_view query, std::size_t index);

}  // namespace logdoc

#endif  // LOGDOC_CLI_HPP_
