// Copyright 2026 The Semnet Authors.
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

#ifndef SEMNET_CLI_H_
#define SEMNET_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace semnet {

// Runs one subcommand. Returns 0 on success, 1 on usage errors and 2 on
// data or validation errors. Data goes to `out`, diagnostics to `err`.
int Dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err);

int Dispatch(int argc, char **argv);

}  // namespace semnet

#endif  // SEMNET_CLI_H_
