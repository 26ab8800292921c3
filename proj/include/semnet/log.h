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

#ifndef SEMNET_LOG_H_
#define SEMNET_LOG_H_

#include <string_view>

namespace semnet {

// Diagnostics go to stderr. Quiet mode suppresses info and warnings.
void SetLogQuiet(bool quiet);
void LogInfo(std::string_view message);
void LogWarning(std::string_view message);

}  // namespace semnet

#endif  // SEMNET_LOG_H_
