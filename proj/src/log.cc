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

#include "semnet/log.h"

#include <atomic>

#include <fmt/core.h>

namespace semnet {

namespace {
std::atomic<bool> g_quiet{false};
}  // namespace

void SetLogQuiet(bool quiet) { g_quiet = quiet; }

void LogInfo(std::string_view message) {
  if (!g_quiet) fmt::print(stderr, "semnet: {}\n", message);
}

void LogWarning(std::string_view message) {
  if (!g_quiet) fmt::print(stderr, "semnet: warning: {}\n", message);
}

}  // namespace semnet
