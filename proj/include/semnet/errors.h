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

#ifndef SEMNET_ERRORS_H_
#define SEMNET_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace semnet {

// Error categories. The CLI maps kUsage to exit code 1 and every other kind
// to exit code 2.
enum class ErrorKind {
  kUsage,
  kParse,
  kValidation,
  kLookup,
  kConfig,
  kTraining,
  kConsistency,
  kFormat,
  kIndexing,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace semnet

#endif  // SEMNET_ERRORS_H_
