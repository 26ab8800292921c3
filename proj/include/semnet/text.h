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

#ifndef SEMNET_TEXT_H_
#define SEMNET_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace semnet {

// Bytes >= 0x80 count as word characters, so UTF-8 sequences stay inside
// tokens and are never split by normalization.
inline bool IsWordByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

// Lowercases ASCII letters, folds every run of non-word bytes into a single
// space and trims. Idempotent.
std::string NormalizeSurface(std::string_view s);

// Number of space-separated tokens in an already normalized string.
std::size_t CountNormalizedTokens(std::string_view normalized);

// Splits on a single-character delimiter, keeping empty fields.
std::vector<std::string> SplitFields(std::string_view line, char delim);

// Strips a trailing '\r' left by CRLF files.
std::string_view StripCarriageReturn(std::string_view line);

// Reads a whole file; throws Error(kIo) when it cannot be opened.
std::string ReadFile(const std::string &path);

// Writes a whole file; throws Error(kIo) on failure.
void WriteFile(const std::string &path, std::string_view contents);

}  // namespace semnet

#endif  // SEMNET_TEXT_H_
