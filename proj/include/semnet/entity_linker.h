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

#ifndef SEMNET_ENTITY_LINKER_H_
#define SEMNET_ENTITY_LINKER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "semnet/kb_store.h"

namespace semnet {

// A maximal run of word bytes. Offsets are byte offsets into the UTF-8 text,
// end exclusive.
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token &) const = default;
};

struct SentenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  // Half-open range into the token list.
  std::size_t token_begin = 0;
  std::size_t token_end = 0;

  bool operator==(const SentenceSpan &) const = default;
};

struct Mention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  // Lexicon priority order; never empty.
  std::vector<std::string> candidates;
  std::string primary_cui;
  double score = 1.0;

  bool operator==(const Mention &) const = default;
};

std::vector<Token> Tokenize(std::string_view text);

// Sentence boundaries fall after '.', '?' or '!' when followed by whitespace
// or the end of the text. Spans cover the non-whitespace text in order.
std::vector<SentenceSpan> SplitSentences(std::string_view text,
                                         const std::vector<Token> &tokens);

// Greedy left-to-right longest match over token windows of at most
// lexicon.max_surface_token_len() tokens. Mentions never overlap.
std::vector<Mention> Link(std::string_view text, const Lexicon &lexicon);
std::vector<Mention> Link(std::string_view text,
                          const std::vector<Token> &tokens,
                          const Lexicon &lexicon);

// Mention JSONL record for one document.
nlohmann::json MentionsToJson(const std::string &doc_id,
                              const std::vector<Mention> &mentions);
std::vector<Mention> MentionsFromJson(const nlohmann::json &record);

}  // namespace semnet

#endif  // SEMNET_ENTITY_LINKER_H_
