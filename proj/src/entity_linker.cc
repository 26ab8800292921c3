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

#include "semnet/entity_linker.h"

#include <algorithm>
#include <cctype>

#include "semnet/errors.h"
#include "semnet/text.h"

namespace semnet {

namespace {

bool IsSpace(unsigned char c) { return std::isspace(c) != 0; }

bool IsTerminator(char c) { return c == '.' || c == '?' || c == '!'; }

void AppendLower(std::string &out, std::string_view s) {
  for (unsigned char c : s) {
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                       : static_cast<char>(c));
  }
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!IsWordByte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n && IsWordByte(static_cast<unsigned char>(text[i]))) ++i;
    tokens.push_back(Token{std::string(text.substr(start, i - start)), start, i});
  }
  return tokens;
}

std::vector<SentenceSpan> SplitSentences(std::string_view text,
                                         const std::vector<Token> &tokens) {
  std::vector<SentenceSpan> sentences;
  const std::size_t n = text.size();
  std::size_t i = 0;
  std::size_t next_token = 0;
  auto close = [&](std::size_t start, std::size_t end) {
    SentenceSpan span{start, end, next_token, next_token};
    while (span.token_end < tokens.size() && tokens[span.token_end].end <= end) {
      ++span.token_end;
    }
    next_token = span.token_end;
    sentences.push_back(span);
  };
  while (i < n) {
    while (i < n && IsSpace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    std::size_t start = i;
    std::size_t end = n;
    for (; i < n; ++i) {
      if (IsTerminator(text[i]) &&
          (i + 1 == n || IsSpace(static_cast<unsigned char>(text[i + 1])))) {
        end = i + 1;
        break;
      }
    }
    if (end == n) {
      // Trim trailing whitespace of an unterminated final sentence.
      while (end > start && IsSpace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
      }
    }
    close(start, end);
    i = std::max(i, end);
  }
  return sentences;
}

std::vector<Mention> Link(std::string_view text, const Lexicon &lexicon) {
  return Link(text, Tokenize(text), lexicon);
}

std::vector<Mention> Link(std::string_view text,
                          const std::vector<Token> &tokens,
                          const Lexicon &lexicon) {
  std::vector<Mention> mentions;
  const std::size_t max_len = lexicon.max_surface_token_len();
  std::string key;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t longest = std::min(max_len, tokens.size() - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      key.clear();
      for (std::size_t j = i; j < i + len; ++j) {
        if (j > i) key.push_back(' ');
        AppendLower(key, tokens[j].text);
      }
      const std::vector<std::string> *cuis = lexicon.FindNormalized(key);
      if (cuis == nullptr) continue;
      Mention m;
      m.start = tokens[i].start;
      m.end = tokens[i + len - 1].end;
      m.surface = std::string(text.substr(m.start, m.end - m.start));
      m.candidates = *cuis;
      m.primary_cui = m.candidates.front();
      // The primary candidate is the first in priority order.
      m.score = 1.0;
      mentions.push_back(std::move(m));
      i += len;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return mentions;
}

nlohmann::json MentionsToJson(const std::string &doc_id,
                              const std::vector<Mention> &mentions) {
  nlohmann::json list = nlohmann::json::array();
  for (const Mention &m : mentions) {
    list.push_back({{"start", m.start},
                    {"end", m.end},
                    {"surface", m.surface},
                    {"candidates", m.candidates},
                    {"primary", m.primary_cui},
                    {"score", m.score}});
  }
  return {{"doc_id", doc_id}, {"mentions", std::move(list)}};
}

std::vector<Mention> MentionsFromJson(const nlohmann::json &record) {
  std::vector<Mention> mentions;
  try {
    for (const nlohmann::json &m : record.at("mentions")) {
      Mention mention;
      mention.start = m.at("start").get<std::size_t>();
      mention.end = m.at("end").get<std::size_t>();
      mention.surface = m.at("surface").get<std::string>();
      mention.candidates = m.at("candidates").get<std::vector<std::string>>();
      mention.primary_cui = m.at("primary").get<std::string>();
      mention.score = m.at("score").get<double>();
      if (mention.candidates.empty() ||
          mention.candidates.front() != mention.primary_cui ||
          mention.end <= mention.start) {
        throw Error(ErrorKind::kValidation, "inconsistent mention record");
      }
      mentions.push_back(std::move(mention));
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kParse, std::string("mention record: ") + e.what());
  }
  return mentions;
}

}  // namespace semnet
