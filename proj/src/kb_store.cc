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

#include "semnet/kb_store.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "semnet/errors.h"
#include "semnet/text.h"

namespace semnet {

namespace {

bool SkipLine(std::string_view line) {
  return line.empty() || line.front() == '#';
}

std::string LineRef(std::size_t line_number) {
  return "line " + std::to_string(line_number);
}

std::ifstream OpenOrThrow(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return in;
}

}  // namespace

Lexicon Lexicon::Parse(std::istream &in) {
  Lexicon lexicon;
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = StripCarriageReturn(raw);
    if (SkipLine(line)) continue;
    std::vector<std::string> fields = SplitFields(line, '\t');
    if (fields.size() != 4) {
      throw Error(ErrorKind::kParse,
                  LineRef(line_number) + ": expected 4 tab-separated columns, got " +
                      std::to_string(fields.size()));
    }
    Concept c;
    c.cui = fields[0];
    c.preferred_name = fields[1];
    if (!fields[2].empty()) c.synonyms = SplitFields(fields[2], '|');
    c.semantic_type = fields[3];
    lexicon.AddConcept(std::move(c), line_number);
  }
  return lexicon;
}

Lexicon Lexicon::Load(const std::string &path) {
  std::ifstream in = OpenOrThrow(path);
  return Parse(in);
}

void Lexicon::AddConcept(Concept c, std::size_t line_number) {
  if (c.cui.empty()) {
    throw Error(ErrorKind::kValidation, LineRef(line_number) + ": empty CUI");
  }
  if (NormalizeSurface(c.preferred_name).empty()) {
    throw Error(ErrorKind::kValidation,
                LineRef(line_number) + ": concept " + c.cui +
                    " has an empty preferred name");
  }

  auto it = concepts_.find(c.cui);
  if (it != concepts_.end() && it->second.preferred_name != c.preferred_name) {
    throw Error(ErrorKind::kValidation,
                LineRef(line_number) + ": concept " + c.cui +
                    " redeclared with preferred name '" + c.preferred_name +
                    "' (was '" + it->second.preferred_name + "')");
  }
  Concept &entry = it != concepts_.end()
                       ? it->second
                       : concepts_.emplace(c.cui, Concept{c.cui, c.preferred_name,
                                                          {}, c.semantic_type})
                             .first->second;

  std::set<std::string> seen;
  for (const std::string &s : entry.synonyms) seen.insert(NormalizeSurface(s));
  for (std::string &s : c.synonyms) {
    std::string key = NormalizeSurface(s);
    if (key.empty() || !seen.insert(key).second) continue;
    entry.synonyms.push_back(std::move(s));
  }

  Index(entry.preferred_name, entry.cui);
  for (const std::string &s : entry.synonyms) Index(s, entry.cui);
}

void Lexicon::Index(const std::string &surface, const std::string &cui) {
  std::string key = NormalizeSurface(surface);
  if (key.empty()) return;
  std::vector<std::string> &cuis = surface_index_[key];
  if (std::find(cuis.begin(), cuis.end(), cui) == cuis.end()) {
    cuis.push_back(cui);
  }
  max_surface_token_len_ =
      std::max(max_surface_token_len_, CountNormalizedTokens(key));
}

const std::vector<std::string> &Lexicon::Lookup(std::string_view surface) const {
  static const std::vector<std::string> kEmpty;
  const std::vector<std::string> *hit = FindNormalized(NormalizeSurface(surface));
  return hit ? *hit : kEmpty;
}

const std::vector<std::string> *Lexicon::FindNormalized(
    const std::string &key) const {
  auto it = surface_index_.find(key);
  return it == surface_index_.end() ? nullptr : &it->second;
}

const Concept *Lexicon::Find(const std::string &cui) const {
  auto it = concepts_.find(cui);
  return it == concepts_.end() ? nullptr : &it->second;
}

const Concept &Lexicon::Get(const std::string &cui) const {
  const Concept *c = Find(cui);
  if (c == nullptr) throw Error(ErrorKind::kLookup, "unknown concept " + cui);
  return *c;
}

TripleStore TripleStore::Parse(std::istream &in) {
  TripleStore store;
  std::set<std::string> declared;
  bool has_declaration = false;
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = StripCarriageReturn(raw);
    if (line.rfind("# relations:", 0) == 0) {
      has_declaration = true;
      std::istringstream labels{std::string(line.substr(12))};
      std::string label;
      while (labels >> label) declared.insert(label);
      continue;
    }
    if (SkipLine(line)) continue;
    std::vector<std::string> fields = SplitFields(line, '\t');
    if (fields.size() != 3) {
      throw Error(ErrorKind::kParse,
                  LineRef(line_number) + ": expected 3 tab-separated columns, got " +
                      std::to_string(fields.size()));
    }
    Triple t{fields[0], fields[1], fields[2]};
    if (t.head.empty() || t.relation.empty() || t.tail.empty()) {
      throw Error(ErrorKind::kParse, LineRef(line_number) + ": empty field");
    }
    if (t.head == t.tail) {
      throw Error(ErrorKind::kValidation,
                  LineRef(line_number) + ": self-loop triple on " + t.head);
    }
    if (has_declaration && declared.count(t.relation) == 0) {
      throw Error(ErrorKind::kValidation,
                  LineRef(line_number) + ": relation '" + t.relation +
                      "' is not in the declared inventory");
    }
    store.Add(t);
  }
  return store;
}

TripleStore TripleStore::Load(const std::string &path) {
  std::ifstream in = OpenOrThrow(path);
  return Parse(in);
}

TripleStore TripleStore::FromTriples(const std::vector<Triple> &triples) {
  TripleStore store;
  for (const Triple &t : triples) store.Add(t);
  return store;
}

bool TripleStore::Add(const Triple &t) {
  if (t.head == t.tail) {
    throw Error(ErrorKind::kValidation, "self-loop triple on " + t.head);
  }
  if (!triples_.insert(t).second) return false;
  by_pair_[{t.head, t.tail}].insert(t.relation);
  auto pos = std::lower_bound(relations_.begin(), relations_.end(), t.relation);
  if (pos == relations_.end() || *pos != t.relation) {
    relations_.insert(pos, t.relation);
  }
  entities_.insert(t.head);
  entities_.insert(t.tail);
  return true;
}

bool TripleStore::Contains(const std::string &h, const std::string &r,
                           const std::string &t) const {
  return triples_.count(Triple{h, r, t}) != 0;
}

const std::set<std::string> &TripleStore::RelationsBetween(
    const std::string &head, const std::string &tail) const {
  static const std::set<std::string> kEmpty;
  auto it = by_pair_.find({head, tail});
  return it == by_pair_.end() ? kEmpty : it->second;
}

std::vector<Document> ParseCorpus(std::istream &in) {
  std::vector<Document> docs;
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = StripCarriageReturn(raw);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw Error(ErrorKind::kParse, LineRef(line_number) + ": " + e.what());
    }
    auto field = [&](const char *name, bool required) -> std::string {
      auto it = obj.find(name);
      if (it == obj.end()) {
        if (required) {
          throw Error(ErrorKind::kParse, LineRef(line_number) +
                                             ": missing field '" + name + "'");
        }
        return {};
      }
      if (!it->is_string()) {
        throw Error(ErrorKind::kParse, LineRef(line_number) + ": field '" +
                                           name + "' is not a string");
      }
      return it->get<std::string>();
    };
    if (!obj.is_object()) {
      throw Error(ErrorKind::kParse, LineRef(line_number) + ": not an object");
    }
    docs.push_back(Document{field("id", true), field("title", false),
                            field("text", true)});
  }
  return docs;
}

std::vector<Document> LoadCorpus(const std::string &path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseCorpus(in);
}

}  // namespace semnet
