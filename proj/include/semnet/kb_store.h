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

#ifndef SEMNET_KB_STORE_H_
#define SEMNET_KB_STORE_H_

#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semnet {

struct Concept {
  std::string cui;
  std::string preferred_name;
  std::vector<std::string> synonyms;
  std::string semantic_type;
};

// Concept dictionary plus a normalized surface-form index. Immutable once
// loaded.
class Lexicon {
 public:
  Lexicon() = default;

  // Parses the lexicon TSV format:
  //   CUI <TAB> preferred_name <TAB> syn1|syn2|... <TAB> semantic_type
  // Blank lines and lines starting with '#' are skipped.
  static Lexicon Parse(std::istream &in);
  static Lexicon Load(const std::string &path);

  // Candidate CUIs for a surface, in priority (file) order. Empty when the
  // normalized surface is not indexed.
  const std::vector<std::string> &Lookup(std::string_view surface) const;

  // Same as Lookup() but the key must already be normalized.
  const std::vector<std::string> *FindNormalized(const std::string &key) const;

  const Concept *Find(const std::string &cui) const;
  const Concept &Get(const std::string &cui) const;

  const std::map<std::string, Concept> &concepts() const { return concepts_; }
  const std::unordered_map<std::string, std::vector<std::string>> &
  surface_index() const {
    return surface_index_;
  }
  std::size_t max_surface_token_len() const { return max_surface_token_len_; }
  std::size_t size() const { return concepts_.size(); }
  bool empty() const { return concepts_.empty(); }

 private:
  void AddConcept(Concept c, std::size_t line_number);
  void Index(const std::string &surface, const std::string &cui);

  std::map<std::string, Concept> concepts_;
  std::unordered_map<std::string, std::vector<std::string>> surface_index_;
  std::size_t max_surface_token_len_ = 0;
};

struct Triple {
  std::string head;
  std::string relation;
  std::string tail;

  auto operator<=>(const Triple &) const = default;
};

// Relation facts used for distant supervision, embedding training and
// knowledge-base matching.
class TripleStore {
 public:
  TripleStore() = default;

  // Parses the triple TSV format: head <TAB> relation <TAB> tail.
  // An optional header line "# relations: r1 r2 ..." declares a closed
  // relation inventory; other '#' lines are comments.
  static TripleStore Parse(std::istream &in);
  static TripleStore Load(const std::string &path);

  // Builds a store from in-memory triples; self-loops throw kValidation.
  static TripleStore FromTriples(const std::vector<Triple> &triples);

  // Adds a triple. Returns false for exact duplicates.
  bool Add(const Triple &t);

  bool Contains(const Triple &t) const { return triples_.count(t) != 0; }
  bool Contains(const std::string &h, const std::string &r,
                const std::string &t) const;

  // Relation labels linking head to tail, sorted. Empty if none.
  const std::set<std::string> &RelationsBetween(const std::string &head,
                                                const std::string &tail) const;

  const std::set<Triple> &triples() const { return triples_; }
  const std::map<std::pair<std::string, std::string>, std::set<std::string>> &
  by_pair() const {
    return by_pair_;
  }
  // Sorted, duplicate free.
  const std::vector<std::string> &relations() const { return relations_; }
  const std::set<std::string> &entities() const { return entities_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

 private:
  std::set<Triple> triples_;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> by_pair_;
  std::vector<std::string> relations_;
  std::set<std::string> entities_;
};

struct Document {
  std::string id;
  std::string title;
  std::string text;
};

// Reads corpus JSONL: one object per line with string fields id, title, text.
std::vector<Document> ParseCorpus(std::istream &in);
std::vector<Document> LoadCorpus(const std::string &path);

}  // namespace semnet

#endif  // SEMNET_KB_STORE_H_
