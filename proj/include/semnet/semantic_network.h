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

#ifndef SEMNET_SEMANTIC_NETWORK_H_
#define SEMNET_SEMANTIC_NETWORK_H_

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "semnet/entity_linker.h"
#include "semnet/kb_store.h"

namespace semnet {

class EmbeddingModel;

enum class Provenance { kExtracted, kPredicted, kFused };

std::string ProvenanceName(Provenance p);
Provenance ParseProvenance(const std::string &name);

struct Edge {
  std::string head;
  std::string tail;
  std::string relation;
  double confidence = 0.0;
  Provenance provenance = Provenance::kExtracted;

  bool operator==(const Edge &) const = default;
};

// Orders edges by (head, tail, relation).
bool EdgeKeyLess(const Edge &a, const Edge &b);

// Collapses edges sharing (head, tail, relation), keeping the highest
// confidence, and sorts the result by key.
std::vector<Edge> MergeEdges(std::vector<Edge> edges);

struct Node {
  std::string cui;
  std::string name;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  int weight = 0;

  bool operator==(const Node &) const = default;
};

// A document-level graph of concepts and typed, directed, confidence
// weighted relations. Every edge endpoint is a node and (head, tail,
// relation) is unique.
struct SemanticNetwork {
  std::string doc_id;
  std::map<std::string, Node> nodes;
  std::vector<Edge> edges;

  bool empty() const { return nodes.empty(); }
  bool HasEdge(const std::string &head, const std::string &tail,
               const std::string &relation) const;
  std::size_t CountEdges(Provenance p) const;

  // Throws kConsistency when an invariant is broken.
  void Validate() const;

  bool operator==(const SemanticNetwork &) const = default;
};

// One node per distinct primary CUI with aggregated spans; edges merged by
// key. An edge whose endpoint has no node throws kConsistency.
SemanticNetwork BuildNetwork(const std::string &doc_id,
                             const std::vector<Mention> &mentions,
                             const std::vector<Edge> &edges,
                             const Lexicon &lexicon);

// Noisy-OR: 1 - (1 - extracted)(1 - predicted).
double FuseConfidence(double extracted, double predicted);

// Replaces the confidence of every extracted edge the model can score with
// the noisy-OR of its confidence and the model's plausibility, marking it
// fused.
SemanticNetwork FuseNetwork(SemanticNetwork net, const EmbeddingModel &model);

// Adds up to max_new predicted edges between existing nodes whose
// plausibility is at least threshold, best first. Existing edges and the
// node set are left untouched.
SemanticNetwork EnrichNetwork(SemanticNetwork net, const EmbeddingModel &model,
                              double threshold, std::size_t max_new);

nlohmann::json EdgeToJson(const Edge &e);
Edge EdgeFromJson(const nlohmann::json &j);

nlohmann::json NetworkToJson(const SemanticNetwork &net);
SemanticNetwork NetworkFromJson(const nlohmann::json &j);

// Edge JSONL record: {"doc_id": ..., "edges": [...]}.
nlohmann::json EdgesToJson(const std::string &doc_id,
                           const std::vector<Edge> &edges);

}  // namespace semnet

#endif  // SEMNET_SEMANTIC_NETWORK_H_
