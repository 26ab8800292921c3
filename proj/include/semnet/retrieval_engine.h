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

#ifndef SEMNET_RETRIEVAL_ENGINE_H_
#define SEMNET_RETRIEVAL_ENGINE_H_

#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "semnet/graph_similarity.h"
#include "semnet/kb_store.h"
#include "semnet/pipeline.h"
#include "semnet/semantic_network.h"

namespace semnet {

inline constexpr int kIndexVersion = 1;

// Document networks with their WL features, embeddings and concept
// postings. Immutable once built.
struct Index {
  int version = kIndexVersion;
  int iterations = 3;
  std::map<std::string, SemanticNetwork> networks;
  std::map<std::string, WlFeatureVector> wl_vectors;
  std::map<std::string, DocEmbedding> embeddings;
  LabelCompressor compressor;
  // CUI -> sorted doc ids.
  std::map<std::string, std::vector<std::string>> cui_postings;
  // Free-form description of how the index was produced (resource paths and
  // pipeline options) so queries can be processed the same way.
  nlohmann::json pipeline = nlohmann::json::object();

  std::size_t size() const { return networks.size(); }

  // Throws kConsistency when the doc-keyed maps or postings disagree.
  void Validate() const;

  std::string Serialize() const;
  static Index Deserialize(std::string_view data);
  void Save(const std::string &path) const;
  static Index Load(const std::string &path);
};

// Builds an index over ready-made networks, in the given order. Duplicate
// doc ids throw kIndexing.
Index BuildIndex(const std::vector<SemanticNetwork> &networks,
                 const EmbeddingModel *model, int iterations);

// Runs the pipeline over every document, then indexes the networks.
Index IndexCorpus(const std::vector<Document> &corpus, const Pipeline &pipeline,
                  int iterations);

struct SearchOptions {
  int k = 10;
  double lambda = 0.6;
  bool prune = false;
};

struct SearchResult {
  std::string doc_id;
  double score = 0.0;
  int rank = 0;

  bool operator==(const SearchResult &) const = default;
};

// Orders by (score desc, doc_id asc).
bool ResultLess(const SearchResult &a, const SearchResult &b);

// Scores candidates against a query network. With prune set only documents
// sharing a concept with the query are scored.
std::vector<SearchResult> Search(const Index &index, const SemanticNetwork &query,
                                 const EmbeddingModel *model,
                                 const SearchOptions &options);

std::vector<SearchResult> Search(const Index &index, const Pipeline &pipeline,
                                 std::string_view query_text,
                                 const SearchOptions &options);

struct CollectionEdge {
  std::string a;
  std::string b;
  double similarity = 0.0;

  bool operator==(const CollectionEdge &) const = default;
};

struct CollectionGraph {
  std::vector<CollectionEdge> edges;
};

// Scores every unordered document pair; keeps pairs with similarity >=
// threshold, ordered by (a, b).
CollectionGraph BuildCollectionGraph(const Index &index, double lambda,
                                     double threshold);

// Graphviz `graph` with label="<similarity to 3 decimals>" edge attributes.
std::string ToDot(const CollectionGraph &graph, const Index &index);

// Similarity between two indexed documents.
double DocumentSimilarity(const Index &index, const std::string &a,
                          const std::string &b, double lambda);

}  // namespace semnet

#endif  // SEMNET_RETRIEVAL_ENGINE_H_
