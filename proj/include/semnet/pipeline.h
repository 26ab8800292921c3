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

#ifndef SEMNET_PIPELINE_H_
#define SEMNET_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "semnet/entity_linker.h"
#include "semnet/kb_store.h"
#include "semnet/relation_extractor.h"
#include "semnet/semantic_network.h"
#include "semnet/transe.h"

namespace semnet {

enum class ExtractorMode { kModel, kKbMatch };

std::string ExtractorModeName(ExtractorMode mode);
ExtractorMode ParseExtractorMode(const std::string &name);

struct PipelineOptions {
  ExtractorMode mode = ExtractorMode::kModel;
  std::size_t window = 30;
  double theta_rel = 0.5;
  bool enrich = true;
  bool fuse = true;
  double tau_lp = 0.8;
  // Negative means "number of extracted edges in the document".
  long m_cap = -1;

  void Validate() const;
  nlohmann::json ToJson() const;
  static PipelineOptions FromJson(const nlohmann::json &j);
};

// Intermediate artifacts of the per-document pipeline.
struct DocumentAnalysis {
  std::vector<Token> tokens;
  std::vector<SentenceSpan> sentences;
  std::vector<Mention> mentions;
  std::vector<CandidatePair> pairs;
  std::vector<Edge> edges;
};

// link -> extract -> build -> fuse -> enrich, over borrowed resources. The
// same object processes corpus documents and query cases.
class Pipeline {
 public:
  Pipeline(const Lexicon &lexicon, const TripleStore *kb,
           const ExtractorModel *extractor, const EmbeddingModel *embeddings,
           PipelineOptions options);

  DocumentAnalysis Analyze(const Document &doc) const;
  SemanticNetwork Process(const Document &doc) const;

  // Network post-processing shared with the `enrich` subcommand.
  SemanticNetwork Refine(SemanticNetwork net) const;

  const Lexicon &lexicon() const { return lexicon_; }
  const EmbeddingModel *embeddings() const { return embeddings_; }
  const PipelineOptions &options() const { return options_; }

 private:
  const Lexicon &lexicon_;
  const TripleStore *kb_;
  const ExtractorModel *extractor_;
  const EmbeddingModel *embeddings_;
  PipelineOptions options_;
};

// Distantly supervised training instances from a corpus.
std::vector<RelationInstance> BuildTrainingInstances(
    const std::vector<Document> &corpus, const Lexicon &lexicon,
    const TripleStore &kb, std::size_t window);

}  // namespace semnet

#endif  // SEMNET_PIPELINE_H_
