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

#ifndef SEMNET_RELATION_EXTRACTOR_H_
#define SEMNET_RELATION_EXTRACTOR_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "semnet/entity_linker.h"
#include "semnet/kb_store.h"
#include "semnet/semantic_network.h"

namespace semnet {

inline constexpr char kNoRelation[] = "NA";

// An ordered pair of distinct mentions within one sentence.
struct CandidatePair {
  std::string doc_id;
  Mention head;
  Mention tail;
  SentenceSpan sentence;
  // Half-open token range strictly between the two mentions.
  std::size_t between_begin = 0;
  std::size_t between_end = 0;
  std::size_t token_distance = 0;
};

// All ordered pairs of distinct mentions sharing a sentence with at most
// `window` tokens between them. Both orientations are emitted, in mention
// order.
std::vector<CandidatePair> GenerateCandidates(
    const std::string &doc_id, const std::vector<Mention> &mentions,
    const std::vector<SentenceSpan> &sentences,
    const std::vector<Token> &tokens, std::size_t window);

// Lexicographically smallest KB relation from head to tail, or "NA".
std::string DistantLabel(const CandidatePair &pair, const TripleStore &kb);

using FeatureBag = std::map<std::string, double>;

// bet:<token> for tokens between the mentions, dir:fwd|rev, a distance
// bucket, and the semantic types of both concepts (ht:, tt:).
FeatureBag Featurize(const CandidatePair &pair, const std::vector<Token> &tokens,
                     const Lexicon &lexicon);

struct RelationInstance {
  CandidatePair pair;
  std::string label;
  FeatureBag features;
};

struct ExtractorHyperparams {
  double learning_rate = 0.1;
  int epochs = 50;
  double l2 = 1e-4;
  std::uint64_t seed = 1;
};

// Sparse design row: (feature id, value).
using SparseRow = std::vector<std::pair<int, double>>;

// Multinomial logistic regression over sparse lexical features.
class ExtractorModel {
 public:
  ExtractorModel() = default;
  ExtractorModel(std::vector<std::string> labels,
                 std::map<std::string, int> vocab, Eigen::MatrixXd weights,
                 ExtractorHyperparams hyperparams);

  // Unknown features are dropped.
  SparseRow Encode(const FeatureBag &features) const;
  Eigen::VectorXd Scores(const SparseRow &row) const;
  Eigen::VectorXd Predict(const FeatureBag &features) const;

  const std::vector<std::string> &labels() const { return labels_; }
  const std::map<std::string, int> &vocab() const { return vocab_; }
  const Eigen::MatrixXd &weights() const { return weights_; }
  Eigen::MatrixXd &mutable_weights() { return weights_; }
  const ExtractorHyperparams &hyperparams() const { return hyperparams_; }

  nlohmann::json ToJson() const;
  static ExtractorModel FromJson(const nlohmann::json &j);
  void Save(const std::string &path) const;
  static ExtractorModel Load(const std::string &path);

 private:
  std::vector<std::string> labels_;  // "NA" first
  std::map<std::string, int> vocab_;
  Eigen::MatrixXd weights_;  // |labels| x |vocab|
  ExtractorHyperparams hyperparams_;
};

// Label set ("NA" first, then sorted relations) and feature vocabulary for a
// set of instances. Model weights start at zero.
ExtractorModel MakeUntrainedModel(const std::vector<RelationInstance> &instances,
                                  const ExtractorHyperparams &hyperparams);

struct EncodedInstance {
  SparseRow row;
  int label = 0;
};
std::vector<EncodedInstance> EncodeInstances(
    const ExtractorModel &model, const std::vector<RelationInstance> &instances);

// Mean cross-entropy plus (l2 / 2) * ||W||^2 and its gradient with respect to
// the weight matrix.
double ExtractorLoss(const Eigen::MatrixXd &weights,
                     const std::vector<EncodedInstance> &data, double l2,
                     Eigen::MatrixXd *gradient);

// Seeded SGD with per-epoch shuffling. Throws kTraining when there are no
// instances or every instance is labeled NA.
ExtractorModel TrainExtractor(const std::vector<RelationInstance> &instances,
                              const ExtractorHyperparams &hyperparams);

double TrainingAccuracy(const ExtractorModel &model,
                        const std::vector<RelationInstance> &instances);

// Edges for every pair whose argmax label is not NA and whose probability is
// at least theta. Self pairs (same CUI) never produce edges. The result is
// merged by (head, tail, relation).
std::vector<Edge> ExtractRelations(const std::vector<CandidatePair> &pairs,
                                   const std::vector<FeatureBag> &features,
                                   const ExtractorModel &model, double theta);

// One edge with confidence 0.5 per (pair, KB relation).
std::vector<Edge> KbMatchExtract(const std::vector<CandidatePair> &pairs,
                                 const TripleStore &kb);

inline constexpr double kKbMatchConfidence = 0.5;

}  // namespace semnet

#endif  // SEMNET_RELATION_EXTRACTOR_H_
