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

#ifndef SEMNET_TRANSE_H_
#define SEMNET_TRANSE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "semnet/kb_store.h"
#include "semnet/linalg.h"

namespace semnet {

struct TransEConfig {
  int dim = 50;
  double margin = 1.0;
  double learning_rate = 0.01;
  int epochs = 100;
  Distance distance = Distance::kL1;
  std::uint64_t seed = 1;

  // Throws kConfig when a field is out of range.
  void Validate() const;
};

// Translational embeddings: a fact (h, r, t) is plausible when
// vec(h) + vec(r) is close to vec(t). Vectors are stored column-wise.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  // Seeded uniform initialization in [-6/sqrt(dim), 6/sqrt(dim)]; entity
  // vectors are then L2-normalized. Entities and relations are laid out in
  // sorted order.
  static EmbeddingModel Init(const std::set<std::string> &entities,
                             const std::set<std::string> &relations,
                             const TransEConfig &config);

  // Builds a model from explicit vectors (used by tools and tests).
  static EmbeddingModel FromVectors(
      const std::map<std::string, Eigen::VectorXd> &entities,
      const std::map<std::string, Eigen::VectorXd> &relations,
      const TransEConfig &config);

  bool HasEntity(const std::string &cui) const {
    return entity_ids_.count(cui) != 0;
  }
  bool HasRelation(const std::string &label) const {
    return relation_ids_.count(label) != 0;
  }
  // Throws kLookup naming the identifier when unknown.
  int EntityId(const std::string &cui) const;
  int RelationId(const std::string &label) const;

  auto Entity(int id) const { return entities_.col(id); }
  auto Entity(int id) { return entities_.col(id); }
  auto Relation(int id) const { return relations_.col(id); }
  auto Relation(int id) { return relations_.col(id); }

  double Dissimilarity(int h, int r, int t) const;
  double Dissimilarity(const std::string &h, const std::string &r,
                       const std::string &t) const;
  // exp(-dissimilarity), in (0, 1].
  double Plausibility(const std::string &h, const std::string &r,
                      const std::string &t) const;

  void NormalizeEntities();

  int dim() const { return config_.dim; }
  const TransEConfig &config() const { return config_; }
  const std::vector<std::string> &entity_names() const { return entity_names_; }
  const std::vector<std::string> &relation_names() const {
    return relation_names_;
  }
  const Eigen::MatrixXd &entity_matrix() const { return entities_; }
  const Eigen::MatrixXd &relation_matrix() const { return relations_; }

  nlohmann::json ToJson() const;
  static EmbeddingModel FromJson(const nlohmann::json &j);
  void Save(const std::string &path) const;
  static EmbeddingModel Load(const std::string &path);

  bool operator==(const EmbeddingModel &other) const;

 private:
  void SetNames(std::vector<std::string> entities,
                std::vector<std::string> relations);

  TransEConfig config_;
  std::vector<std::string> entity_names_;
  std::vector<std::string> relation_names_;
  std::map<std::string, int> entity_ids_;
  std::map<std::string, int> relation_ids_;
  Eigen::MatrixXd entities_;   // dim x |E|
  Eigen::MatrixXd relations_;  // dim x |R|
};

double Plausibility(double dissimilarity);

struct IdTriple {
  int head = 0;
  int relation = 0;
  int tail = 0;
};

// Hinge loss max(0, margin + d(positive) - d(corrupted)).
double MarginLoss(const EmbeddingModel &model, const IdTriple &positive,
                  const IdTriple &corrupted);

// Gradient of MarginLoss with respect to every parameter vector it touches,
// accumulated per entity and per relation id. Empty when the hinge is
// inactive.
struct MarginGradient {
  std::map<int, Eigen::VectorXd> entities;
  std::map<int, Eigen::VectorXd> relations;
};
MarginGradient MarginLossGradient(const EmbeddingModel &model,
                                  const IdTriple &positive,
                                  const IdTriple &corrupted);

struct TrainReport {
  // Mean hinge loss per epoch, measured before each update.
  std::vector<double> epoch_loss;
  // Largest |norm - 1| over entity vectors after each epoch.
  std::vector<double> max_norm_deviation;
  std::size_t skipped_corruptions = 0;
};

// Seeded SGD over the store with Bernoulli head/tail corruption that rejects
// corruptions which are themselves facts in the store. Entities must cover
// every triple in the store.
EmbeddingModel Train(EmbeddingModel model, const TripleStore &kb,
                     const TransEConfig &config, TrainReport *report = nullptr);

struct RankedEntity {
  std::string cui;
  double dissimilarity = 0.0;
};

// Ascending by dissimilarity, ties broken by CUI. With a filter, candidates
// t' != true_tail such that (h, r, t') is in the filter store are dropped.
std::vector<RankedEntity> RankTails(const EmbeddingModel &model,
                                    const std::string &head,
                                    const std::string &relation,
                                    const std::vector<std::string> &candidates,
                                    const TripleStore *filter = nullptr,
                                    const std::string *true_tail = nullptr);

std::vector<RankedEntity> RankHeads(const EmbeddingModel &model,
                                    const std::string &relation,
                                    const std::string &tail,
                                    const std::vector<std::string> &candidates,
                                    const TripleStore *filter = nullptr,
                                    const std::string *true_head = nullptr);

struct RankingMetrics {
  double mean_rank = 0.0;
  double hits_at_1 = 0.0;
  double hits_at_3 = 0.0;
  double hits_at_10 = 0.0;
};

struct LinkPredictionReport {
  RankingMetrics raw;
  RankingMetrics filtered;
  std::size_t rankings = 0;
};

// Ranks the true head and the true tail of every test triple among all model
// entities. Unknown identifiers throw kLookup.
LinkPredictionReport EvaluateLinkPrediction(const EmbeddingModel &model,
                                            const std::vector<Triple> &test,
                                            const TripleStore &kb);

nlohmann::json ToJson(const LinkPredictionReport &report);

std::string DistanceName(Distance d);
Distance ParseDistance(const std::string &name);

}  // namespace semnet

#endif  // SEMNET_TRANSE_H_
