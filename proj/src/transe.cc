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

#include "semnet/transe.h"

#include <algorithm>
#include <cmath>

#include "semnet/errors.h"
#include "semnet/random.h"
#include "semnet/text.h"

namespace semnet {

namespace {

constexpr int kFormatVersion = 1;
constexpr int kMaxCorruptionAttempts = 100;

}  // namespace

std::string DistanceName(Distance d) { return d == Distance::kL1 ? "l1" : "l2"; }

Distance ParseDistance(const std::string &name) {
  if (name == "l1" || name == "L1") return Distance::kL1;
  if (name == "l2" || name == "L2") return Distance::kL2;
  throw Error(ErrorKind::kConfig, "unknown distance '" + name + "'");
}

void TransEConfig::Validate() const {
  if (dim < 1) throw Error(ErrorKind::kConfig, "dim must be >= 1");
  if (!(margin > 0)) throw Error(ErrorKind::kConfig, "margin must be > 0");
  if (!(learning_rate > 0)) {
    throw Error(ErrorKind::kConfig, "learning rate must be > 0");
  }
  if (epochs < 0) throw Error(ErrorKind::kConfig, "epochs must be >= 0");
}

void EmbeddingModel::SetNames(std::vector<std::string> entities,
                              std::vector<std::string> relations) {
  entity_names_ = std::move(entities);
  relation_names_ = std::move(relations);
  entity_ids_.clear();
  relation_ids_.clear();
  for (std::size_t i = 0; i < entity_names_.size(); ++i) {
    entity_ids_.emplace(entity_names_[i], static_cast<int>(i));
  }
  for (std::size_t i = 0; i < relation_names_.size(); ++i) {
    relation_ids_.emplace(relation_names_[i], static_cast<int>(i));
  }
}

EmbeddingModel EmbeddingModel::Init(const std::set<std::string> &entities,
                                    const std::set<std::string> &relations,
                                    const TransEConfig &config) {
  config.Validate();
  if (entities.empty()) throw Error(ErrorKind::kConfig, "empty entity set");
  if (relations.empty()) throw Error(ErrorKind::kConfig, "empty relation set");

  EmbeddingModel model;
  model.config_ = config;
  model.SetNames({entities.begin(), entities.end()},
                 {relations.begin(), relations.end()});
  const double bound = 6.0 / std::sqrt(static_cast<double>(config.dim));
  Rng rng(config.seed);
  model.entities_.resize(config.dim, static_cast<Eigen::Index>(entities.size()));
  model.relations_.resize(config.dim,
                          static_cast<Eigen::Index>(relations.size()));
  for (Eigen::Index c = 0; c < model.entities_.cols(); ++c) {
    for (Eigen::Index r = 0; r < config.dim; ++r) {
      model.entities_(r, c) = rng.Uniform(-bound, bound);
    }
  }
  for (Eigen::Index c = 0; c < model.relations_.cols(); ++c) {
    for (Eigen::Index r = 0; r < config.dim; ++r) {
      model.relations_(r, c) = rng.Uniform(-bound, bound);
    }
  }
  model.NormalizeEntities();
  return model;
}

EmbeddingModel EmbeddingModel::FromVectors(
    const std::map<std::string, Eigen::VectorXd> &entities,
    const std::map<std::string, Eigen::VectorXd> &relations,
    const TransEConfig &config) {
  EmbeddingModel model;
  model.config_ = config;
  std::vector<std::string> e_names, r_names;
  for (const auto &[name, v] : entities) e_names.push_back(name);
  for (const auto &[name, v] : relations) r_names.push_back(name);
  model.SetNames(std::move(e_names), std::move(r_names));
  model.entities_.resize(config.dim, static_cast<Eigen::Index>(entities.size()));
  model.relations_.resize(config.dim,
                          static_cast<Eigen::Index>(relations.size()));
  int col = 0;
  for (const auto &[name, v] : entities) {
    if (v.size() != config.dim) {
      throw Error(ErrorKind::kConfig, "vector for " + name + " has wrong size");
    }
    model.entities_.col(col++) = v;
  }
  col = 0;
  for (const auto &[name, v] : relations) {
    if (v.size() != config.dim) {
      throw Error(ErrorKind::kConfig, "vector for " + name + " has wrong size");
    }
    model.relations_.col(col++) = v;
  }
  return model;
}

int EmbeddingModel::EntityId(const std::string &cui) const {
  auto it = entity_ids_.find(cui);
  if (it == entity_ids_.end()) {
    throw Error(ErrorKind::kLookup, "unknown entity " + cui);
  }
  return it->second;
}

int EmbeddingModel::RelationId(const std::string &label) const {
  auto it = relation_ids_.find(label);
  if (it == relation_ids_.end()) {
    throw Error(ErrorKind::kLookup, "unknown relation " + label);
  }
  return it->second;
}

double EmbeddingModel::Dissimilarity(int h, int r, int t) const {
  return NormOf(Entity(h) + Relation(r) - Entity(t), config_.distance);
}

double EmbeddingModel::Dissimilarity(const std::string &h, const std::string &r,
                                     const std::string &t) const {
  return Dissimilarity(EntityId(h), RelationId(r), EntityId(t));
}

double EmbeddingModel::Plausibility(const std::string &h, const std::string &r,
                                    const std::string &t) const {
  return semnet::Plausibility(Dissimilarity(h, r, t));
}

double Plausibility(double dissimilarity) { return std::exp(-dissimilarity); }

void EmbeddingModel::NormalizeEntities() {
  for (Eigen::Index c = 0; c < entities_.cols(); ++c) {
    const double n = entities_.col(c).norm();
    if (n > 0) entities_.col(c) /= n;
  }
}

bool EmbeddingModel::operator==(const EmbeddingModel &other) const {
  return entity_names_ == other.entity_names_ &&
         relation_names_ == other.relation_names_ &&
         config_.dim == other.config_.dim &&
         config_.distance == other.config_.distance &&
         entities_ == other.entities_ && relations_ == other.relations_;
}

nlohmann::json EmbeddingModel::ToJson() const {
  auto table = [](const std::vector<std::string> &names,
                  const Eigen::MatrixXd &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto col = m.col(static_cast<Eigen::Index>(i));
      rows.push_back({{"id", names[i]},
                      {"vector", std::vector<double>(col.data(),
                                                     col.data() + col.size())}});
    }
    return rows;
  };
  return {{"format", "semnet-transe"},
          {"version", kFormatVersion},
          {"config",
           {{"dim", config_.dim},
            {"margin", config_.margin},
            {"learning_rate", config_.learning_rate},
            {"epochs", config_.epochs},
            {"distance", DistanceName(config_.distance)},
            {"seed", config_.seed}}},
          {"entities", table(entity_names_, entities_)},
          {"relations", table(relation_names_, relations_)}};
}

EmbeddingModel EmbeddingModel::FromJson(const nlohmann::json &j) {
  try {
    if (j.at("format").get<std::string>() != "semnet-transe") {
      throw Error(ErrorKind::kFormat, "not a TransE model file");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorKind::kFormat, "unsupported TransE model version " +
                                          j.at("version").dump());
    }
    const nlohmann::json &c = j.at("config");
    TransEConfig config;
    config.dim = c.at("dim").get<int>();
    config.margin = c.at("margin").get<double>();
    config.learning_rate = c.at("learning_rate").get<double>();
    config.epochs = c.at("epochs").get<int>();
    config.distance = ParseDistance(c.at("distance").get<std::string>());
    config.seed = c.at("seed").get<std::uint64_t>();
    auto read = [&](const nlohmann::json &rows) {
      std::map<std::string, Eigen::VectorXd> out;
      for (const nlohmann::json &row : rows) {
        std::vector<double> v = row.at("vector").get<std::vector<double>>();
        out[row.at("id").get<std::string>()] =
            Eigen::Map<const Eigen::VectorXd>(v.data(),
                                              static_cast<Eigen::Index>(v.size()));
      }
      return out;
    };
    return FromVectors(read(j.at("entities")), read(j.at("relations")), config);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kFormat, std::string("TransE model: ") + e.what());
  }
}

void EmbeddingModel::Save(const std::string &path) const {
  WriteFile(path, ToJson().dump() + "\n");
}

EmbeddingModel EmbeddingModel::Load(const std::string &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(ErrorKind::kFormat, path + ": " + e.what());
  }
  return FromJson(j);
}

double MarginLoss(const EmbeddingModel &model, const IdTriple &positive,
                  const IdTriple &corrupted) {
  const double d_pos =
      model.Dissimilarity(positive.head, positive.relation, positive.tail);
  const double d_neg =
      model.Dissimilarity(corrupted.head, corrupted.relation, corrupted.tail);
  return std::max(0.0, model.config().margin + d_pos - d_neg);
}

MarginGradient MarginLossGradient(const EmbeddingModel &model,
                                  const IdTriple &positive,
                                  const IdTriple &corrupted) {
  MarginGradient grad;
  if (MarginLoss(model, positive, corrupted) <= 0.0) return grad;
  const Distance dist = model.config().distance;
  const int dim = model.dim();
  auto add = [dim](std::map<int, Eigen::VectorXd> &table, int id,
                   const Eigen::VectorXd &g) {
    auto [it, inserted] = table.try_emplace(id, Eigen::VectorXd::Zero(dim));
    it->second += g;
  };
  const Eigen::VectorXd g_pos = NormGradient(
      model.Entity(positive.head) + model.Relation(positive.relation) -
          model.Entity(positive.tail),
      dist);
  const Eigen::VectorXd g_neg = NormGradient(
      model.Entity(corrupted.head) + model.Relation(corrupted.relation) -
          model.Entity(corrupted.tail),
      dist);
  add(grad.entities, positive.head, g_pos);
  add(grad.relations, positive.relation, g_pos);
  add(grad.entities, positive.tail, -g_pos);
  add(grad.entities, corrupted.head, -g_neg);
  add(grad.relations, corrupted.relation, -g_neg);
  add(grad.entities, corrupted.tail, g_neg);
  return grad;
}

EmbeddingModel Train(EmbeddingModel model, const TripleStore &kb,
                     const TransEConfig &config, TrainReport *report) {
  config.Validate();
  std::vector<IdTriple> triples;
  triples.reserve(kb.size());
  for (const Triple &t : kb.triples()) {
    triples.push_back(IdTriple{model.EntityId(t.head),
                               model.RelationId(t.relation),
                               model.EntityId(t.tail)});
  }
  const std::vector<std::string> &names = model.entity_names();
  const std::uint64_t num_entities = names.size();
  const std::vector<std::string> &rel_names = model.relation_names();
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(std::span<IdTriple>(triples));
    double loss_sum = 0.0;
    std::size_t steps = 0;
    for (const IdTriple &pos : triples) {
      const bool corrupt_head = rng.Coin();
      IdTriple neg = pos;
      bool found = false;
      for (int attempt = 0; attempt < kMaxCorruptionAttempts; ++attempt) {
        const int e = static_cast<int>(rng.Below(num_entities));
        (corrupt_head ? neg.head : neg.tail) = e;
        if (neg.head == neg.tail) continue;
        if (!kb.Contains(names[neg.head], rel_names[neg.relation],
                         names[neg.tail])) {
          found = true;
          break;
        }
      }
      if (!found) {
        if (report) ++report->skipped_corruptions;
        continue;
      }
      loss_sum += MarginLoss(model, pos, neg);
      ++steps;
      MarginGradient grad = MarginLossGradient(model, pos, neg);
      for (const auto &[id, g] : grad.entities) {
        model.Entity(id) -= config.learning_rate * g;
      }
      for (const auto &[id, g] : grad.relations) {
        model.Relation(id) -= config.learning_rate * g;
      }
    }
    model.NormalizeEntities();
    if (report) {
      report->epoch_loss.push_back(steps ? loss_sum / steps : 0.0);
      double worst = 0.0;
      for (Eigen::Index c = 0; c < model.entity_matrix().cols(); ++c) {
        worst = std::max(worst, std::abs(model.entity_matrix().col(c).norm() - 1.0));
      }
      report->max_norm_deviation.push_back(worst);
    }
  }
  return model;
}

namespace {

void SortRanking(std::vector<RankedEntity> &ranked) {
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedEntity &a, const RankedEntity &b) {
              if (a.dissimilarity != b.dissimilarity) {
                return a.dissimilarity < b.dissimilarity;
              }
              return a.cui < b.cui;
            });
}

}  // namespace

std::vector<RankedEntity> RankTails(const EmbeddingModel &model,
                                    const std::string &head,
                                    const std::string &relation,
                                    const std::vector<std::string> &candidates,
                                    const TripleStore *filter,
                                    const std::string *true_tail) {
  const int h = model.EntityId(head);
  const int r = model.RelationId(relation);
  std::vector<RankedEntity> ranked;
  ranked.reserve(candidates.size());
  for (const std::string &c : candidates) {
    if (filter && !(true_tail && c == *true_tail) &&
        filter->Contains(head, relation, c)) {
      continue;
    }
    ranked.push_back({c, model.Dissimilarity(h, r, model.EntityId(c))});
  }
  SortRanking(ranked);
  return ranked;
}

std::vector<RankedEntity> RankHeads(const EmbeddingModel &model,
                                    const std::string &relation,
                                    const std::string &tail,
                                    const std::vector<std::string> &candidates,
                                    const TripleStore *filter,
                                    const std::string *true_head) {
  const int t = model.EntityId(tail);
  const int r = model.RelationId(relation);
  std::vector<RankedEntity> ranked;
  ranked.reserve(candidates.size());
  for (const std::string &c : candidates) {
    if (filter && !(true_head && c == *true_head) &&
        filter->Contains(c, relation, tail)) {
      continue;
    }
    ranked.push_back({c, model.Dissimilarity(model.EntityId(c), r, t)});
  }
  SortRanking(ranked);
  return ranked;
}

namespace {

std::size_t RankOf(const std::vector<RankedEntity> &ranked,
                   const std::string &cui) {
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].cui == cui) return i + 1;
  }
  return ranked.size() + 1;
}

struct RankAccumulator {
  double rank_sum = 0;
  double hits1 = 0, hits3 = 0, hits10 = 0;

  void Add(std::size_t rank) {
    rank_sum += static_cast<double>(rank);
    hits1 += rank <= 1;
    hits3 += rank <= 3;
    hits10 += rank <= 10;
  }

  RankingMetrics Finish(std::size_t n) const {
    const double d = static_cast<double>(n);
    return {rank_sum / d, hits1 / d, hits3 / d, hits10 / d};
  }
};

}  // namespace

LinkPredictionReport EvaluateLinkPrediction(const EmbeddingModel &model,
                                            const std::vector<Triple> &test,
                                            const TripleStore &kb) {
  if (test.empty()) throw Error(ErrorKind::kUsage, "empty test set");
  const std::vector<std::string> &all = model.entity_names();
  RankAccumulator raw, filtered;
  for (const Triple &t : test) {
    model.EntityId(t.head);
    model.EntityId(t.tail);
    model.RelationId(t.relation);
    raw.Add(RankOf(RankTails(model, t.head, t.relation, all), t.tail));
    filtered.Add(RankOf(
        RankTails(model, t.head, t.relation, all, &kb, &t.tail), t.tail));
    raw.Add(RankOf(RankHeads(model, t.relation, t.tail, all), t.head));
    filtered.Add(RankOf(
        RankHeads(model, t.relation, t.tail, all, &kb, &t.head), t.head));
  }
  LinkPredictionReport report;
  report.rankings = 2 * test.size();
  report.raw = raw.Finish(report.rankings);
  report.filtered = filtered.Finish(report.rankings);
  return report;
}

nlohmann::json ToJson(const LinkPredictionReport &report) {
  auto metrics = [](const RankingMetrics &m) {
    return nlohmann::json{{"mean_rank", m.mean_rank},
                          {"hits_at_1", m.hits_at_1},
                          {"hits_at_3", m.hits_at_3},
                          {"hits_at_10", m.hits_at_10}};
  };
  return {{"rankings", report.rankings},
          {"raw", metrics(report.raw)},
          {"filtered", metrics(report.filtered)}};
}

}  // namespace semnet
