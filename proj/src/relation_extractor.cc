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

#include "semnet/relation_extractor.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "semnet/errors.h"
#include "semnet/linalg.h"
#include "semnet/random.h"
#include "semnet/text.h"

namespace semnet {

namespace {

constexpr int kFormatVersion = 1;

// Token index range [begin, end) covered by a mention.
std::pair<std::size_t, std::size_t> TokenRange(const Mention &m,
                                               const std::vector<Token> &tokens) {
  auto first = std::lower_bound(
      tokens.begin(), tokens.end(), m.start,
      [](const Token &t, std::size_t offset) { return t.start < offset; });
  auto last = std::lower_bound(
      first, tokens.end(), m.end,
      [](const Token &t, std::size_t offset) { return t.end < offset; });
  if (first == tokens.end() || first->start != m.start || last == tokens.end() ||
      last->end != m.end) {
    throw Error(ErrorKind::kConsistency,
                "mention [" + std::to_string(m.start) + "," +
                    std::to_string(m.end) + ") is not aligned to tokens");
  }
  return {static_cast<std::size_t>(first - tokens.begin()),
          static_cast<std::size_t>(last - tokens.begin()) + 1};
}

std::string DistanceBucket(std::size_t distance) {
  if (distance <= 2) return "dist:0-2";
  if (distance <= 5) return "dist:3-5";
  return "dist:6+";
}

std::string SemanticType(const Lexicon &lexicon, const std::string &cui) {
  const Concept *c = lexicon.Find(cui);
  return c && !c->semantic_type.empty() ? c->semantic_type : "unknown";
}

}  // namespace

std::vector<CandidatePair> GenerateCandidates(
    const std::string &doc_id, const std::vector<Mention> &mentions,
    const std::vector<SentenceSpan> &sentences,
    const std::vector<Token> &tokens, std::size_t window) {
  std::vector<CandidatePair> pairs;
  for (const SentenceSpan &sentence : sentences) {
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < mentions.size(); ++i) {
      if (mentions[i].start >= sentence.start && mentions[i].end <= sentence.end) {
        inside.push_back(i);
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (std::size_t i : inside) ranges.push_back(TokenRange(mentions[i], tokens));
    for (std::size_t a = 0; a < inside.size(); ++a) {
      for (std::size_t b = 0; b < inside.size(); ++b) {
        if (a == b) continue;
        const Mention &head = mentions[inside[a]];
        const Mention &tail = mentions[inside[b]];
        if (head.start == tail.start) continue;
        const auto &first = head.start < tail.start ? ranges[a] : ranges[b];
        const auto &second = head.start < tail.start ? ranges[b] : ranges[a];
        const std::size_t distance = second.first - first.second;
        if (distance > window) continue;
        pairs.push_back(CandidatePair{doc_id, head, tail, sentence, first.second,
                                      second.first, distance});
      }
    }
  }
  return pairs;
}

std::string DistantLabel(const CandidatePair &pair, const TripleStore &kb) {
  const std::set<std::string> &rels =
      kb.RelationsBetween(pair.head.primary_cui, pair.tail.primary_cui);
  return rels.empty() ? std::string(kNoRelation) : *rels.begin();
}

FeatureBag Featurize(const CandidatePair &pair, const std::vector<Token> &tokens,
                     const Lexicon &lexicon) {
  FeatureBag features;
  for (std::size_t i = pair.between_begin; i < pair.between_end; ++i) {
    features["bet:" + NormalizeSurface(tokens[i].text)] += 1.0;
  }
  features[pair.head.start < pair.tail.start ? "dir:fwd" : "dir:rev"] = 1.0;
  features[DistanceBucket(pair.token_distance)] = 1.0;
  features["ht:" + SemanticType(lexicon, pair.head.primary_cui)] += 1.0;
  features["tt:" + SemanticType(lexicon, pair.tail.primary_cui)] += 1.0;
  return features;
}

ExtractorModel::ExtractorModel(std::vector<std::string> labels,
                               std::map<std::string, int> vocab,
                               Eigen::MatrixXd weights,
                               ExtractorHyperparams hyperparams)
    : labels_(std::move(labels)),
      vocab_(std::move(vocab)),
      weights_(std::move(weights)),
      hyperparams_(hyperparams) {
  if (weights_.rows() != static_cast<Eigen::Index>(labels_.size()) ||
      weights_.cols() != static_cast<Eigen::Index>(vocab_.size())) {
    throw Error(ErrorKind::kConsistency, "extractor weight shape mismatch");
  }
}

SparseRow ExtractorModel::Encode(const FeatureBag &features) const {
  SparseRow row;
  row.reserve(features.size());
  for (const auto &[name, value] : features) {
    auto it = vocab_.find(name);
    if (it != vocab_.end()) row.emplace_back(it->second, value);
  }
  return row;
}

Eigen::VectorXd ExtractorModel::Scores(const SparseRow &row) const {
  Eigen::VectorXd logits = Eigen::VectorXd::Zero(weights_.rows());
  for (const auto &[id, value] : row) logits += weights_.col(id) * value;
  return logits;
}

Eigen::VectorXd ExtractorModel::Predict(const FeatureBag &features) const {
  return Softmax(Scores(Encode(features)));
}

nlohmann::json ExtractorModel::ToJson() const {
  std::vector<std::string> names(vocab_.size());
  for (const auto &[name, id] : vocab_) names[static_cast<std::size_t>(id)] = name;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < weights_.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(weights_.cols()));
    for (Eigen::Index c = 0; c < weights_.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = weights_(r, c);
    }
    rows.push_back(std::move(row));
  }
  return {{"format", "semnet-extractor"},
          {"version", kFormatVersion},
          {"labels", labels_},
          {"features", names},
          {"weights", std::move(rows)},
          {"hyperparams",
           {{"learning_rate", hyperparams_.learning_rate},
            {"epochs", hyperparams_.epochs},
            {"l2", hyperparams_.l2},
            {"seed", hyperparams_.seed}}}};
}

ExtractorModel ExtractorModel::FromJson(const nlohmann::json &j) {
  try {
    if (j.at("format").get<std::string>() != "semnet-extractor") {
      throw Error(ErrorKind::kFormat, "not an extractor model file");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorKind::kFormat, "unsupported extractor model version");
    }
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<std::string> names = j.at("features").get<std::vector<std::string>>();
    std::map<std::string, int> vocab;
    for (std::size_t i = 0; i < names.size(); ++i) {
      vocab.emplace(names[i], static_cast<int>(i));
    }
    Eigen::MatrixXd weights(static_cast<Eigen::Index>(labels.size()),
                            static_cast<Eigen::Index>(names.size()));
    const nlohmann::json &rows = j.at("weights");
    if (rows.size() != labels.size()) {
      throw Error(ErrorKind::kFormat, "extractor weight rows do not match labels");
    }
    for (std::size_t r = 0; r < labels.size(); ++r) {
      std::vector<double> row = rows[r].get<std::vector<double>>();
      if (row.size() != names.size()) {
        throw Error(ErrorKind::kFormat, "extractor weight row has wrong width");
      }
      for (std::size_t c = 0; c < row.size(); ++c) {
        weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
      }
    }
    const nlohmann::json &h = j.at("hyperparams");
    ExtractorHyperparams hp;
    hp.learning_rate = h.at("learning_rate").get<double>();
    hp.epochs = h.at("epochs").get<int>();
    hp.l2 = h.at("l2").get<double>();
    hp.seed = h.at("seed").get<std::uint64_t>();
    return ExtractorModel(std::move(labels), std::move(vocab), std::move(weights), hp);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kFormat, std::string("extractor model: ") + e.what());
  }
}

void ExtractorModel::Save(const std::string &path) const {
  WriteFile(path, ToJson().dump() + "\n");
}

ExtractorModel ExtractorModel::Load(const std::string &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(ErrorKind::kFormat, path + ": " + e.what());
  }
  return FromJson(j);
}

ExtractorModel MakeUntrainedModel(const std::vector<RelationInstance> &instances,
                                  const ExtractorHyperparams &hyperparams) {
  std::set<std::string> relation_labels;
  std::set<std::string> feature_names;
  for (const RelationInstance &inst : instances) {
    if (inst.label != kNoRelation) relation_labels.insert(inst.label);
    for (const auto &[name, value] : inst.features) feature_names.insert(name);
  }
  std::vector<std::string> labels{kNoRelation};
  labels.insert(labels.end(), relation_labels.begin(), relation_labels.end());
  std::map<std::string, int> vocab;
  for (const std::string &name : feature_names) {
    vocab.emplace(name, static_cast<int>(vocab.size()));
  }
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(labels.size()),
      static_cast<Eigen::Index>(vocab.size()));
  return ExtractorModel(std::move(labels), std::move(vocab), std::move(weights),
                        hyperparams);
}

std::vector<EncodedInstance> EncodeInstances(
    const ExtractorModel &model, const std::vector<RelationInstance> &instances) {
  std::vector<EncodedInstance> data;
  data.reserve(instances.size());
  const std::vector<std::string> &labels = model.labels();
  for (const RelationInstance &inst : instances) {
    auto it = std::find(labels.begin(), labels.end(), inst.label);
    if (it == labels.end()) {
      throw Error(ErrorKind::kValidation, "label '" + inst.label +
                                              "' is not known to the model");
    }
    data.push_back({model.Encode(inst.features),
                    static_cast<int>(it - labels.begin())});
  }
  return data;
}

double ExtractorLoss(const Eigen::MatrixXd &weights,
                     const std::vector<EncodedInstance> &data, double l2,
                     Eigen::MatrixXd *gradient) {
  if (gradient) gradient->setZero(weights.rows(), weights.cols());
  double loss = 0.0;
  for (const EncodedInstance &inst : data) {
    Eigen::VectorXd logits = Eigen::VectorXd::Zero(weights.rows());
    for (const auto &[id, value] : inst.row) logits += weights.col(id) * value;
    const double max_logit = logits.maxCoeff();
    const double log_z =
        max_logit + std::log((logits.array() - max_logit).exp().sum());
    loss += log_z - logits(inst.label);
    if (gradient) {
      Eigen::VectorXd residual = (logits.array() - log_z).exp().matrix();
      residual(inst.label) -= 1.0;
      for (const auto &[id, value] : inst.row) {
        gradient->col(id) += residual * value;
      }
    }
  }
  const double n = data.empty() ? 1.0 : static_cast<double>(data.size());
  loss = loss / n + 0.5 * l2 * weights.squaredNorm();
  if (gradient) *gradient = *gradient / n + l2 * weights;
  return loss;
}

ExtractorModel TrainExtractor(const std::vector<RelationInstance> &instances,
                              const ExtractorHyperparams &hyperparams) {
  if (instances.empty()) throw Error(ErrorKind::kTraining, "no training instances");
  if (std::none_of(instances.begin(), instances.end(),
                   [](const RelationInstance &i) { return i.label != kNoRelation; })) {
    throw Error(ErrorKind::kTraining, "no positive relations");
  }
  ExtractorModel model = MakeUntrainedModel(instances, hyperparams);
  std::vector<EncodedInstance> data = EncodeInstances(model, instances);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(hyperparams.seed);
  Eigen::MatrixXd &w = model.mutable_weights();
  const double lr = hyperparams.learning_rate;
  const double decay = 1.0 - lr * hyperparams.l2;
  for (int epoch = 0; epoch < hyperparams.epochs; ++epoch) {
    rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t idx : order) {
      const EncodedInstance &inst = data[idx];
      Eigen::VectorXd residual = Softmax(model.Scores(inst.row));
      residual(inst.label) -= 1.0;
      if (decay != 1.0) w *= decay;
      for (const auto &[id, value] : inst.row) w.col(id) -= lr * value * residual;
    }
  }
  return model;
}

double TrainingAccuracy(const ExtractorModel &model,
                        const std::vector<RelationInstance> &instances) {
  if (instances.empty()) return 0.0;
  std::size_t correct = 0;
  for (const RelationInstance &inst : instances) {
    Eigen::Index best;
    model.Predict(inst.features).maxCoeff(&best);
    correct += model.labels()[static_cast<std::size_t>(best)] == inst.label;
  }
  return static_cast<double>(correct) / static_cast<double>(instances.size());
}

std::vector<Edge> ExtractRelations(const std::vector<CandidatePair> &pairs,
                                   const std::vector<FeatureBag> &features,
                                   const ExtractorModel &model, double theta) {
  if (pairs.size() != features.size()) {
    throw Error(ErrorKind::kConsistency, "pairs and features differ in length");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const CandidatePair &pair = pairs[i];
    if (pair.head.primary_cui == pair.tail.primary_cui) continue;
    Eigen::VectorXd p = model.Predict(features[i]);
    Eigen::Index best;
    const double prob = p.maxCoeff(&best);
    const std::string &label = model.labels()[static_cast<std::size_t>(best)];
    if (label == kNoRelation || prob < theta) continue;
    edges.push_back(Edge{pair.head.primary_cui, pair.tail.primary_cui, label,
                         prob, Provenance::kExtracted});
  }
  return MergeEdges(std::move(edges));
}

std::vector<Edge> KbMatchExtract(const std::vector<CandidatePair> &pairs,
                                 const TripleStore &kb) {
  std::vector<Edge> edges;
  for (const CandidatePair &pair : pairs) {
    for (const std::string &rel :
         kb.RelationsBetween(pair.head.primary_cui, pair.tail.primary_cui)) {
      edges.push_back(Edge{pair.head.primary_cui, pair.tail.primary_cui, rel,
                           kKbMatchConfidence, Provenance::kExtracted});
    }
  }
  return MergeEdges(std::move(edges));
}

}  // namespace semnet
