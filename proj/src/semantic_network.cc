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

#include "semnet/semantic_network.h"

#include <algorithm>
#include <tuple>

#include "semnet/errors.h"
#include "semnet/log.h"
#include "semnet/transe.h"

namespace semnet {

std::string ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kExtracted: return "extracted";
    case Provenance::kPredicted: return "predicted";
    case Provenance::kFused: return "fused";
  }
  return "extracted";
}

Provenance ParseProvenance(const std::string &name) {
  if (name == "extracted") return Provenance::kExtracted;
  if (name == "predicted") return Provenance::kPredicted;
  if (name == "fused") return Provenance::kFused;
  throw Error(ErrorKind::kParse, "unknown provenance '" + name + "'");
}

bool EdgeKeyLess(const Edge &a, const Edge &b) {
  return std::tie(a.head, a.tail, a.relation) <
         std::tie(b.head, b.tail, b.relation);
}

std::vector<Edge> MergeEdges(std::vector<Edge> edges) {
  std::stable_sort(edges.begin(), edges.end(), EdgeKeyLess);
  std::vector<Edge> merged;
  for (Edge &e : edges) {
    if (!merged.empty() && !EdgeKeyLess(merged.back(), e)) {
      if (e.confidence > merged.back().confidence) merged.back() = std::move(e);
      continue;
    }
    merged.push_back(std::move(e));
  }
  return merged;
}

bool SemanticNetwork::HasEdge(const std::string &head, const std::string &tail,
                              const std::string &relation) const {
  return std::any_of(edges.begin(), edges.end(), [&](const Edge &e) {
    return e.head == head && e.tail == tail && e.relation == relation;
  });
}

std::size_t SemanticNetwork::CountEdges(Provenance p) const {
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(),
      [p](const Edge &e) { return e.provenance == p; }));
}

void SemanticNetwork::Validate() const {
  for (const auto &[cui, node] : nodes) {
    if (cui != node.cui || node.weight < 1 ||
        node.weight != static_cast<int>(node.spans.size())) {
      throw Error(ErrorKind::kConsistency,
                  doc_id + ": malformed node " + cui);
    }
  }
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end(), EdgeKeyLess);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Edge &e = sorted[i];
    if (e.head == e.tail) {
      throw Error(ErrorKind::kConsistency, doc_id + ": self-loop on " + e.head);
    }
    for (const std::string *end : {&e.head, &e.tail}) {
      if (nodes.count(*end) == 0) {
        throw Error(ErrorKind::kConsistency,
                    doc_id + ": edge endpoint " + *end + " has no node");
      }
    }
    if (!(e.confidence > 0.0 && e.confidence <= 1.0)) {
      throw Error(ErrorKind::kConsistency,
                  doc_id + ": confidence out of (0,1] on edge " + e.head +
                      " " + e.relation + " " + e.tail);
    }
    if (i > 0 && !EdgeKeyLess(sorted[i - 1], e)) {
      throw Error(ErrorKind::kConsistency,
                  doc_id + ": duplicate edge " + e.head + " " + e.relation +
                      " " + e.tail);
    }
  }
}

SemanticNetwork BuildNetwork(const std::string &doc_id,
                             const std::vector<Mention> &mentions,
                             const std::vector<Edge> &edges,
                             const Lexicon &lexicon) {
  SemanticNetwork net;
  net.doc_id = doc_id;
  for (const Mention &m : mentions) {
    auto [it, inserted] = net.nodes.try_emplace(m.primary_cui);
    Node &node = it->second;
    if (inserted) {
      node.cui = m.primary_cui;
      const Concept *c = lexicon.Find(m.primary_cui);
      node.name = c ? c->preferred_name : m.surface;
    }
    node.spans.emplace_back(m.start, m.end);
    ++node.weight;
  }
  for (const Edge &e : edges) {
    for (const std::string *end : {&e.head, &e.tail}) {
      if (net.nodes.count(*end) == 0) {
        throw Error(ErrorKind::kConsistency,
                    doc_id + ": edge endpoint " + *end + " has no node");
      }
    }
  }
  net.edges = MergeEdges(edges);
  if (net.empty()) LogWarning("document " + doc_id + " has an empty network");
  net.Validate();
  return net;
}

double FuseConfidence(double extracted, double predicted) {
  return 1.0 - (1.0 - extracted) * (1.0 - predicted);
}

SemanticNetwork FuseNetwork(SemanticNetwork net, const EmbeddingModel &model) {
  for (Edge &e : net.edges) {
    if (e.provenance != Provenance::kExtracted) continue;
    if (!model.HasEntity(e.head) || !model.HasEntity(e.tail) ||
        !model.HasRelation(e.relation)) {
      continue;
    }
    e.confidence = FuseConfidence(e.confidence,
                                  model.Plausibility(e.head, e.relation, e.tail));
    e.provenance = Provenance::kFused;
  }
  return net;
}

SemanticNetwork EnrichNetwork(SemanticNetwork net, const EmbeddingModel &model,
                              double threshold, std::size_t max_new) {
  if (max_new == 0) return net;
  std::vector<std::string> known;
  for (const auto &[cui, node] : net.nodes) {
    if (model.HasEntity(cui)) known.push_back(cui);
  }
  std::vector<Edge> candidates;
  for (const std::string &u : known) {
    const int uid = model.EntityId(u);
    for (const std::string &v : known) {
      if (u == v) continue;
      const int vid = model.EntityId(v);
      for (std::size_t r = 0; r < model.relation_names().size(); ++r) {
        const std::string &rel = model.relation_names()[r];
        if (net.HasEdge(u, v, rel)) continue;
        const double p =
            Plausibility(model.Dissimilarity(uid, static_cast<int>(r), vid));
        if (p >= threshold) {
          candidates.push_back(Edge{u, v, rel, p, Provenance::kPredicted});
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Edge &a, const Edge &b) {
              if (a.confidence != b.confidence) return a.confidence > b.confidence;
              return EdgeKeyLess(a, b);
            });
  if (candidates.size() > max_new) candidates.resize(max_new);
  for (Edge &e : candidates) net.edges.push_back(std::move(e));
  return net;
}

nlohmann::json EdgeToJson(const Edge &e) {
  return {{"head", e.head},
          {"tail", e.tail},
          {"rel", e.relation},
          {"conf", e.confidence},
          {"prov", ProvenanceName(e.provenance)}};
}

Edge EdgeFromJson(const nlohmann::json &j) {
  return Edge{j.at("head").get<std::string>(), j.at("tail").get<std::string>(),
              j.at("rel").get<std::string>(), j.at("conf").get<double>(),
              ParseProvenance(j.at("prov").get<std::string>())};
}

nlohmann::json NetworkToJson(const SemanticNetwork &net) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto &[cui, node] : net.nodes) {
    nlohmann::json spans = nlohmann::json::array();
    for (const auto &[s, e] : node.spans) spans.push_back({s, e});
    nodes.push_back({{"cui", node.cui},
                     {"name", node.name},
                     {"spans", std::move(spans)},
                     {"weight", node.weight}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge &e : net.edges) edges.push_back(EdgeToJson(e));
  return {{"doc_id", net.doc_id},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

SemanticNetwork NetworkFromJson(const nlohmann::json &j) {
  SemanticNetwork net;
  try {
    net.doc_id = j.at("doc_id").get<std::string>();
    for (const nlohmann::json &n : j.at("nodes")) {
      Node node;
      node.cui = n.at("cui").get<std::string>();
      node.name = n.at("name").get<std::string>();
      for (const nlohmann::json &span : n.at("spans")) {
        node.spans.emplace_back(span.at(0).get<std::size_t>(),
                                span.at(1).get<std::size_t>());
      }
      node.weight = n.at("weight").get<int>();
      if (!net.nodes.emplace(node.cui, node).second) {
        throw Error(ErrorKind::kConsistency,
                    net.doc_id + ": duplicate node " + node.cui);
      }
    }
    for (const nlohmann::json &e : j.at("edges")) {
      net.edges.push_back(EdgeFromJson(e));
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kParse, std::string("network record: ") + e.what());
  }
  net.Validate();
  return net;
}

nlohmann::json EdgesToJson(const std::string &doc_id,
                           const std::vector<Edge> &edges) {
  nlohmann::json list = nlohmann::json::array();
  for (const Edge &e : edges) list.push_back(EdgeToJson(e));
  return {{"doc_id", doc_id}, {"edges", std::move(list)}};
}

}  // namespace semnet
