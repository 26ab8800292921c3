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

#include "semnet/retrieval_engine.h"

#include <algorithm>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "semnet/errors.h"
#include "semnet/log.h"
#include "semnet/text.h"
#include "semnet/transe.h"

namespace semnet {

namespace {

constexpr char kMagic[] = "semnet-index";

nlohmann::json WlToJson(const std::string &doc_id, const WlFeatureVector &f) {
  nlohmann::json counts = nlohmann::json::array();
  for (const auto &[label, count] : f.counts) counts.push_back({label, count});
  return {{"doc_id", doc_id}, {"counts", std::move(counts)}};
}

nlohmann::json EmbeddingToJson(const std::string &doc_id, const DocEmbedding &e) {
  return {{"doc_id", doc_id},
          {"mass", e.mass},
          {"vector", std::vector<double>(e.vector.data(),
                                         e.vector.data() + e.vector.size())}};
}

class SectionReader {
 public:
  explicit SectionReader(std::string_view data) : in_(std::string(data)) {}

  std::string Line() {
    std::string line;
    if (!std::getline(in_, line)) {
      throw Error(ErrorKind::kFormat, "truncated index file");
    }
    ++line_number_;
    return line;
  }

  nlohmann::json JsonLine() {
    std::string line = Line();
    try {
      return nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw Error(ErrorKind::kFormat, "index line " +
                                          std::to_string(line_number_) + ": " +
                                          e.what());
    }
  }

  std::size_t Section(const std::string &name) {
    std::string line = Line();
    std::istringstream fields(line);
    std::string tag;
    std::size_t count = 0;
    if (!(fields >> tag >> count) || tag != name) {
      throw Error(ErrorKind::kFormat, "expected section '" + name + "' at line " +
                                          std::to_string(line_number_));
    }
    return count;
  }

 private:
  std::istringstream in_;
  std::size_t line_number_ = 0;
};

void AddPostings(Index &index, const SemanticNetwork &net) {
  for (const auto &[cui, node] : net.nodes) {
    index.cui_postings[cui].push_back(net.doc_id);
  }
}

void SortPostings(Index &index) {
  for (auto &[cui, docs] : index.cui_postings) std::sort(docs.begin(), docs.end());
}

double PairScore(const WlFeatureVector &wa, const DocEmbedding &ea,
                 const WlFeatureVector &wb, const DocEmbedding &eb,
                 double lambda) {
  return CombineSimilarity(WlKernelNormalized(wa, wb), LatentSimilarity(ea, eb),
                           lambda);
}

}  // namespace

void Index::Validate() const {
  if (networks.size() != wl_vectors.size() ||
      networks.size() != embeddings.size()) {
    throw Error(ErrorKind::kConsistency, "index maps differ in size");
  }
  std::size_t postings = 0;
  for (const auto &[doc_id, net] : networks) {
    if (net.doc_id != doc_id || wl_vectors.count(doc_id) == 0 ||
        embeddings.count(doc_id) == 0) {
      throw Error(ErrorKind::kConsistency, "index maps disagree on " + doc_id);
    }
    for (const auto &[cui, node] : net.nodes) {
      auto it = cui_postings.find(cui);
      if (it == cui_postings.end() ||
          !std::binary_search(it->second.begin(), it->second.end(), doc_id)) {
        throw Error(ErrorKind::kConsistency,
                    "postings miss " + cui + " for " + doc_id);
      }
    }
    postings += net.nodes.size();
  }
  std::size_t total = 0;
  for (const auto &[cui, docs] : cui_postings) total += docs.size();
  if (total != postings) {
    throw Error(ErrorKind::kConsistency, "postings list unknown documents");
  }
}

std::string Index::Serialize() const {
  std::string out;
  out += fmt::format("{} {}\n", kMagic, version);
  nlohmann::json header = {{"iterations", iterations},
                           {"documents", networks.size()},
                           {"pipeline", pipeline}};
  out += header.dump() + "\n";
  out += fmt::format("networks {}\n", networks.size());
  for (const auto &[doc_id, net] : networks) out += NetworkToJson(net).dump() + "\n";
  std::vector<std::string> signatures = compressor.Signatures();
  out += fmt::format("compressor {}\n", signatures.size());
  for (const std::string &s : signatures) out += nlohmann::json(s).dump() + "\n";
  out += fmt::format("wl {}\n", wl_vectors.size());
  for (const auto &[doc_id, f] : wl_vectors) out += WlToJson(doc_id, f).dump() + "\n";
  out += fmt::format("embeddings {}\n", embeddings.size());
  for (const auto &[doc_id, e] : embeddings) {
    out += EmbeddingToJson(doc_id, e).dump() + "\n";
  }
  return out;
}

Index Index::Deserialize(std::string_view data) {
  SectionReader reader(data);
  Index index;
  {
    std::istringstream first(reader.Line());
    std::string magic;
    int version = 0;
    if (!(first >> magic >> version) || magic != kMagic) {
      throw Error(ErrorKind::kFormat, "not a semnet index");
    }
    if (version != kIndexVersion) {
      throw Error(ErrorKind::kFormat,
                  fmt::format("index version {} is not supported (expected {})",
                              version, kIndexVersion));
    }
    index.version = version;
  }
  try {
    nlohmann::json header = reader.JsonLine();
    index.iterations = header.at("iterations").get<int>();
    index.pipeline = header.at("pipeline");

    const std::size_t num_networks = reader.Section("networks");
    for (std::size_t i = 0; i < num_networks; ++i) {
      SemanticNetwork net = NetworkFromJson(reader.JsonLine());
      std::string id = net.doc_id;
      if (!index.networks.emplace(id, std::move(net)).second) {
        throw Error(ErrorKind::kFormat, "duplicate network " + id);
      }
    }
    const std::size_t num_signatures = reader.Section("compressor");
    std::vector<std::string> signatures;
    signatures.reserve(num_signatures);
    for (std::size_t i = 0; i < num_signatures; ++i) {
      signatures.push_back(reader.JsonLine().get<std::string>());
    }
    index.compressor = LabelCompressor::FromSignatures(signatures);

    const std::size_t num_wl = reader.Section("wl");
    for (std::size_t i = 0; i < num_wl; ++i) {
      nlohmann::json j = reader.JsonLine();
      WlFeatureVector f;
      f.iterations = index.iterations;
      f.generation = index.compressor.generation();
      for (const nlohmann::json &pair : j.at("counts")) {
        f.counts[pair.at(0).get<int>()] = pair.at(1).get<std::int64_t>();
      }
      index.wl_vectors[j.at("doc_id").get<std::string>()] = std::move(f);
    }
    const std::size_t num_embeddings = reader.Section("embeddings");
    for (std::size_t i = 0; i < num_embeddings; ++i) {
      nlohmann::json j = reader.JsonLine();
      std::vector<double> v = j.at("vector").get<std::vector<double>>();
      DocEmbedding e;
      e.vector = Eigen::Map<const Eigen::VectorXd>(
          v.data(), static_cast<Eigen::Index>(v.size()));
      e.mass = j.at("mass").get<double>();
      index.embeddings[j.at("doc_id").get<std::string>()] = std::move(e);
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kFormat, std::string("index: ") + e.what());
  }
  for (const auto &[doc_id, net] : index.networks) AddPostings(index, net);
  SortPostings(index);
  index.Validate();
  return index;
}

void Index::Save(const std::string &path) const { WriteFile(path, Serialize()); }

Index Index::Load(const std::string &path) { return Deserialize(ReadFile(path)); }

Index BuildIndex(const std::vector<SemanticNetwork> &networks,
                 const EmbeddingModel *model, int iterations) {
  if (iterations < 0) throw Error(ErrorKind::kUsage, "WL iterations must be >= 0");
  Index index;
  index.iterations = iterations;
  for (const SemanticNetwork &net : networks) {
    if (index.networks.count(net.doc_id) != 0) {
      throw Error(ErrorKind::kIndexing, "duplicate document id " + net.doc_id);
    }
    index.networks.emplace(net.doc_id, net);
    // Labels are assigned in input order, so ids depend only on that order.
    index.wl_vectors.emplace(net.doc_id,
                             WlFeatures(net, iterations, index.compressor));
    index.embeddings.emplace(net.doc_id, model ? ComputeDocEmbedding(net, *model)
                                               : DocEmbedding{});
    AddPostings(index, net);
  }
  SortPostings(index);
  index.Validate();
  return index;
}

Index IndexCorpus(const std::vector<Document> &corpus, const Pipeline &pipeline,
                  int iterations) {
  std::set<std::string> ids;
  for (const Document &doc : corpus) {
    if (!ids.insert(doc.id).second) {
      throw Error(ErrorKind::kIndexing, "duplicate document id " + doc.id);
    }
  }
  std::vector<SemanticNetwork> networks;
  networks.reserve(corpus.size());
  for (const Document &doc : corpus) networks.push_back(pipeline.Process(doc));
  Index index = BuildIndex(networks, pipeline.embeddings(), iterations);
  index.pipeline["options"] = pipeline.options().ToJson();
  return index;
}

bool ResultLess(const SearchResult &a, const SearchResult &b) {
  if (a.score != b.score) return a.score > b.score;
  return a.doc_id < b.doc_id;
}

std::vector<SearchResult> Search(const Index &index, const SemanticNetwork &query,
                                 const EmbeddingModel *model,
                                 const SearchOptions &options) {
  if (options.k < 1) throw Error(ErrorKind::kUsage, "k must be >= 1");
  if (!(options.lambda >= 0.0 && options.lambda <= 1.0)) {
    throw Error(ErrorKind::kUsage, "lambda must be in [0,1]");
  }
  OverlayCompressor overlay(index.compressor);
  const WlFeatureVector query_wl = WlFeatures(query, index.iterations, overlay);
  const DocEmbedding query_emb =
      model ? ComputeDocEmbedding(query, *model) : DocEmbedding{};

  std::vector<const std::string *> candidates;
  if (options.prune) {
    std::set<const std::string *> seen;
    for (const auto &[cui, node] : query.nodes) {
      auto it = index.cui_postings.find(cui);
      if (it == index.cui_postings.end()) continue;
      for (const std::string &doc : it->second) {
        // Point into the networks map so pointers are stable and unique.
        const std::string *key = &index.networks.find(doc)->first;
        if (seen.insert(key).second) candidates.push_back(key);
      }
    }
  } else {
    for (const auto &[doc_id, net] : index.networks) candidates.push_back(&doc_id);
  }

  std::vector<SearchResult> results;
  results.reserve(candidates.size());
  for (const std::string *doc_id : candidates) {
    results.push_back({*doc_id,
                       PairScore(query_wl, query_emb, index.wl_vectors.at(*doc_id),
                                 index.embeddings.at(*doc_id), options.lambda),
                       0});
  }
  std::sort(results.begin(), results.end(), ResultLess);
  if (results.size() > static_cast<std::size_t>(options.k)) {
    results.resize(static_cast<std::size_t>(options.k));
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    results[i].rank = static_cast<int>(i) + 1;
  }
  return results;
}

std::vector<SearchResult> Search(const Index &index, const Pipeline &pipeline,
                                 std::string_view query_text,
                                 const SearchOptions &options) {
  Document query{"query", "", std::string(query_text)};
  return Search(index, pipeline.Process(query), pipeline.embeddings(), options);
}

double DocumentSimilarity(const Index &index, const std::string &a,
                          const std::string &b, double lambda) {
  auto wl = [&](const std::string &id) -> const WlFeatureVector & {
    auto it = index.wl_vectors.find(id);
    if (it == index.wl_vectors.end()) {
      throw Error(ErrorKind::kLookup, "unknown document " + id);
    }
    return it->second;
  };
  const WlFeatureVector &wa = wl(a);
  const WlFeatureVector &wb = wl(b);
  return PairScore(wa, index.embeddings.at(a), wb, index.embeddings.at(b), lambda);
}

CollectionGraph BuildCollectionGraph(const Index &index, double lambda,
                                     double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kUsage, "tau-doc must be in [0,1]");
  }
  CollectionGraph graph;
  for (auto a = index.networks.begin(); a != index.networks.end(); ++a) {
    for (auto b = std::next(a); b != index.networks.end(); ++b) {
      const double s = DocumentSimilarity(index, a->first, b->first, lambda);
      if (s >= threshold) graph.edges.push_back({a->first, b->first, s});
    }
  }
  return graph;
}

std::string ToDot(const CollectionGraph &graph, const Index &index) {
  std::string out = "graph collection {\n";
  for (const auto &[doc_id, net] : index.networks) {
    out += "  " + nlohmann::json(doc_id).dump() + ";\n";
  }
  for (const CollectionEdge &e : graph.edges) {
    out += fmt::format("  {} -- {} [label=\"{:.3f}\"];\n",
                       nlohmann::json(e.a).dump(), nlohmann::json(e.b).dump(),
                       e.similarity);
  }
  out += "}\n";
  return out;
}

}  // namespace semnet
