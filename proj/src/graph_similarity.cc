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

#include "semnet/graph_similarity.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <utility>

#include "semnet/errors.h"
#include "semnet/linalg.h"
#include "semnet/transe.h"

namespace semnet {

namespace {

std::atomic<std::uint64_t> g_next_generation{1};

constexpr char kFieldSep = '\x1f';

using CompressFn = std::function<int(const std::string &)>;

WlFeatureVector ComputeWl(const SemanticNetwork &net, int iterations,
                          std::uint64_t generation, const CompressFn &compress) {
  WlFeatureVector features;
  features.iterations = iterations;
  features.generation = generation;
  if (net.nodes.empty()) return features;

  std::vector<std::string> cuis;
  std::map<std::string, std::size_t> position;
  for (const auto &[cui, node] : net.nodes) {
    position.emplace(cui, cuis.size());
    cuis.push_back(cui);
  }
  // (relation, neighbor position) per node; direction is dropped.
  std::vector<std::vector<std::pair<std::string, std::size_t>>> neighbors(
      cuis.size());
  for (const Edge &e : net.edges) {
    const std::size_t h = position.at(e.head);
    const std::size_t t = position.at(e.tail);
    neighbors[h].emplace_back(e.relation, t);
    neighbors[t].emplace_back(e.relation, h);
  }

  std::vector<int> labels(cuis.size());
  for (std::size_t v = 0; v < cuis.size(); ++v) {
    labels[v] = compress(std::string("0") + kFieldSep + cuis[v]);
    ++features.counts[labels[v]];
  }
  for (int it = 1; it <= iterations; ++it) {
    std::vector<int> next(cuis.size());
    for (std::size_t v = 0; v < cuis.size(); ++v) {
      std::vector<std::pair<std::string, int>> multiset;
      multiset.reserve(neighbors[v].size());
      for (const auto &[rel, u] : neighbors[v]) multiset.emplace_back(rel, labels[u]);
      std::sort(multiset.begin(), multiset.end());
      std::string signature = std::to_string(it);
      signature += kFieldSep;
      signature += std::to_string(labels[v]);
      for (const auto &[rel, label] : multiset) {
        signature += kFieldSep;
        signature += rel;
        signature += kFieldSep;
        signature += std::to_string(label);
      }
      next[v] = compress(signature);
      ++features.counts[next[v]];
    }
    labels = std::move(next);
  }
  return features;
}

}  // namespace

LabelCompressor::LabelCompressor() : generation_(g_next_generation++) {}

int LabelCompressor::Compress(const std::string &signature) {
  auto [it, inserted] = table_.try_emplace(signature, next_id_);
  if (inserted) ++next_id_;
  return it->second;
}

int LabelCompressor::Find(const std::string &signature) const {
  auto it = table_.find(signature);
  return it == table_.end() ? -1 : it->second;
}

std::vector<std::string> LabelCompressor::Signatures() const {
  std::vector<std::string> out(table_.size());
  for (const auto &[sig, id] : table_) out[static_cast<std::size_t>(id)] = sig;
  return out;
}

LabelCompressor LabelCompressor::FromSignatures(
    const std::vector<std::string> &signatures) {
  LabelCompressor c;
  for (const std::string &s : signatures) {
    if (c.Compress(s) != c.next_id() - 1) {
      throw Error(ErrorKind::kFormat, "duplicate signature in compressor table");
    }
  }
  return c;
}

int OverlayCompressor::Compress(const std::string &signature) {
  const int id = base_.Find(signature);
  if (id >= 0) return id;
  auto [it, inserted] = local_.try_emplace(
      signature, base_.next_id() + static_cast<int>(local_.size()));
  return it->second;
}

std::int64_t WlFeatureVector::TotalMass() const {
  std::int64_t total = 0;
  for (const auto &[label, count] : counts) total += count;
  return total;
}

WlFeatureVector WlFeatures(const SemanticNetwork &net, int iterations,
                           LabelCompressor &compressor) {
  if (iterations < 0) throw Error(ErrorKind::kUsage, "WL iterations must be >= 0");
  return ComputeWl(net, iterations, compressor.generation(),
                   [&](const std::string &s) { return compressor.Compress(s); });
}

WlFeatureVector WlFeatures(const SemanticNetwork &net, int iterations,
                           OverlayCompressor &compressor) {
  if (iterations < 0) throw Error(ErrorKind::kUsage, "WL iterations must be >= 0");
  return ComputeWl(net, iterations, compressor.generation(),
                   [&](const std::string &s) { return compressor.Compress(s); });
}

std::int64_t WlDot(const WlFeatureVector &f, const WlFeatureVector &g) {
  std::int64_t dot = 0;
  auto a = f.counts.begin();
  auto b = g.counts.begin();
  while (a != f.counts.end() && b != g.counts.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      dot += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return dot;
}

double WlKernelNormalized(const WlFeatureVector &f, const WlFeatureVector &g) {
  if (f.generation != g.generation || f.iterations != g.iterations) {
    throw Error(ErrorKind::kUsage,
                "WL feature vectors built with different compressors or depths");
  }
  if (f.counts.empty() || g.counts.empty()) return 0.0;
  const double ff = static_cast<double>(WlDot(f, f));
  const double gg = static_cast<double>(WlDot(g, g));
  return static_cast<double>(WlDot(f, g)) / std::sqrt(ff * gg);
}

DocEmbedding ComputeDocEmbedding(const SemanticNetwork &net,
                                 const EmbeddingModel &model) {
  DocEmbedding emb;
  emb.vector = Eigen::VectorXd::Zero(model.dim());
  for (const auto &[cui, node] : net.nodes) {
    if (!model.HasEntity(cui)) continue;
    emb.vector += node.weight * model.Entity(model.EntityId(cui));
    emb.mass += node.weight;
  }
  if (emb.mass > 0) emb.vector /= emb.mass;
  return emb;
}

double LatentSimilarity(const DocEmbedding &a, const DocEmbedding &b) {
  if (a.vector.size() != b.vector.size() || a.vector.size() == 0) return 0.0;
  return std::clamp(Cosine(a.vector, b.vector), 0.0, 1.0);
}

double CombineSimilarity(double kernel, double latent, double lambda) {
  return std::clamp(lambda * kernel + (1.0 - lambda) * std::max(0.0, latent),
                    0.0, 1.0);
}

double CombinedSimilarity(const SemanticNetwork &a, const SemanticNetwork &b,
                          double lambda, LabelCompressor &compressor,
                          int iterations, const EmbeddingModel *model) {
  const double kernel = WlKernelNormalized(WlFeatures(a, iterations, compressor),
                                           WlFeatures(b, iterations, compressor));
  const double latent =
      model ? LatentSimilarity(ComputeDocEmbedding(a, *model),
                               ComputeDocEmbedding(b, *model))
            : 0.0;
  return CombineSimilarity(kernel, latent, lambda);
}

}  // namespace semnet
