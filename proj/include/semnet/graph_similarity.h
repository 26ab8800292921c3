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

#ifndef SEMNET_GRAPH_SIMILARITY_H_
#define SEMNET_GRAPH_SIMILARITY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "semnet/semantic_network.h"

namespace semnet {

class EmbeddingModel;

// Injective, append-only map from WL signature strings to integer labels,
// shared across a collection.
class LabelCompressor {
 public:
  LabelCompressor();

  int Compress(const std::string &signature);
  // -1 when absent.
  int Find(const std::string &signature) const;

  int next_id() const { return next_id_; }
  std::size_t size() const { return table_.size(); }
  // Identifies the label space; feature vectors from different compressors
  // cannot be compared.
  std::uint64_t generation() const { return generation_; }

  // Signatures ordered by id.
  std::vector<std::string> Signatures() const;
  static LabelCompressor FromSignatures(const std::vector<std::string> &signatures);

 private:
  std::unordered_map<std::string, int> table_;
  int next_id_ = 0;
  std::uint64_t generation_;
};

// Read-only view over a shared compressor that assigns fresh ids to unseen
// signatures locally. Used for queries against an immutable index.
class OverlayCompressor {
 public:
  explicit OverlayCompressor(const LabelCompressor &base) : base_(base) {}

  int Compress(const std::string &signature);
  std::uint64_t generation() const { return base_.generation(); }

 private:
  const LabelCompressor &base_;
  std::unordered_map<std::string, int> local_;
};

struct WlFeatureVector {
  std::map<int, std::int64_t> counts;
  int iterations = 0;
  std::uint64_t generation = 0;

  std::int64_t TotalMass() const;
  bool operator==(const WlFeatureVector &) const = default;
};

// Weisfeiler-Lehman subtree features with relation-tagged, undirected
// neighborhoods. Counts accumulate labels of iterations 0..iterations.
WlFeatureVector WlFeatures(const SemanticNetwork &net, int iterations,
                           LabelCompressor &compressor);
WlFeatureVector WlFeatures(const SemanticNetwork &net, int iterations,
                           OverlayCompressor &compressor);

std::int64_t WlDot(const WlFeatureVector &f, const WlFeatureVector &g);

// dot(f,g) / sqrt(dot(f,f) dot(g,g)); 0 when either side is empty. Throws
// kUsage when the vectors come from different compressors or depths.
double WlKernelNormalized(const WlFeatureVector &f, const WlFeatureVector &g);

struct DocEmbedding {
  Eigen::VectorXd vector;
  double mass = 0.0;

  bool operator==(const DocEmbedding &other) const {
    return mass == other.mass && vector.size() == other.vector.size() &&
           vector == other.vector;
  }
};

// Mention-count weighted mean of the entity vectors of nodes known to the
// model; the zero vector when none are known.
DocEmbedding ComputeDocEmbedding(const SemanticNetwork &net,
                                 const EmbeddingModel &model);

double LatentSimilarity(const DocEmbedding &a, const DocEmbedding &b);

// lambda * kernel + (1 - lambda) * max(0, cosine).
double CombineSimilarity(double kernel, double latent, double lambda);

double CombinedSimilarity(const SemanticNetwork &a, const SemanticNetwork &b,
                          double lambda, LabelCompressor &compressor,
                          int iterations, const EmbeddingModel *model);

}  // namespace semnet

#endif  // SEMNET_GRAPH_SIMILARITY_H_
