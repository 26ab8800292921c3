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

#include "semnet/pipeline.h"

#include "semnet/errors.h"
#include "semnet/log.h"

namespace semnet {

std::string ExtractorModeName(ExtractorMode mode) {
  return mode == ExtractorMode::kModel ? "model" : "kbmatch";
}

ExtractorMode ParseExtractorMode(const std::string &name) {
  if (name == "model") return ExtractorMode::kModel;
  if (name == "kbmatch") return ExtractorMode::kKbMatch;
  throw Error(ErrorKind::kUsage, "unknown extractor mode '" + name + "'");
}

void PipelineOptions::Validate() const {
  if (!(theta_rel >= 0.0 && theta_rel <= 1.0)) {
    throw Error(ErrorKind::kUsage, "theta-rel must be in [0,1]");
  }
  if (!(tau_lp > 0.0 && tau_lp <= 1.0)) {
    throw Error(ErrorKind::kUsage, "tau-lp must be in (0,1]");
  }
}

nlohmann::json PipelineOptions::ToJson() const {
  return {{"mode", ExtractorModeName(mode)},
          {"window", window},
          {"theta_rel", theta_rel},
          {"enrich", enrich},
          {"fuse", fuse},
          {"tau_lp", tau_lp},
          {"m_cap", m_cap}};
}

PipelineOptions PipelineOptions::FromJson(const nlohmann::json &j) {
  PipelineOptions o;
  o.mode = ParseExtractorMode(j.at("mode").get<std::string>());
  o.window = j.at("window").get<std::size_t>();
  o.theta_rel = j.at("theta_rel").get<double>();
  o.enrich = j.at("enrich").get<bool>();
  o.fuse = j.at("fuse").get<bool>();
  o.tau_lp = j.at("tau_lp").get<double>();
  o.m_cap = j.at("m_cap").get<long>();
  return o;
}

Pipeline::Pipeline(const Lexicon &lexicon, const TripleStore *kb,
                   const ExtractorModel *extractor,
                   const EmbeddingModel *embeddings, PipelineOptions options)
    : lexicon_(lexicon),
      kb_(kb),
      extractor_(extractor),
      embeddings_(embeddings),
      options_(options) {
  options_.Validate();
  if (options_.mode == ExtractorMode::kModel && extractor_ == nullptr) {
    throw Error(ErrorKind::kUsage, "extractor mode 'model' needs a trained extractor");
  }
  if (options_.mode == ExtractorMode::kKbMatch && kb_ == nullptr) {
    throw Error(ErrorKind::kUsage, "extractor mode 'kbmatch' needs a triple store");
  }
}

DocumentAnalysis Pipeline::Analyze(const Document &doc) const {
  DocumentAnalysis a;
  a.tokens = Tokenize(doc.text);
  a.sentences = SplitSentences(doc.text, a.tokens);
  a.mentions = Link(doc.text, a.tokens, lexicon_);
  a.pairs = GenerateCandidates(doc.id, a.mentions, a.sentences, a.tokens,
                               options_.window);
  if (options_.mode == ExtractorMode::kModel) {
    std::vector<FeatureBag> features;
    features.reserve(a.pairs.size());
    for (const CandidatePair &p : a.pairs) {
      features.push_back(Featurize(p, a.tokens, lexicon_));
    }
    a.edges = ExtractRelations(a.pairs, features, *extractor_, options_.theta_rel);
  } else {
    a.edges = KbMatchExtract(a.pairs, *kb_);
  }
  return a;
}

SemanticNetwork Pipeline::Process(const Document &doc) const {
  DocumentAnalysis a = Analyze(doc);
  return Refine(BuildNetwork(doc.id, a.mentions, a.edges, lexicon_));
}

SemanticNetwork Pipeline::Refine(SemanticNetwork net) const {
  if (embeddings_ == nullptr) return net;
  const std::size_t extracted = net.edges.size();
  if (options_.fuse) net = FuseNetwork(std::move(net), *embeddings_);
  if (options_.enrich) {
    const std::size_t cap = options_.m_cap < 0
                                ? extracted
                                : static_cast<std::size_t>(options_.m_cap);
    net = EnrichNetwork(std::move(net), *embeddings_, options_.tau_lp, cap);
  }
  return net;
}

std::vector<RelationInstance> BuildTrainingInstances(
    const std::vector<Document> &corpus, const Lexicon &lexicon,
    const TripleStore &kb, std::size_t window) {
  std::vector<RelationInstance> instances;
  for (const Document &doc : corpus) {
    std::vector<Token> tokens = Tokenize(doc.text);
    std::vector<SentenceSpan> sentences = SplitSentences(doc.text, tokens);
    std::vector<Mention> mentions = Link(doc.text, tokens, lexicon);
    for (CandidatePair &pair :
         GenerateCandidates(doc.id, mentions, sentences, tokens, window)) {
      if (pair.head.primary_cui == pair.tail.primary_cui) continue;
      RelationInstance inst;
      inst.label = DistantLabel(pair, kb);
      inst.features = Featurize(pair, tokens, lexicon);
      inst.pair = std::move(pair);
      instances.push_back(std::move(inst));
    }
  }
  return instances;
}

}  // namespace semnet
