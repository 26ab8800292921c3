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

#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.h"
#include "semnet/errors.h"
#include "semnet/random.h"

namespace semnet {
namespace {

using testing::DataPath;

struct Analyzed {
  std::string text;
  std::vector<Token> tokens;
  std::vector<SentenceSpan> sentences;
  std::vector<Mention> mentions;
};

Analyzed Analyze(const std::string &text, const Lexicon &lexicon) {
  Analyzed a{text, Tokenize(text), {}, {}};
  a.sentences = SplitSentences(text, a.tokens);
  a.mentions = Link(text, a.tokens, lexicon);
  return a;
}

std::vector<CandidatePair> Pairs(const Analyzed &a, std::size_t window = 30) {
  return GenerateCandidates("d", a.mentions, a.sentences, a.tokens, window);
}

Mention MentionOf(const std::string &cui, std::size_t start) {
  return Mention{start, start + 1, cui, {cui}, cui, 1.0};
}

CandidatePair PairOf(const std::string &head, const std::string &tail) {
  CandidatePair p;
  p.doc_id = "d";
  p.head = MentionOf(head, 0);
  p.tail = MentionOf(tail, 10);
  return p;
}

TEST_CASE("GenerateCandidates") {
  Lexicon lexicon = Lexicon::Load(DataPath("lexicon4.tsv"));
  SUBCASE("two mentions give both orientations") {
    Analyzed a = Analyze("Aspirin relieves chest pain.", lexicon);
    auto pairs = Pairs(a);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].head.primary_cui == "C0004057");
    CHECK(pairs[0].tail.primary_cui == "C0008031");
    CHECK(pairs[1].head.primary_cui == "C0008031");
    CHECK(pairs[1].tail.primary_cui == "C0004057");
    CHECK(pairs[0].token_distance == 1);
    CHECK(pairs[0].between_begin == 1);
    CHECK(pairs[0].between_end == 2);
  }
  SUBCASE("single mention") {
    CHECK(Pairs(Analyze("Aspirin was given.", lexicon)).empty());
  }
  SUBCASE("different sentences") {
    CHECK(Pairs(Analyze("Aspirin was given. Chest pain remained.", lexicon)).empty());
  }
  SUBCASE("window bounds the token distance") {
    Analyzed a = Analyze("Aspirin one two three chest pain.", lexicon);
    CHECK(Pairs(a, 3).size() == 2);
    CHECK(Pairs(a, 2).empty());
  }
  SUBCASE("three mentions give six ordered pairs") {
    Analyzed a = Analyze("Aspirin for heart attack and chest pain.", lexicon);
    auto pairs = Pairs(a);
    CHECK(pairs.size() == 6);
    for (const CandidatePair &p : pairs) CHECK(p.head.start != p.tail.start);
  }
}

TEST_CASE("DistantLabel") {
  TripleStore kb = TripleStore::Load(DataPath("triples4.tsv"));
  CHECK(DistantLabel(PairOf("C0004057", "C0027051"), kb) == "may_treat");
  CHECK(DistantLabel(PairOf("C0155626", "C0004057"), kb) == kNoRelation);
  // Direction matters.
  CHECK(DistantLabel(PairOf("C0027051", "C0004057"), kb) == kNoRelation);

  TripleStore multi = testing::TriplesFromString(
      "A\tmay_treat\tB\nA\tcause_of\tB\n");
  CHECK(DistantLabel(PairOf("A", "B"), multi) == "cause_of");
}

TEST_CASE("distant labels agree with the store on the fixture corpus") {
  Lexicon lexicon = Lexicon::Load(DataPath("lexicon.tsv"));
  TripleStore kb = TripleStore::Load(DataPath("triples.tsv"));
  int positives = 0;
  for (const Document &doc : LoadCorpus(DataPath("corpus.jsonl"))) {
    Analyzed a = Analyze(doc.text, lexicon);
    for (const CandidatePair &p : Pairs(a)) {
      const std::string label = DistantLabel(p, kb);
      if (label == kNoRelation) {
        CHECK(kb.RelationsBetween(p.head.primary_cui, p.tail.primary_cui).empty());
      } else {
        ++positives;
        CHECK(kb.Contains({p.head.primary_cui, label, p.tail.primary_cui}));
      }
    }
  }
  CHECK(positives > 0);
}

TEST_CASE("Featurize") {
  Lexicon lexicon = Lexicon::Load(DataPath("lexicon4.tsv"));
  Analyzed a = Analyze("aspirin treats heart attack", lexicon);
  auto pairs = Pairs(a);
  REQUIRE(pairs.size() == 2);
  FeatureBag fwd = Featurize(pairs[0], a.tokens, lexicon);
  CHECK(fwd.count("bet:treats"));
  CHECK(fwd.count("dir:fwd"));
  CHECK(fwd.count("dist:0-2"));
  CHECK(fwd.at("ht:Pharmacologic Substance") == 1.0);
  CHECK(fwd.at("tt:Disease or Syndrome") == 1.0);

  FeatureBag rev = Featurize(pairs[1], a.tokens, lexicon);
  CHECK(rev.count("dir:rev"));
  CHECK(!rev.count("dir:fwd"));
  auto bet = [](const FeatureBag &f) {
    FeatureBag out;
    for (const auto &[k, v] : f)
      if (k.rfind("bet:", 0) == 0) out[k] = v;
    return out;
  };
  CHECK(bet(fwd) == bet(rev));

  Analyzed adj = Analyze("aspirin heart attack", lexicon);
  FeatureBag f = Featurize(Pairs(adj)[0], adj.tokens, lexicon);
  CHECK(bet(f).empty());
  CHECK(f.count("dist:0-2"));

  Analyzed far = Analyze("aspirin a b c d e f heart attack; aspirin a b c heart attack",
                         lexicon);
  auto far_pairs = Pairs(far);
  std::set<std::string> buckets;
  for (const CandidatePair &p : far_pairs)
    for (const auto &[k, v] : Featurize(p, far.tokens, lexicon))
      if (k.rfind("dist:", 0) == 0) buckets.insert(k);
  CHECK(buckets.count("dist:6+"));
  CHECK(buckets.count("dist:3-5"));

  Analyzed rep = Analyze("aspirin and and heart attack", lexicon);
  CHECK(Featurize(Pairs(rep)[0], rep.tokens, lexicon).at("bet:and") == 2.0);
}

// One indicator feature per label; 5 instances each.
std::vector<RelationInstance> SeparableFixture() {
  const std::vector<std::pair<std::string, std::string>> cues = {
      {"NA", "bet:near"},
      {"may_treat", "bet:treats"},
      {"cause_of", "bet:causes"},
      {"has_symptom", "bet:presents"}};
  std::vector<RelationInstance> out;
  for (int i = 0; i < 5; ++i) {
    for (const auto &[label, cue] : cues) {
      RelationInstance inst;
      inst.pair = PairOf("A", "B");
      inst.label = label;
      inst.features = {{cue, 1.0}, {"dir:fwd", 1.0}, {i % 2 ? "dist:0-2" : "dist:3-5", 1.0}};
      out.push_back(inst);
    }
  }
  return out;
}

TEST_CASE("training separates the indicator fixture") {
  auto data = SeparableFixture();
  REQUIRE(data.size() == 20);
  ExtractorModel model = TrainExtractor(data, ExtractorHyperparams{});
  CHECK(model.labels() ==
        std::vector<std::string>{"NA", "cause_of", "has_symptom", "may_treat"});
  CHECK(TrainingAccuracy(model, data) == 1.0);
  CHECK(model.weights().allFinite());
}

TEST_CASE("training is deterministic for a fixed seed") {
  auto data = SeparableFixture();
  ExtractorHyperparams hp;
  hp.seed = 99;
  CHECK(TrainExtractor(data, hp).weights() == TrainExtractor(data, hp).weights());
  ExtractorHyperparams other = hp;
  other.seed = 100;
  CHECK(TrainExtractor(data, hp).weights() != TrainExtractor(data, other).weights());
}

TEST_CASE("zero epochs leave a uniform distribution") {
  ExtractorHyperparams hp;
  hp.epochs = 0;
  ExtractorModel model = TrainExtractor(SeparableFixture(), hp);
  Eigen::VectorXd p = model.Predict({{"bet:treats", 1.0}});
  for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(p(i) == doctest::Approx(0.25));
}

TEST_CASE("training rejects degenerate inputs") {
  auto data = SeparableFixture();
  for (auto &inst : data) inst.label = kNoRelation;
  CHECK_THROWS_WITH_AS(TrainExtractor(data, {}), doctest::Contains("no positive relations"),
                       Error);
  CHECK_THROWS_AS(TrainExtractor({}, {}), Error);
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(5);
  const int labels = 3, features = 5;
  std::vector<EncodedInstance> data;
  for (int i = 0; i < 12; ++i) {
    EncodedInstance e;
    for (int f = 0; f < features; ++f)
      if (rng.Coin()) e.row.emplace_back(f, rng.Uniform(0.5, 2.0));
    e.label = static_cast<int>(rng.Below(labels));
    data.push_back(e);
  }
  Eigen::MatrixXd w(labels, features);
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.Uniform(-1.0, 1.0);
  for (double l2 : {0.0, 0.1}) {
    Eigen::MatrixXd grad;
    ExtractorLoss(w, data, l2, &grad);
    REQUIRE(grad.rows() == labels);
    REQUIRE(grad.cols() == features);
    const double eps = 1e-5;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      Eigen::MatrixXd plus = w, minus = w;
      plus(i) += eps;
      minus(i) -= eps;
      const double numeric =
          (ExtractorLoss(plus, data, l2, nullptr) - ExtractorLoss(minus, data, l2, nullptr)) /
          (2 * eps);
      const double denom = std::max(1e-8, std::abs(numeric) + std::abs(grad(i)));
      CHECK(std::abs(numeric - grad(i)) / denom < 1e-4);
    }
  }
}

// Two labels; the cue feature puts may_treat at probability 0.9.
ExtractorModel FixtureModel() {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 1);
  w(1, 0) = std::log(9.0);
  return ExtractorModel({"NA", "may_treat"}, {{"bet:treats", 0}}, w, {});
}

TEST_CASE("ExtractRelations applies the threshold") {
  ExtractorModel model = FixtureModel();
  std::vector<CandidatePair> pairs = {PairOf("C0004057", "C0027051")};
  std::vector<FeatureBag> features = {{{"bet:treats", 1.0}}};

  auto edges = ExtractRelations(pairs, features, model, 0.5);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].head == "C0004057");
  CHECK(edges[0].tail == "C0027051");
  CHECK(edges[0].relation == "may_treat");
  CHECK(edges[0].confidence == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(edges[0].provenance == Provenance::kExtracted);

  CHECK(ExtractRelations(pairs, features, model, 0.95).empty());
  // No cue: uniform 0.5/0.5 and argmax NA wins the tie.
  CHECK(ExtractRelations(pairs, {{{"bet:other", 1.0}}}, model, 0.0).empty());
  // NA strongly predicted.
  Eigen::MatrixXd w = model.weights();
  w(1, 0) = -3.0;
  ExtractorModel na(model.labels(), model.vocab(), w, {});
  CHECK(ExtractRelations(pairs, features, na, 0.0).empty());
}

TEST_CASE("ExtractRelations merges duplicates keeping the best confidence") {
  ExtractorModel model = FixtureModel();
  std::vector<CandidatePair> pairs = {PairOf("A", "B"), PairOf("A", "B")};
  std::vector<FeatureBag> features = {{{"bet:treats", 1.0}}, {{"bet:treats", 2.0}}};
  auto edges = ExtractRelations(pairs, features, model, 0.5);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].confidence == doctest::Approx(81.0 / 82.0));
  // Same concept on both sides never yields an edge.
  CHECK(ExtractRelations({PairOf("A", "A")}, {{{"bet:treats", 1.0}}}, model, 0.0).empty());
}

TEST_CASE("threshold is monotone and probabilities are normalized") {
  Lexicon lexicon = Lexicon::Load(DataPath("lexicon.tsv"));
  TripleStore kb = TripleStore::Load(DataPath("triples.tsv"));
  std::vector<RelationInstance> instances;
  std::vector<CandidatePair> all_pairs;
  std::vector<FeatureBag> all_features;
  for (const Document &doc : LoadCorpus(DataPath("corpus.jsonl"))) {
    Analyzed a = Analyze(doc.text, lexicon);
    for (const CandidatePair &p : Pairs(a)) {
      FeatureBag f = Featurize(p, a.tokens, lexicon);
      all_pairs.push_back(p);
      all_features.push_back(f);
      if (p.head.primary_cui != p.tail.primary_cui)
        instances.push_back({p, DistantLabel(p, kb), f});
    }
  }
  ExtractorModel model = TrainExtractor(instances, ExtractorHyperparams{});
  for (const FeatureBag &f : all_features) {
    Eigen::VectorXd p = model.Predict(f);
    CHECK(std::abs(p.sum() - 1.0) < 1e-9);
    CHECK((p.array() > 0.0).all());
  }
  auto key_set = [](const std::vector<Edge> &edges) {
    std::set<std::tuple<std::string, std::string, std::string>> s;
    for (const Edge &e : edges) {
      s.insert({e.head, e.tail, e.relation});
      CHECK(e.confidence > 0.0);
      CHECK(e.confidence <= 1.0);
    }
    return s;
  };
  const std::vector<double> thetas = {0.0, 0.2, 0.4, 0.5, 0.7, 0.9, 0.99, 1.0};
  for (std::size_t i = 0; i + 1 < thetas.size(); ++i) {
    auto lo = key_set(ExtractRelations(all_pairs, all_features, model, thetas[i]));
    auto hi = key_set(ExtractRelations(all_pairs, all_features, model, thetas[i + 1]));
    CHECK(std::includes(lo.begin(), lo.end(), hi.begin(), hi.end()));
  }
  CHECK(!key_set(ExtractRelations(all_pairs, all_features, model, 0.5)).empty());
}

TEST_CASE("KbMatchExtract") {
  TripleStore kb = testing::TriplesFromString(
      "A\tmay_treat\tB\nA\tcause_of\tB\nC\thas_symptom\tD\n");
  auto edges = KbMatchExtract({PairOf("A", "B"), PairOf("B", "A"), PairOf("A", "B")}, kb);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0] == Edge{"A", "B", "cause_of", 0.5, Provenance::kExtracted});
  CHECK(edges[1] == Edge{"A", "B", "may_treat", 0.5, Provenance::kExtracted});
  auto single = KbMatchExtract({PairOf("C", "D")}, kb);
  REQUIRE(single.size() == 1);
  CHECK(single[0].relation == "has_symptom");
  CHECK(KbMatchExtract({PairOf("A", "D")}, kb).empty());
}

TEST_CASE("extractor JSON round trip") {
  ExtractorModel model = TrainExtractor(SeparableFixture(), ExtractorHyperparams{});
  ExtractorModel back = ExtractorModel::FromJson(model.ToJson());
  CHECK(back.labels() == model.labels());
  CHECK(back.vocab() == model.vocab());
  CHECK(back.weights() == model.weights());
  CHECK(back.ToJson().dump() == model.ToJson().dump());
  nlohmann::json bad = model.ToJson();
  bad["version"] = 99;
  CHECK_THROWS_AS(ExtractorModel::FromJson(bad), Error);
}

}  // namespace
}  // namespace semnet
