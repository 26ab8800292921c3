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

#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "fixture_world.h"
#include "oracles.h"
#include "semnet/errors.h"

namespace semnet {
namespace {

using testing::DataPath;

// Small kbmatch setup over the four-concept lexicon with a hand-built model.
struct Small {
  Lexicon lexicon = Lexicon::Load(DataPath("lexicon4.tsv"));
  TripleStore kb = TripleStore::Load(DataPath("triples4.tsv"));
  EmbeddingModel model = [] {
    TransEConfig c;
    c.dim = 3;
    return EmbeddingModel::FromVectors(
        {{"C0027051", Eigen::Vector3d(1, 0, 0)},
         {"C0155626", Eigen::Vector3d(0.9, 0.1, 0)},
         {"C0004057", Eigen::Vector3d(0, 1, 0)},
         {"C0008031", Eigen::Vector3d(0, 0, 1)}},
        {{"may_treat", Eigen::Vector3d(1, -1, 0)},
         {"has_symptom", Eigen::Vector3d(-1, 0, 1)},
         {"cause_of", Eigen::Vector3d(0, 0, 0)}},
        c);
  }();
  PipelineOptions options = [] {
    PipelineOptions o;
    o.mode = ExtractorMode::kKbMatch;
    return o;
  }();
  Pipeline pipeline{lexicon, &kb, nullptr, &model, options};
  std::vector<Document> corpus = {
      {"A", "", "Aspirin may help after a heart attack."},
      {"B", "", "Chest pain is typical of acute MI. Aspirin was given."},
      {"C", "", "Heart attack patients report chest pain."},
  };
};

TEST_CASE("indexing the three-document fixture") {
  Small s;
  Index index = IndexCorpus(s.corpus, s.pipeline, 2);
  CHECK(index.size() == 3);
  CHECK_NOTHROW(index.Validate());
  std::vector<std::string> keys;
  for (const auto &[id, net] : index.networks) {
    keys.push_back(id);
    CHECK(index.wl_vectors.count(id) == 1);
    CHECK(index.embeddings.count(id) == 1);
  }
  CHECK(keys == std::vector<std::string>{"A", "B", "C"});
  CHECK(index.cui_postings.at("C0004057") == std::vector<std::string>{"A", "B"});
  CHECK(index.cui_postings.at("C0008031") == std::vector<std::string>{"B", "C"});
  CHECK(index.networks.at("A").HasEdge("C0004057", "C0027051", "may_treat"));
  CHECK(index.iterations == 2);
  CHECK(index.pipeline.at("options").at("mode") == "kbmatch");

  CHECK(IndexCorpus(s.corpus, s.pipeline, 2).Serialize() == index.Serialize());

  std::vector<Document> dup = s.corpus;
  dup.push_back(s.corpus[0]);
  CHECK_THROWS_AS(IndexCorpus(dup, s.pipeline, 2), Error);
}

TEST_CASE("empty index is loadable") {
  Index empty = BuildIndex({}, nullptr, 3);
  CHECK(empty.size() == 0);
  Index back = Index::Deserialize(empty.Serialize());
  CHECK(back.size() == 0);
  CHECK(back.iterations == 3);
  SearchOptions opts;
  CHECK(Search(back, SemanticNetwork{}, nullptr, opts).empty());
}

TEST_CASE("search examples on the small fixture") {
  Small s;
  Index index = IndexCorpus(s.corpus, s.pipeline, 2);
  for (double lambda : {0.0, 0.6, 1.0}) {
    SearchOptions opts;
    opts.lambda = lambda;
    for (const Document &doc : s.corpus) {
      auto results = Search(index, s.pipeline, doc.text, opts);
      REQUIRE(!results.empty());
      CHECK(results[0].doc_id == doc.id);
      CHECK(std::abs(results[0].score - 1.0) < 1e-9);
      SemanticNetwork q = s.pipeline.Process({"q", "", doc.text});
      CHECK(testing::CompareWithOracle(
                results, testing::OracleRanking(index, q, lambda, false, &s.model), 10) ==
            "");
    }
  }
  SearchOptions prune;
  prune.prune = true;
  CHECK(Search(index, s.pipeline, "Nothing in the lexicon here.", prune).empty());
  SearchOptions all;
  CHECK(Search(index, s.pipeline, "Nothing in the lexicon here.", all).size() == 3);

  SearchOptions one;
  one.k = 1;
  CHECK(Search(index, s.pipeline, s.corpus[1].text, one).size() == 1);
  one.k = 0;
  CHECK_THROWS_AS(Search(index, s.pipeline, "x", one), Error);
  SearchOptions bad;
  bad.lambda = 1.5;
  CHECK_THROWS_AS(Search(index, s.pipeline, "x", bad), Error);
}

TEST_CASE("search does not grow the index compressor") {
  Small s;
  Index index = IndexCorpus(s.corpus, s.pipeline, 2);
  const auto before = index.compressor.size();
  Search(index, s.pipeline, "Acute MI with thoracic pain and ASA.", SearchOptions{});
  CHECK(index.compressor.size() == before);
}

TEST_CASE("results are ordered by score then id") {
  CHECK(ResultLess({"b", 0.9, 0}, {"a", 0.8, 0}));
  CHECK(ResultLess({"a", 0.5, 0}, {"b", 0.5, 0}));
  CHECK(!ResultLess({"b", 0.5, 0}, {"a", 0.5, 0}));
}

TEST_CASE("collection graph") {
  Small s;
  std::vector<Document> docs = s.corpus;
  docs.push_back({"D", "", s.corpus[0].text});  // duplicate of A
  Index index = IndexCorpus(docs, s.pipeline, 2);
  CollectionGraph all = BuildCollectionGraph(index, 0.6, 0.0);
  CHECK(all.edges.size() == 6);
  for (std::size_t i = 0; i < all.edges.size(); ++i) {
    CHECK(all.edges[i].a < all.edges[i].b);
    if (i) CHECK(std::tie(all.edges[i - 1].a, all.edges[i - 1].b) <
                 std::tie(all.edges[i].a, all.edges[i].b));
  }
  CollectionGraph dups = BuildCollectionGraph(index, 0.6, 1.0 - 1e-9);
  REQUIRE(dups.edges.size() == 1);
  CHECK(dups.edges[0].a == "A");
  CHECK(dups.edges[0].b == "D");

  CollectionGraph half = BuildCollectionGraph(index, 0.6, 0.5);
  std::vector<CollectionEdge> expected;
  for (const auto &[a, na] : index.networks)
    for (const auto &[b, nb] : index.networks) {
      if (!(a < b)) continue;
      const double sim = testing::OracleSimilarity(na, nb, 2, 0.6, &s.model);
      if (sim >= 0.5) expected.push_back({a, b, sim});
    }
  REQUIRE(half.edges.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(half.edges[i].a == expected[i].a);
    CHECK(half.edges[i].b == expected[i].b);
    CHECK(half.edges[i].similarity == doctest::Approx(expected[i].similarity).epsilon(1e-12));
  }

  const std::string dot = ToDot(half, index);
  CHECK(dot.rfind("graph collection {\n", 0) == 0);
  CHECK(dot.find("\"A\";") != std::string::npos);
  char expected_line[128];
  std::snprintf(expected_line, sizeof expected_line, "\"%s\" -- \"%s\" [label=\"%.3f\"];",
                half.edges[0].a.c_str(), half.edges[0].b.c_str(), half.edges[0].similarity);
  CHECK(dot.find(expected_line) != std::string::npos);
  CHECK(dot.back() == '\n');
  CHECK_THROWS_AS(BuildCollectionGraph(index, 0.6, 1.5), Error);
}

TEST_CASE("fixture corpus: oracle ranking, pruning and persistence") {
  auto world = testing::MakeWorld();
  const Index &index = world->index;
  REQUIRE(index.size() == 20);
  CHECK_NOTHROW(index.Validate());
  for (const auto &[id, emb] : index.embeddings) CHECK(!emb.vector.isZero());

  const std::string path =
      (std::filesystem::temp_directory_path() / "semnet_retrieval_test.idx").string();
  index.Save(path);
  Index loaded = Index::Load(path);
  std::filesystem::remove(path);
  CHECK(loaded.Serialize() == index.Serialize());

  std::vector<std::string> queries;
  for (const Document &d : world->corpus) queries.push_back(d.text);
  for (const Document &d : LoadCorpus(DataPath("queries.jsonl"))) queries.push_back(d.text);
  for (const std::string &q : queries) {
    SemanticNetwork qnet = world->pipeline->Process({"q", "", q});
    for (bool prune : {false, true}) {
      SearchOptions opts;
      opts.k = 20;
      opts.prune = prune;
      auto got = Search(index, qnet, &world->model, opts);
      CHECK(testing::CompareWithOracle(
                got, testing::OracleRanking(index, qnet, opts.lambda, prune, &world->model),
                opts.k) == "");
      CHECK(Search(loaded, qnet, &world->model, opts) == got);
    }
    // Pruned list = unpruned list restricted to concept-sharing documents.
    SearchOptions full;
    full.k = 20;
    SearchOptions pruned = full;
    pruned.prune = true;
    std::vector<std::string> restricted;
    for (const SearchResult &r : Search(index, qnet, &world->model, full)) {
      bool shared = false;
      for (const auto &[cui, node] : qnet.nodes)
        shared = shared || index.networks.at(r.doc_id).nodes.count(cui);
      if (shared) restricted.push_back(r.doc_id);
    }
    std::vector<std::string> got;
    for (const SearchResult &r : Search(index, qnet, &world->model, pruned))
      got.push_back(r.doc_id);
    CHECK(got == restricted);
  }
}

TEST_CASE("index format errors") {
  Small s;
  Index index = IndexCorpus(s.corpus, s.pipeline, 2);
  std::string data = index.Serialize();
  REQUIRE(data.rfind("semnet-index 1\n", 0) == 0);
  std::string wrong = data;
  wrong.replace(0, 15, "semnet-index 9\n");
  try {
    Index::Deserialize(wrong);
    FAIL("expected a format error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kFormat);
  }
  CHECK_THROWS_AS(Index::Deserialize("garbage"), Error);
  CHECK_THROWS_AS(Index::Deserialize(data.substr(0, data.size() / 2)), Error);
  CHECK_THROWS_AS(Index::Load("/nonexistent/dir/index.idx"), Error);
  CHECK_THROWS_AS(DocumentSimilarity(index, "A", "nope", 0.5), Error);
}

}  // namespace
}  // namespace semnet
