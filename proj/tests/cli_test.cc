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

#include "semnet/cli.h"

#include <filesystem>
#include <map>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "semnet/eval_harness.h"
#include "semnet/text.h"

namespace semnet {
namespace {

namespace fs = std::filesystem;
using testing::DataPath;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  args.push_back("--quiet");
  // --quiet belongs to the top-level app; put it first.
  std::rotate(args.rbegin(), args.rbegin() + 1, args.rend());
  const int code = Dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t Lines(const std::string &s) { return std::count(s.begin(), s.end(), '\n'); }

fs::path ScratchDir(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / ("semnet_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Trains both models and builds an index in `dir`.
void BuildArtifacts(const fs::path &dir) {
  REQUIRE(Cli({"train-extractor", "--lexicon", DataPath("lexicon.tsv"), "--corpus",
               DataPath("corpus.jsonl"), "--triples", DataPath("triples.tsv"), "--seed", "3",
               "--out", (dir / "ext.json").string()})
              .code == 0);
  REQUIRE(Cli({"train-transe", "--triples", DataPath("triples.tsv"), "--dim", "16",
               "--epochs", "40", "--seed", "3", "--out", (dir / "transe.json").string()})
              .code == 0);
  Result r = Cli({"index", "--lexicon", DataPath("lexicon.tsv"), "--corpus",
                  DataPath("corpus.jsonl"), "--triples", DataPath("triples.tsv"),
                  "--extractor", (dir / "ext.json").string(), "--model",
                  (dir / "transe.json").string(), "--out", (dir / "index.idx").string()});
  INFO(r.err);
  REQUIRE(r.code == 0);
}

TEST_CASE("usage errors exit 1") {
  Result none = [] {
    std::ostringstream out, err;
    const int code = Dispatch(std::vector<std::string>{}, out, err);
    return Result{code, out.str(), err.str()};
  }();
  CHECK(none.code == 1);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(none.err.find("search") != std::string::npos);

  CHECK(Cli({"frobnicate"}).code == 1);
  CHECK(Cli({"link", "--no-such-flag", "x"}).code == 1);

  Result theta = Cli({"extract", "--lexicon", DataPath("lexicon4.tsv"), "--corpus",
                      DataPath("corpus.jsonl"), "--mode", "kbmatch", "--triples",
                      DataPath("triples4.tsv"), "--theta-rel", "1.5"});
  CHECK(theta.code == 1);
  CHECK(theta.err.find("--theta-rel") != std::string::npos);

  CHECK(Cli({"search", "--index", "x", "--query-file", "y", "--k", "0"}).code == 1);
  CHECK(Cli({"extract", "--mode", "magic"}).code == 1);
  // A required path left out.
  CHECK(Cli({"link", "--corpus", DataPath("corpus.jsonl")}).code == 1);

  Result help = Cli({"--help"});
  CHECK(help.code == 0);
}

TEST_CASE("data errors exit 2") {
  Result missing = Cli({"link", "--lexicon", "/nonexistent/lexicon.tsv", "--corpus",
                        DataPath("corpus.jsonl")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/nonexistent/lexicon.tsv") != std::string::npos);

  fs::path dir = ScratchDir("data");
  WriteFile((dir / "bad.tsv").string(), "C1\tName\n");
  CHECK(Cli({"link", "--lexicon", (dir / "bad.tsv").string(), "--corpus",
             DataPath("corpus.jsonl")})
            .code == 2);
  WriteFile((dir / "qrels").string(), "1 0 d1\n");
  WriteFile((dir / "run").string(), "1 Q0 d1 1 0.5 t\n");
  Result q = Cli({"evaluate", "--run", (dir / "run").string(), "--qrels", (dir / "qrels").string()});
  CHECK(q.code == 2);
  CHECK(q.err.find("line 1") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("link and extract write JSONL") {
  Result link = Cli({"link", "--lexicon", DataPath("lexicon.tsv"), "--corpus",
                     DataPath("corpus.jsonl")});
  REQUIRE(link.code == 0);
  CHECK(Lines(link.out) == 20);
  nlohmann::json first = nlohmann::json::parse(link.out.substr(0, link.out.find('\n')));
  CHECK(first.at("doc_id") == "D001");
  CHECK(first.at("mentions").is_array());

  Result ext = Cli({"extract", "--lexicon", DataPath("lexicon.tsv"), "--corpus",
                    DataPath("corpus.jsonl"), "--mode", "kbmatch", "--triples",
                    DataPath("triples.tsv")});
  REQUIRE(ext.code == 0);
  CHECK(Lines(ext.out) == 20);
  std::istringstream in(ext.out);
  std::size_t edges = 0;
  for (std::string line; std::getline(in, line);) {
    nlohmann::json j = nlohmann::json::parse(line);
    for (const auto &e : j.at("edges")) {
      CHECK(e.at("prov") == "extracted");
      CHECK(e.at("conf") == 0.5);
      ++edges;
    }
  }
  CHECK(edges > 0);
}

TEST_CASE("full pipeline through the CLI") {
  fs::path dir = ScratchDir("pipeline");
  BuildArtifacts(dir);

  WriteFile((dir / "q.json").string(),
            R"([{"id": "101", "text": "A patient with diabetes was started on metformin."}])");
  Result one = Cli({"search", "--index", (dir / "index.idx").string(), "--query-file",
                    (dir / "q.json").string(), "--k", "10"});
  INFO(one.err);
  REQUIRE(one.code == 0);
  CHECK(Lines(one.out) == 10);
  std::istringstream run_in(one.out);
  Run run = ParseRun(run_in);
  CHECK(run.topics.at("101").size() == 10);
  CHECK(run.tag == "semnet");

  Result all = Cli({"search", "--index", (dir / "index.idx").string(), "--query-file",
                    DataPath("queries.jsonl"), "--k", "10", "--tag", "mine", "--out",
                    (dir / "run.txt").string()});
  REQUIRE(all.code == 0);
  CHECK(all.out.empty());
  CHECK(Lines(ReadFile((dir / "run.txt").string())) == 50);

  Result eval = Cli({"evaluate", "--run", (dir / "run.txt").string(), "--qrels",
                     DataPath("qrels.txt"), "--json", (dir / "report.json").string()});
  REQUIRE(eval.code == 0);
  CHECK(eval.out.find("mean") != std::string::npos);
  nlohmann::json report = nlohmann::json::parse(ReadFile((dir / "report.json").string()));
  CHECK(report.contains("mean"));

  Result dot = Cli({"collection-graph", "--index", (dir / "index.idx").string(), "--tau-doc",
                    "0.5"});
  REQUIRE(dot.code == 0);
  CHECK(dot.out.rfind("graph collection {", 0) == 0);

  Result lp = Cli({"eval-lp", "--model", (dir / "transe.json").string(), "--triples",
                   DataPath("triples.tsv")});
  REQUIRE(lp.code == 0);
  CHECK(nlohmann::json::parse(lp.out).at("filtered").contains("hits_at_10"));

  Result graphs = Cli({"build-graphs", "--lexicon", DataPath("lexicon.tsv"), "--corpus",
                       DataPath("corpus.jsonl"), "--triples", DataPath("triples.tsv"),
                       "--extractor", (dir / "ext.json").string(), "--out",
                       (dir / "nets.jsonl").string()});
  REQUIRE(graphs.code == 0);
  Result enriched = Cli({"enrich", "--networks", (dir / "nets.jsonl").string(), "--model",
                         (dir / "transe.json").string(), "--tau-lp", "0.1", "--m-cap", "2"});
  REQUIRE(enriched.code == 0);
  CHECK(Lines(enriched.out) == 20);
  std::istringstream nets(enriched.out);
  for (std::string line; std::getline(nets, line);) {
    int predicted = 0;
    for (const auto &e : nlohmann::json::parse(line).at("edges"))
      predicted += e.at("prov") == "predicted";
    CHECK(predicted <= 2);
  }
  fs::remove_all(dir);
}

TEST_CASE("config files feed flags and lose to explicit ones") {
  fs::path dir = ScratchDir("config");
  BuildArtifacts(dir);
  WriteFile((dir / "q.json").string(), R"([{"id": "7", "text": "Chest pain and aspirin."}])");
  WriteFile((dir / "run.cfg").string(),
            "# search settings\n"
            "index = " + (dir / "index.idx").string() + "\n"
            "query_file = \"" + (dir / "q.json").string() + "\"\n"
            "k = 3\n"
            "lambda = 0.4\n"
            "tau_doc = 0.2\n");  // belongs to another subcommand: accepted, unused
  Result cfg = Cli({"--config", (dir / "run.cfg").string(), "search"});
  INFO(cfg.err);
  REQUIRE(cfg.code == 0);
  CHECK(Lines(cfg.out) == 3);
  Result flag = Cli({"--config", (dir / "run.cfg").string(), "search", "--k", "5"});
  REQUIRE(flag.code == 0);
  CHECK(Lines(flag.out) == 5);

  WriteFile((dir / "bad.cfg").string(), "k = 3\nbogus_key = 1\n");
  Result bad = Cli({"--config", (dir / "bad.cfg").string(), "search"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("bogus-key") != std::string::npos);

  WriteFile((dir / "range.cfg").string(), "lambda = 2\n");
  CHECK(Cli({"--config", (dir / "range.cfg").string(), "search", "--index",
             (dir / "index.idx").string(), "--query-file", (dir / "q.json").string()})
            .code == 1);
  fs::remove_all(dir);
}

TEST_CASE("same seed, same bytes") {
  // The index records resource paths, so both runs use the same directory.
  fs::path dir = ScratchDir("seed");
  BuildArtifacts(dir);
  std::map<std::string, std::string> first;
  for (const char *f : {"ext.json", "transe.json", "index.idx"})
    first[f] = ReadFile((dir / f).string());
  BuildArtifacts(dir);
  for (const auto &[f, bytes] : first) CHECK(ReadFile((dir / f).string()) == bytes);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace semnet
