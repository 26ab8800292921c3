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

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "semnet/entity_linker.h"
#include "semnet/errors.h"
#include "semnet/eval_harness.h"
#include "semnet/kb_store.h"
#include "semnet/log.h"
#include "semnet/pipeline.h"
#include "semnet/relation_extractor.h"
#include "semnet/retrieval_engine.h"
#include "semnet/semantic_network.h"
#include "semnet/text.h"
#include "semnet/transe.h"

namespace semnet {

namespace {

// Every tunable of the pipeline, shared by all subcommands and by --config.
struct PipelineConfig {
  std::string lexicon;
  std::string triples;
  std::string corpus;
  std::string extractor;
  std::string model;
  std::string index;
  std::string networks;
  std::string extra_edges;
  std::string test;
  std::string query_file;
  std::string run;
  std::string qrels;
  std::string json_out;
  std::string out = "-";
  std::string tag = "semnet";

  std::string mode = "model";
  std::size_t window = 30;
  double theta_rel = 0.5;
  double ext_lr = 0.1;
  int ext_epochs = 50;
  double ext_l2 = 1e-4;

  int dim = 50;
  double margin = 1.0;
  double lr = 0.01;
  int epochs = 100;
  std::string dist = "l1";

  bool enrich = true;
  bool fuse = true;
  double tau_lp = 0.8;
  long m_cap = -1;

  int h = 3;
  double lambda = 0.6;
  double tau_doc = 0.5;
  int k = 10;
  bool prune = false;

  std::uint64_t seed = 1;
};

const CLI::Validator kUnit = CLI::Range(0.0, 1.0);

CLI::Validator HalfOpenUnit() {
  return CLI::Validator(
      [](std::string &value) -> std::string {
        double v = 0;
        if (!CLI::detail::lexical_cast(value, v) || !(v > 0.0 && v <= 1.0)) {
          return "Value " + value + " not in range (0 - 1]";
        }
        return {};
      },
      "in (0,1]");
}

CLI::Validator Positive() {
  return CLI::Validator(
      [](std::string &value) -> std::string {
        double v = 0;
        if (!CLI::detail::lexical_cast(value, v) || !(v > 0.0)) {
          return "Value " + value + " must be positive";
        }
        return {};
      },
      "> 0");
}

// Writes to the named file, or to `out` for "-".
void Emit(const std::string &path, const std::string &data, std::ostream &out) {
  if (path == "-" || path.empty()) {
    out << data;
    out.flush();
  } else {
    WriteFile(path, data);
  }
}

std::string Require(const std::string &value, const std::string &flag) {
  if (value.empty()) throw Error(ErrorKind::kUsage, flag + " is required");
  return value;
}

std::vector<nlohmann::json> ReadJsonRecords(const std::string &path) {
  std::string data = ReadFile(path);
  std::vector<nlohmann::json> records;
  std::size_t first = data.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && data[first] == '[') {
    try {
      for (nlohmann::json &j : nlohmann::json::parse(data)) records.push_back(std::move(j));
    } catch (const nlohmann::json::parse_error &e) {
      throw Error(ErrorKind::kParse, path + ": " + e.what());
    }
    return records;
  }
  std::istringstream in(data);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error &e) {
      throw Error(ErrorKind::kParse, fmt::format("{} line {}: {}", path,
                                                 line_number, e.what()));
    }
  }
  return records;
}

struct Query {
  std::string topic;
  std::string text;
};

std::vector<Query> ReadQueries(const std::string &path) {
  std::vector<Query> queries;
  for (const nlohmann::json &j : ReadJsonRecords(path)) {
    if (!j.is_object()) throw Error(ErrorKind::kParse, path + ": query is not an object");
    Query q;
    for (const char *key : {"id", "topic_id", "topic"}) {
      auto it = j.find(key);
      if (it == j.end()) continue;
      q.topic = it->is_string() ? it->get<std::string>() : it->dump();
      break;
    }
    if (q.topic.empty()) q.topic = std::to_string(queries.size() + 1);
    auto text = j.find("text");
    if (text == j.end() || !text->is_string()) {
      throw Error(ErrorKind::kParse, path + ": query " + q.topic + " lacks text");
    }
    q.text = text->get<std::string>();
    queries.push_back(std::move(q));
  }
  return queries;
}

std::vector<Triple> ReadTripleList(const std::string &path) {
  TripleStore store = TripleStore::Load(path);
  return {store.triples().begin(), store.triples().end()};
}

// Loaded resources backing a Pipeline.
struct Resources {
  std::optional<Lexicon> lexicon;
  std::optional<TripleStore> kb;
  std::optional<ExtractorModel> extractor;
  std::optional<EmbeddingModel> embeddings;
  std::unique_ptr<Pipeline> pipeline;
};

PipelineOptions OptionsFrom(const PipelineConfig &cfg) {
  PipelineOptions o;
  o.mode = ParseExtractorMode(cfg.mode);
  o.window = cfg.window;
  o.theta_rel = cfg.theta_rel;
  o.enrich = cfg.enrich;
  o.fuse = cfg.fuse;
  o.tau_lp = cfg.tau_lp;
  o.m_cap = cfg.m_cap;
  return o;
}

void LoadResources(Resources &r, const PipelineConfig &cfg,
                   const PipelineOptions &options, bool with_embeddings) {
  r.lexicon = Lexicon::Load(Require(cfg.lexicon, "--lexicon"));
  if (!cfg.triples.empty()) r.kb = TripleStore::Load(cfg.triples);
  if (options.mode == ExtractorMode::kModel) {
    r.extractor = ExtractorModel::Load(Require(cfg.extractor, "--extractor"));
  } else if (!r.kb) {
    throw Error(ErrorKind::kUsage, "--triples is required for --mode kbmatch");
  }
  if (with_embeddings && !cfg.model.empty()) {
    r.embeddings = EmbeddingModel::Load(cfg.model);
  }
  r.pipeline = std::make_unique<Pipeline>(
      *r.lexicon, r.kb ? &*r.kb : nullptr, r.extractor ? &*r.extractor : nullptr,
      r.embeddings ? &*r.embeddings : nullptr, options);
}

std::string JsonLines(const std::vector<nlohmann::json> &records) {
  std::string out;
  for (const nlohmann::json &j : records) out += j.dump() + "\n";
  return out;
}

// Subcommand bodies.

int RunLink(const PipelineConfig &cfg, std::ostream &out) {
  Lexicon lexicon = Lexicon::Load(Require(cfg.lexicon, "--lexicon"));
  std::vector<nlohmann::json> records;
  for (const Document &doc : LoadCorpus(Require(cfg.corpus, "--corpus"))) {
    records.push_back(MentionsToJson(doc.id, Link(doc.text, lexicon)));
  }
  Emit(cfg.out, JsonLines(records), out);
  return 0;
}

int RunExtract(const PipelineConfig &cfg, std::ostream &out) {
  PipelineOptions options = OptionsFrom(cfg);
  options.enrich = options.fuse = false;
  Resources r;
  LoadResources(r, cfg, options, false);
  std::vector<nlohmann::json> records;
  for (const Document &doc : LoadCorpus(Require(cfg.corpus, "--corpus"))) {
    records.push_back(EdgesToJson(doc.id, r.pipeline->Analyze(doc).edges));
  }
  Emit(cfg.out, JsonLines(records), out);
  return 0;
}

int RunTrainExtractor(const PipelineConfig &cfg) {
  Lexicon lexicon = Lexicon::Load(Require(cfg.lexicon, "--lexicon"));
  TripleStore kb = TripleStore::Load(Require(cfg.triples, "--triples"));
  std::vector<Document> corpus = LoadCorpus(Require(cfg.corpus, "--corpus"));
  std::vector<RelationInstance> instances =
      BuildTrainingInstances(corpus, lexicon, kb, cfg.window);
  ExtractorHyperparams hp;
  hp.learning_rate = cfg.ext_lr;
  hp.epochs = cfg.ext_epochs;
  hp.l2 = cfg.ext_l2;
  hp.seed = cfg.seed;
  ExtractorModel model = TrainExtractor(instances, hp);
  LogInfo(fmt::format("trained extractor on {} instances, {} labels, {} features; "
                      "training accuracy {:.4f}",
                      instances.size(), model.labels().size(), model.vocab().size(),
                      TrainingAccuracy(model, instances)));
  model.Save(Require(cfg.out == "-" ? std::string() : cfg.out, "--out"));
  return 0;
}

TransEConfig TransEConfigFrom(const PipelineConfig &cfg) {
  TransEConfig c;
  c.dim = cfg.dim;
  c.margin = cfg.margin;
  c.learning_rate = cfg.lr;
  c.epochs = cfg.epochs;
  c.distance = ParseDistance(cfg.dist);
  c.seed = cfg.seed;
  return c;
}

int RunTrainTransE(const PipelineConfig &cfg) {
  TripleStore kb = TripleStore::Load(Require(cfg.triples, "--triples"));
  if (!cfg.extra_edges.empty()) {
    std::size_t added = 0;
    for (const nlohmann::json &record : ReadJsonRecords(cfg.extra_edges)) {
      try {
        for (const nlohmann::json &e : record.at("edges")) {
          Edge edge = EdgeFromJson(e);
          added += kb.Add(Triple{edge.head, edge.relation, edge.tail});
        }
      } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::kParse, cfg.extra_edges + ": " + e.what());
      }
    }
    LogInfo(fmt::format("appended {} extracted triples", added));
  }
  if (kb.empty()) throw Error(ErrorKind::kValidation, "triple store is empty");
  TransEConfig config = TransEConfigFrom(cfg);
  std::set<std::string> relations(kb.relations().begin(), kb.relations().end());
  TrainReport report;
  EmbeddingModel model = Train(EmbeddingModel::Init(kb.entities(), relations, config),
                               kb, config, &report);
  if (!report.epoch_loss.empty()) {
    LogInfo(fmt::format("epoch 1 loss {:.6f}, epoch {} loss {:.6f}",
                        report.epoch_loss.front(), report.epoch_loss.size(),
                        report.epoch_loss.back()));
  }
  model.Save(Require(cfg.out == "-" ? std::string() : cfg.out, "--out"));
  return 0;
}

int RunEvalLp(const PipelineConfig &cfg, std::ostream &out) {
  EmbeddingModel model = EmbeddingModel::Load(Require(cfg.model, "--model"));
  TripleStore kb = TripleStore::Load(Require(cfg.triples, "--triples"));
  std::vector<Triple> test =
      cfg.test.empty() ? std::vector<Triple>(kb.triples().begin(), kb.triples().end())
                       : ReadTripleList(cfg.test);
  Emit(cfg.out, ToJson(EvaluateLinkPrediction(model, test, kb)).dump(2) + "\n", out);
  return 0;
}

int RunBuildGraphs(const PipelineConfig &cfg, std::ostream &out) {
  PipelineOptions options = OptionsFrom(cfg);
  options.enrich = options.fuse = false;
  Resources r;
  LoadResources(r, cfg, options, false);
  std::vector<nlohmann::json> records;
  for (const Document &doc : LoadCorpus(Require(cfg.corpus, "--corpus"))) {
    records.push_back(NetworkToJson(r.pipeline->Process(doc)));
  }
  Emit(cfg.out, JsonLines(records), out);
  return 0;
}

int RunEnrich(const PipelineConfig &cfg, std::ostream &out) {
  EmbeddingModel model = EmbeddingModel::Load(Require(cfg.model, "--model"));
  PipelineOptions options = OptionsFrom(cfg);
  options.Validate();
  std::vector<nlohmann::json> records;
  for (const nlohmann::json &j : ReadJsonRecords(Require(cfg.networks, "--networks"))) {
    SemanticNetwork net = NetworkFromJson(j);
    const std::size_t extracted = net.CountEdges(Provenance::kExtracted) +
                                  net.CountEdges(Provenance::kFused);
    if (options.fuse) net = FuseNetwork(std::move(net), model);
    if (options.enrich) {
      const std::size_t cap =
          options.m_cap < 0 ? extracted : static_cast<std::size_t>(options.m_cap);
      net = EnrichNetwork(std::move(net), model, options.tau_lp, cap);
    }
    records.push_back(NetworkToJson(net));
  }
  Emit(cfg.out, JsonLines(records), out);
  return 0;
}

int RunIndex(const PipelineConfig &cfg) {
  PipelineOptions options = OptionsFrom(cfg);
  Resources r;
  LoadResources(r, cfg, options, true);
  std::vector<Document> corpus = LoadCorpus(Require(cfg.corpus, "--corpus"));
  Index index = IndexCorpus(corpus, *r.pipeline, cfg.h);
  index.pipeline["lexicon"] = cfg.lexicon;
  index.pipeline["triples"] = cfg.triples;
  index.pipeline["extractor"] = cfg.extractor;
  index.pipeline["model"] = cfg.model;
  index.Save(Require(cfg.out == "-" ? std::string() : cfg.out, "--out"));
  LogInfo(fmt::format("indexed {} documents, {} WL labels", index.size(),
                      index.compressor.size()));
  return 0;
}

// Resource path recorded in the index unless overridden on the command line.
std::string Recorded(const Index &index, const std::string &override_value,
                     const char *key) {
  if (!override_value.empty()) return override_value;
  auto it = index.pipeline.find(key);
  return it != index.pipeline.end() && it->is_string() ? it->get<std::string>()
                                                       : std::string();
}

int RunSearch(const PipelineConfig &cfg, std::ostream &out) {
  Index index = Index::Load(Require(cfg.index, "--index"));
  std::vector<Query> queries = ReadQueries(Require(cfg.query_file, "--query-file"));
  PipelineConfig resolved = cfg;
  resolved.lexicon = Recorded(index, cfg.lexicon, "lexicon");
  resolved.triples = Recorded(index, cfg.triples, "triples");
  resolved.extractor = Recorded(index, cfg.extractor, "extractor");
  resolved.model = Recorded(index, cfg.model, "model");
  auto recorded = index.pipeline.find("options");
  PipelineOptions options = recorded != index.pipeline.end()
                                ? PipelineOptions::FromJson(*recorded)
                                : OptionsFrom(cfg);
  Resources r;
  LoadResources(r, resolved, options, true);

  SearchOptions search;
  search.k = cfg.k;
  search.lambda = cfg.lambda;
  search.prune = cfg.prune;
  Run run;
  run.tag = cfg.tag;
  for (const Query &q : queries) {
    std::vector<RunEntry> &entries = run.topics[q.topic];
    if (!entries.empty()) {
      throw Error(ErrorKind::kValidation, "duplicate query topic " + q.topic);
    }
    for (const SearchResult &res : Search(index, *r.pipeline, q.text, search)) {
      entries.push_back({res.doc_id, res.score});
    }
  }
  Emit(cfg.out, FormatRun(run), out);
  return 0;
}

int RunCollectionGraph(const PipelineConfig &cfg, std::ostream &out) {
  Index index = Index::Load(Require(cfg.index, "--index"));
  CollectionGraph graph = BuildCollectionGraph(index, cfg.lambda, cfg.tau_doc);
  Emit(cfg.out, ToDot(graph, index), out);
  return 0;
}

int RunEvaluate(const PipelineConfig &cfg, std::ostream &out) {
  std::ifstream run_in(Require(cfg.run, "--run"));
  if (!run_in) throw Error(ErrorKind::kIo, "cannot open " + cfg.run);
  Run run = ParseRun(run_in);
  Qrels qrels = LoadQrels(Require(cfg.qrels, "--qrels"));
  MetricReport report = EvaluateRun(run, qrels);
  if (!cfg.json_out.empty()) {
    WriteFile(cfg.json_out, ReportToJson(report).dump(2) + "\n");
  }
  Emit(cfg.out, FormatReport(report), out);
  return 0;
}

// Option registration helpers; each subcommand binds only what it uses.

void AddOut(CLI::App *app, PipelineConfig &c, const std::string &help) {
  app->add_option("--out,-o", c.out, help);
}

void AddLinkInputs(CLI::App *app, PipelineConfig &c) {
  app->add_option("--lexicon", c.lexicon, "Lexicon TSV");
  app->add_option("--corpus", c.corpus, "Corpus JSONL");
}

void AddExtraction(CLI::App *app, PipelineConfig &c) {
  app->add_option("--mode", c.mode, "Relation extraction mode")
      ->check(CLI::IsMember({"model", "kbmatch"}));
  app->add_option("--extractor", c.extractor, "Trained extractor model");
  app->add_option("--triples", c.triples, "Triple TSV");
  app->add_option("--window", c.window, "Max tokens between paired mentions");
  app->add_option("--theta-rel", c.theta_rel, "Extraction probability threshold")
      ->check(kUnit);
}

void AddEnrichment(CLI::App *app, PipelineConfig &c) {
  app->add_flag("--enrich,!--no-enrich", c.enrich, "Add predicted edges");
  app->add_flag("--fuse,!--no-fuse", c.fuse, "Fuse extracted confidences");
  app->add_option("--tau-lp", c.tau_lp, "Plausibility threshold for predicted edges")
      ->check(HalfOpenUnit());
  app->add_option("--m-cap", c.m_cap,
                  "Max predicted edges per document (-1: number of extracted edges)");
}

std::set<std::string> LongNames(const CLI::App &app) {
  std::set<std::string> names;
  for (const CLI::App *sub : app.get_subcommands({})) {
    for (const CLI::Option *opt : sub->get_options()) {
      for (const std::string &n : opt->get_lnames()) names.insert(n);
    }
  }
  return names;
}

bool HasLongName(const CLI::App &sub, const std::string &name) {
  for (const CLI::Option *opt : sub.get_options()) {
    const auto &names = opt->get_lnames();
    if (std::find(names.begin(), names.end(), name) != names.end()) return true;
  }
  return false;
}

bool GivenOnCommandLine(const std::vector<std::string> &args, const std::string &name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string &a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Reads `key = value` lines. Keys may use '-' or '_'.
std::vector<std::pair<std::string, std::string>> ReadConfigFile(
    const std::string &path) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(ReadFile(path));
  std::string line;
  std::size_t line_number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_number;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kUsage,
                  fmt::format("{} line {}: expected key = value", path, line_number));
    }
    std::string key = trim(t.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

}  // namespace

int Dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err) {
  PipelineConfig c;
  CLI::App app{"Semantic-network case retrieval over medical literature", "semnet"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value configuration file");
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Suppress informational logging");

  CLI::App *link = app.add_subcommand("link", "Detect concept mentions");
  AddLinkInputs(link, c);
  AddOut(link, c, "Mention JSONL output");

  CLI::App *extract = app.add_subcommand("extract", "Extract relation edges");
  AddLinkInputs(extract, c);
  AddExtraction(extract, c);
  AddOut(extract, c, "Edge JSONL output");

  CLI::App *train_ext =
      app.add_subcommand("train-extractor", "Train the extractor by distant supervision");
  AddLinkInputs(train_ext, c);
  train_ext->add_option("--triples", c.triples, "Triple TSV");
  train_ext->add_option("--window", c.window, "Max tokens between paired mentions");
  train_ext->add_option("--ext-lr", c.ext_lr, "SGD learning rate")->check(Positive());
  train_ext->add_option("--ext-epochs", c.ext_epochs, "SGD epochs")
      ->check(CLI::NonNegativeNumber);
  train_ext->add_option("--ext-l2", c.ext_l2, "L2 strength")
      ->check(CLI::NonNegativeNumber);
  train_ext->add_option("--seed", c.seed, "Random seed");
  AddOut(train_ext, c, "Model output file");

  CLI::App *train_transe =
      app.add_subcommand("train-transe", "Train translational embeddings");
  train_transe->add_option("--triples", c.triples, "Triple TSV");
  train_transe->add_option("--extra-edges", c.extra_edges,
                           "Edge JSONL whose edges are appended as training triples");
  train_transe->add_option("--dim", c.dim, "Embedding dimension")
      ->check(CLI::PositiveNumber);
  train_transe->add_option("--margin", c.margin, "Hinge margin")->check(Positive());
  train_transe->add_option("--lr", c.lr, "SGD learning rate")->check(Positive());
  train_transe->add_option("--epochs", c.epochs, "Training epochs")
      ->check(CLI::NonNegativeNumber);
  train_transe->add_option("--dist", c.dist, "Dissimilarity norm")
      ->check(CLI::IsMember({"l1", "l2"}));
  train_transe->add_option("--seed", c.seed, "Random seed");
  AddOut(train_transe, c, "Model output file");

  CLI::App *eval_lp = app.add_subcommand("eval-lp", "Link prediction ranking metrics");
  eval_lp->add_option("--model", c.model, "TransE model");
  eval_lp->add_option("--triples", c.triples, "Knowledge base used for filtering");
  eval_lp->add_option("--test", c.test, "Test triple TSV (default: --triples)");
  AddOut(eval_lp, c, "JSON report output");

  CLI::App *build = app.add_subcommand("build-graphs", "Build document networks");
  AddLinkInputs(build, c);
  AddExtraction(build, c);
  AddOut(build, c, "Network JSONL output");

  CLI::App *enrich = app.add_subcommand("enrich", "Fuse and enrich document networks");
  enrich->add_option("--networks", c.networks, "Network JSONL input");
  enrich->add_option("--model", c.model, "TransE model");
  AddEnrichment(enrich, c);
  AddOut(enrich, c, "Network JSONL output");

  CLI::App *index = app.add_subcommand("index", "Index a corpus");
  AddLinkInputs(index, c);
  AddExtraction(index, c);
  index->add_option("--model", c.model, "TransE model (optional)");
  AddEnrichment(index, c);
  index->add_option("--wl-iterations", c.h, "WL iterations")
      ->check(CLI::NonNegativeNumber);
  AddOut(index, c, "Index output file");

  CLI::App *search = app.add_subcommand("search", "Rank documents for query cases");
  search->add_option("--index", c.index, "Index file");
  search->add_option("--query-file", c.query_file, "Query JSON or JSONL");
  search->add_option("--k", c.k, "Results per query")->check(CLI::PositiveNumber);
  search->add_option("--lambda", c.lambda, "Weight of the graph kernel")->check(kUnit);
  search->add_flag("--prune", c.prune, "Only score documents sharing a concept");
  search->add_option("--tag", c.tag, "Run tag");
  search->add_option("--lexicon", c.lexicon, "Override the indexed lexicon path");
  search->add_option("--triples", c.triples, "Override the indexed triple path");
  search->add_option("--extractor", c.extractor, "Override the indexed extractor path");
  search->add_option("--model", c.model, "Override the indexed TransE model path");
  AddOut(search, c, "Run output");

  CLI::App *collection =
      app.add_subcommand("collection-graph", "Export the document similarity graph");
  collection->add_option("--index", c.index, "Index file");
  collection->add_option("--lambda", c.lambda, "Weight of the graph kernel")
      ->check(kUnit);
  collection->add_option("--tau-doc", c.tau_doc, "Similarity threshold")->check(kUnit);
  AddOut(collection, c, "DOT output");

  CLI::App *evaluate = app.add_subcommand("evaluate", "Score a run against qrels");
  evaluate->add_option("--run", c.run, "TREC run file");
  evaluate->add_option("--qrels", c.qrels, "TREC qrels file");
  evaluate->add_option("--json", c.json_out, "Also write the report as JSON");
  AddOut(evaluate, c, "Text report output");

  if (args.empty()) {
    err << app.help();
    return 1;
  }

  std::vector<std::string> argv = args;
  try {
    // Pull --config out first and splice its entries in as flags for the
    // chosen subcommand; explicit flags win.
    for (std::size_t i = 0; i < argv.size(); ++i) {
      if (argv[i] == "--config" && i + 1 < argv.size()) {
        config_path = argv[i + 1];
        argv.erase(argv.begin() + static_cast<std::ptrdiff_t>(i),
                   argv.begin() + static_cast<std::ptrdiff_t>(i + 2));
        break;
      }
      if (argv[i].rfind("--config=", 0) == 0) {
        config_path = argv[i].substr(9);
        argv.erase(argv.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
    }
    if (!config_path.empty()) {
      const std::set<std::string> known = LongNames(app);
      auto sub_pos = std::find_if(argv.begin(), argv.end(), [&](const std::string &a) {
        return app.get_subcommand_no_throw(a) != nullptr;
      });
      CLI::App *sub = sub_pos == argv.end() ? nullptr : app.get_subcommand(*sub_pos);
      std::vector<std::string> injected;
      for (const auto &[key, value] : ReadConfigFile(config_path)) {
        if (known.count(key) == 0 || key == "help") {
          throw Error(ErrorKind::kUsage, "unknown configuration key '" + key + "'");
        }
        if (sub && HasLongName(*sub, key) && !GivenOnCommandLine(argv, key)) {
          injected.push_back("--" + key + "=" + value);
        }
      }
      if (sub_pos != argv.end()) argv.insert(sub_pos + 1, injected.begin(), injected.end());
    }

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "semnet: " << e.what() << "\n";
    err << "Run with --help for usage.\n";
    return 1;
  } catch (const Error &e) {
    err << "semnet: " << e.what() << "\n";
    return e.kind() == ErrorKind::kUsage ? 1 : 2;
  }

  SetLogQuiet(quiet);
  try {
    if (link->parsed()) return RunLink(c, out);
    if (extract->parsed()) return RunExtract(c, out);
    if (train_ext->parsed()) return RunTrainExtractor(c);
    if (train_transe->parsed()) return RunTrainTransE(c);
    if (eval_lp->parsed()) return RunEvalLp(c, out);
    if (build->parsed()) return RunBuildGraphs(c, out);
    if (enrich->parsed()) return RunEnrich(c, out);
    if (index->parsed()) return RunIndex(c);
    if (search->parsed()) return RunSearch(c, out);
    if (collection->parsed()) return RunCollectionGraph(c, out);
    if (evaluate->parsed()) return RunEvaluate(c, out);
  } catch (const Error &e) {
    err << "semnet: " << e.what() << "\n";
    return e.kind() == ErrorKind::kUsage ? 1 : 2;
  } catch (const std::exception &e) {
    err << "semnet: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

int Dispatch(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return Dispatch(args, std::cout, std::cerr);
}

}  // namespace semnet
