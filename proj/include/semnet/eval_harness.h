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

#ifndef SEMNET_EVAL_HARNESS_H_
#define SEMNET_EVAL_HARNESS_H_

#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace semnet {

// TREC relevance judgments: (topic, doc) -> grade.
struct Qrels {
  std::map<std::pair<std::string, std::string>, int> judgments;

  // Topics in sorted order.
  std::vector<std::string> Topics() const;
  int Grade(const std::string &topic, const std::string &doc) const;
  bool empty() const { return judgments.empty(); }
};

// Lines of `topic 0 doc grade`, whitespace separated.
Qrels ParseQrels(std::istream &in);
Qrels LoadQrels(const std::string &path);

struct RunEntry {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const RunEntry &) const = default;
};

struct Run {
  std::string tag = "semnet";
  // Ranked entries per topic, best first.
  std::map<std::string, std::vector<RunEntry>> topics;

  // Throws kValidation when scores increase or a doc repeats within a topic.
  void Validate() const;
  bool operator==(const Run &) const = default;
};

// `topic Q0 doc rank score tag` lines, rank from 1, score with 6 decimals.
std::string FormatRun(const Run &run);
void WriteRun(const Run &run, const std::string &path);
Run ParseRun(std::istream &in);

struct TopicMetrics {
  std::map<int, double> precision_at;
  std::map<int, double> ndcg_at;
  double r_precision = 0.0;
  double average_precision = 0.0;
  int relevant = 0;
};

struct MetricReport {
  std::vector<int> ks;
  std::map<std::string, TopicMetrics> per_topic;
  TopicMetrics mean;
  std::vector<std::string> warnings;
};

// Binary relevance (grade >= 1) for P@k, R-precision and AP; exponential
// gain nDCG@k against the ideal ordering of all judged documents. Means are
// taken over the topics that appear in the qrels.
MetricReport EvaluateRun(const Run &run, const Qrels &qrels,
                         const std::vector<int> &ks = {5, 10});

std::string FormatReport(const MetricReport &report);
nlohmann::json ReportToJson(const MetricReport &report);

}  // namespace semnet

#endif  // SEMNET_EVAL_HARNESS_H_
