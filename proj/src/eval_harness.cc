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

#include "semnet/eval_harness.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "semnet/errors.h"
#include "semnet/log.h"
#include "semnet/text.h"

namespace semnet {

std::vector<std::string> Qrels::Topics() const {
  std::set<std::string> topics;
  for (const auto &[key, grade] : judgments) topics.insert(key.first);
  return {topics.begin(), topics.end()};
}

int Qrels::Grade(const std::string &topic, const std::string &doc) const {
  auto it = judgments.find({topic, doc});
  return it == judgments.end() ? 0 : it->second;
}

Qrels ParseQrels(std::istream &in) {
  Qrels qrels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(f);
    if (cols.empty()) continue;
    const std::string where = "qrels line " + std::to_string(line_number);
    if (cols.size() != 4) {
      throw Error(ErrorKind::kParse, where + ": expected 4 columns");
    }
    int grade = 0;
    std::size_t used = 0;
    try {
      grade = std::stoi(cols[3], &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != cols[3].size()) {
      throw Error(ErrorKind::kParse, where + ": relevance is not an integer");
    }
    if (grade < 0) {
      throw Error(ErrorKind::kValidation, where + ": negative relevance");
    }
    if (!qrels.judgments.emplace(std::make_pair(cols[0], cols[2]), grade).second) {
      throw Error(ErrorKind::kValidation,
                  where + ": duplicate judgment for topic " + cols[0] +
                      ", document " + cols[2]);
    }
  }
  return qrels;
}

Qrels LoadQrels(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return ParseQrels(in);
}

void Run::Validate() const {
  for (const auto &[topic, entries] : topics) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!seen.insert(entries[i].doc_id).second) {
        throw Error(ErrorKind::kValidation, "topic " + topic + ": document " +
                                                entries[i].doc_id + " repeated");
      }
      if (i > 0 && entries[i].score > entries[i - 1].score) {
        throw Error(ErrorKind::kValidation,
                    "topic " + topic + ": scores increase at rank " +
                        std::to_string(i + 1));
      }
    }
  }
}

std::string FormatRun(const Run &run) {
  run.Validate();
  std::string out;
  for (const auto &[topic, entries] : run.topics) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      out += fmt::format("{} Q0 {} {} {:.6f} {}\n", topic, entries[i].doc_id,
                         i + 1, entries[i].score, run.tag);
    }
  }
  return out;
}

void WriteRun(const Run &run, const std::string &path) {
  WriteFile(path, FormatRun(run));
}

Run ParseRun(std::istream &in) {
  Run run;
  std::string line;
  std::size_t line_number = 0;
  bool have_tag = false;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(f);
    if (cols.empty()) continue;
    const std::string where = "run line " + std::to_string(line_number);
    if (cols.size() != 6) throw Error(ErrorKind::kParse, where + ": expected 6 columns");
    std::vector<RunEntry> &entries = run.topics[cols[0]];
    std::size_t rank = 0;
    double score = 0.0;
    try {
      rank = std::stoul(cols[3]);
      score = std::stod(cols[4]);
    } catch (const std::exception &) {
      throw Error(ErrorKind::kParse, where + ": bad rank or score");
    }
    if (rank != entries.size() + 1) {
      throw Error(ErrorKind::kParse, where + ": ranks must be consecutive from 1");
    }
    entries.push_back({cols[2], score});
    if (!have_tag) {
      run.tag = cols[5];
      have_tag = true;
    }
  }
  run.Validate();
  return run;
}

namespace {

double Dcg(const std::vector<int> &grades, std::size_t k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) {
    dcg += (std::exp2(grades[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

}  // namespace

MetricReport EvaluateRun(const Run &run, const Qrels &qrels,
                         const std::vector<int> &ks) {
  MetricReport report;
  report.ks = ks;
  for (int k : ks) {
    if (k < 1) throw Error(ErrorKind::kUsage, "cutoff k must be >= 1");
    report.mean.precision_at[k] = 0.0;
    report.mean.ndcg_at[k] = 0.0;
  }
  const std::vector<std::string> topics = qrels.Topics();
  if (topics.empty()) {
    report.warnings.push_back("qrels are empty; all metrics reported as 0");
  }
  static const std::vector<RunEntry> kNoEntries;
  for (const std::string &topic : topics) {
    std::vector<int> judged;
    for (const auto &[key, grade] : qrels.judgments) {
      if (key.first == topic) judged.push_back(grade);
    }
    std::sort(judged.rbegin(), judged.rend());
    const int relevant = static_cast<int>(
        std::count_if(judged.begin(), judged.end(), [](int g) { return g >= 1; }));

    auto it = run.topics.find(topic);
    const std::vector<RunEntry> &entries =
        it == run.topics.end() ? kNoEntries : it->second;
    std::vector<int> grades;
    grades.reserve(entries.size());
    for (const RunEntry &e : entries) grades.push_back(qrels.Grade(topic, e.doc_id));

    TopicMetrics m;
    m.relevant = relevant;
    if (relevant == 0) {
      report.warnings.push_back("topic " + topic + " has no relevant documents");
    }
    auto relevant_in_top = [&](std::size_t k) {
      return static_cast<double>(std::count_if(
          grades.begin(), grades.begin() + static_cast<std::ptrdiff_t>(
                                               std::min(k, grades.size())),
          [](int g) { return g >= 1; }));
    };
    for (int k : ks) {
      m.precision_at[k] = relevant_in_top(static_cast<std::size_t>(k)) / k;
      const double ideal = Dcg(judged, static_cast<std::size_t>(k));
      m.ndcg_at[k] =
          ideal > 0 ? Dcg(grades, static_cast<std::size_t>(k)) / ideal : 0.0;
    }
    if (relevant > 0) {
      m.r_precision = relevant_in_top(static_cast<std::size_t>(relevant)) / relevant;
      double hits = 0.0, sum = 0.0;
      for (std::size_t i = 0; i < grades.size(); ++i) {
        if (grades[i] >= 1) {
          hits += 1.0;
          sum += hits / static_cast<double>(i + 1);
        }
      }
      m.average_precision = sum / relevant;
    }
    for (int k : ks) {
      report.mean.precision_at[k] += m.precision_at[k];
      report.mean.ndcg_at[k] += m.ndcg_at[k];
    }
    report.mean.r_precision += m.r_precision;
    report.mean.average_precision += m.average_precision;
    report.mean.relevant += relevant;
    report.per_topic.emplace(topic, std::move(m));
  }
  if (!topics.empty()) {
    const double n = static_cast<double>(topics.size());
    for (int k : ks) {
      report.mean.precision_at[k] /= n;
      report.mean.ndcg_at[k] /= n;
    }
    report.mean.r_precision /= n;
    report.mean.average_precision /= n;
  }
  for (const std::string &w : report.warnings) LogWarning(w);
  return report;
}

std::string FormatReport(const MetricReport &report) {
  std::vector<std::string> columns;
  for (int k : report.ks) columns.push_back(fmt::format("P@{}", k));
  for (int k : report.ks) columns.push_back(fmt::format("nDCG@{}", k));
  columns.push_back("Rprec");
  columns.push_back("AP");

  std::string out =
      "# nDCG gain: 2^grade - 1, discount: log2(rank + 1); relevant: grade >= 1\n";
  std::size_t width = 8;
  for (const auto &[topic, m] : report.per_topic) width = std::max(width, topic.size());
  out += fmt::format("{:<{}}", "topic", width);
  for (const std::string &c : columns) out += fmt::format(" {:>8}", c);
  out += "\n";
  auto row = [&](const std::string &name, const TopicMetrics &m) {
    std::string line = fmt::format("{:<{}}", name, width);
    for (int k : report.ks) line += fmt::format(" {:>8.4f}", m.precision_at.at(k));
    for (int k : report.ks) line += fmt::format(" {:>8.4f}", m.ndcg_at.at(k));
    line += fmt::format(" {:>8.4f} {:>8.4f}\n", m.r_precision, m.average_precision);
    return line;
  };
  for (const auto &[topic, m] : report.per_topic) out += row(topic, m);
  out += row("mean", report.mean);
  return out;
}

nlohmann::json ReportToJson(const MetricReport &report) {
  auto metrics = [&](const TopicMetrics &m) {
    nlohmann::json j;
    for (int k : report.ks) {
      j["P@" + std::to_string(k)] = m.precision_at.at(k);
      j["nDCG@" + std::to_string(k)] = m.ndcg_at.at(k);
    }
    j["Rprec"] = m.r_precision;
    j["AP"] = m.average_precision;
    return j;
  };
  nlohmann::json topics = nlohmann::json::object();
  for (const auto &[topic, m] : report.per_topic) topics[topic] = metrics(m);
  return {{"gain", "exponential"},
          {"topics", std::move(topics)},
          {"mean", metrics(report.mean)},
          {"warnings", report.warnings}};
}

}  // namespace semnet
