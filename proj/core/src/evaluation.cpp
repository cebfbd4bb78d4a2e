/* Copyright 2026 The mgtscope Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "mgtscope/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace mgt {

ConfusionMatrix::ConfusionMatrix(std::vector<AuthorLabel> classes)
    : classes_(std::move(classes)), counts_(classes_.size() * classes_.size(), 0) {}

std::int64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::int64_t s = 0;
  for (std::size_t p = 0; p < size(); ++p) s += at(truth, p);
  return s;
}

std::int64_t ConfusionMatrix::col_sum(std::size_t pred) const {
  std::int64_t s = 0;
  for (std::size_t t = 0; t < size(); ++t) s += at(t, pred);
  return s;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) {
    throw Error(ErrorCode::kInvalidArgument, "cannot merge confusion matrices over different classes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

namespace {

std::size_t index_in(const std::vector<AuthorLabel>& classes, const AuthorLabel& label) {
  auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) {
    throw Error(ErrorCode::kUnknownLabel, "label " + label.to_string() + " is not a task class");
  }
  return static_cast<std::size_t>(it - classes.begin());
}

}  // namespace

ConfusionMatrix confusion_matrix(const std::vector<AuthorLabel>& predictions,
                                 const std::vector<AuthorLabel>& truth,
                                 const std::vector<AuthorLabel>& classes) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "predictions and truth differ in length");
  }
  if (predictions.empty()) throw Error(ErrorCode::kEmptyList, "no predictions to tally");
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    cm.add(index_in(classes, truth[i]), index_in(classes, predictions[i]));
  }
  return cm;
}

PrfSummary weighted_prf(const ConfusionMatrix& confusion) {
  const std::int64_t total = confusion.total();
  if (confusion.size() == 0 || total == 0) {
    throw Error(ErrorCode::kEmptyList, "confusion matrix is empty");
  }
  PrfSummary out;
  const bool binary_tt = confusion.size() == 2 && confusion.classes()[0].is_human() &&
                         confusion.classes()[1].is_aggregate_machine();
  for (std::size_t c = 0; c < confusion.size(); ++c) {
    ClassMetrics m;
    m.label = confusion.classes()[c];
    m.support = confusion.row_sum(c);
    const std::int64_t tp = confusion.at(c, c);
    const std::int64_t predicted = confusion.col_sum(c);
    m.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = m.support > 0 ? static_cast<double>(tp) / static_cast<double>(m.support) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.positive = binary_tt && m.label.is_machine();
    const double w = static_cast<double>(m.support) / static_cast<double>(total);
    out.precision += w * m.precision;
    out.recall += w * m.recall;
    out.f1 += w * m.f1;
    out.per_class.push_back(std::move(m));
  }
  return out;
}

EvalReport evaluate_task(const std::map<std::string, AuthorLabel>& predictions,
                         const std::vector<Document>& test_docs, const TaskSpec& task) {
  const bool tt = task.problem == Problem::kTuringTest;
  std::optional<AuthorLabel> fold_target;
  if (task.fold_unlisted_machine_predictions) {
    for (const auto& l : task.class_labels) {
      if (l.is_machine()) fold_target = l;
    }
  }
  const auto normalize = [&](const AuthorLabel& label) {
    if (tt) return label.collapsed();
    if (fold_target && label.is_machine() &&
        std::find(task.class_labels.begin(), task.class_labels.end(), label) ==
            task.class_labels.end()) {
      return *fold_target;
    }
    return label;
  };

  std::vector<AuthorLabel> truth;
  std::vector<AuthorLabel> preds;
  truth.reserve(test_docs.size());
  preds.reserve(test_docs.size());
  for (const auto& doc : test_docs) {
    auto it = predictions.find(doc.doc_id);
    if (it == predictions.end()) {
      throw Error(ErrorCode::kMissingPrediction, "no prediction for doc_id \"" + doc.doc_id + "\"");
    }
    truth.push_back(normalize(doc.label));
    preds.push_back(normalize(it->second));
  }

  EvalReport report;
  report.task_id = task.task_id;
  report.problem = task.problem;
  report.confusion = confusion_matrix(preds, truth, task.class_labels);
  report.metrics = weighted_prf(report.confusion);
  return report;
}

std::string eval_report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["task"] = std::string(to_string(report.task_id));
  j["problem"] = std::string(to_string(report.problem));
  j["zero_division"] = "precision, recall and f1 are 0 where their denominator is 0";
  std::vector<std::string> classes;
  for (const auto& c : report.confusion.classes()) classes.push_back(c.to_string());
  j["classes"] = classes;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < report.confusion.size(); ++t) {
    std::vector<std::int64_t> row;
    for (std::size_t p = 0; p < report.confusion.size(); ++p) row.push_back(report.confusion.at(t, p));
    rows.push_back(row);
  }
  j["confusion"] = rows;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (const auto& m : report.metrics.per_class) {
    nlohmann::ordered_json e;
    e["label"] = m.label.to_string();
    e["precision"] = m.precision;
    e["recall"] = m.recall;
    e["f1"] = m.f1;
    e["support"] = m.support;
    if (m.positive) e["positive"] = true;
    per_class.push_back(e);
  }
  j["per_class"] = per_class;
  j["weighted"] = {{"precision", report.metrics.precision},
                   {"recall", report.metrics.recall},
                   {"f1", report.metrics.f1}};
  j["total"] = report.confusion.total();
  return j.dump(2) + "\n";
}

std::string render_eval_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  out << "Task " << to_string(report.task_id) << " (" << to_string(report.problem) << ")\n";
  std::snprintf(line, sizeof line, "%-24s %7s %7s %7s %9s\n", "class", "P", "R", "F1", "support");
  out << line;
  for (const auto& m : report.metrics.per_class) {
    std::string name = m.label.to_string();
    if (m.positive) name += " (+)";
    std::snprintf(line, sizeof line, "%-24s %7.3f %7.3f %7.3f %9lld\n", name.c_str(), m.precision,
                  m.recall, m.f1, static_cast<long long>(m.support));
    out << line;
  }
  std::snprintf(line, sizeof line, "%-24s %7.3f %7.3f %7.3f %9lld\n", "weighted",
                report.metrics.precision, report.metrics.recall, report.metrics.f1,
                static_cast<long long>(report.confusion.total()));
  out << line;
  return out.str();
}

}  // namespace mgt
