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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mgtscope/corpus.hpp"

namespace mgt {

// Rows are truth, columns are predictions, both in `classes()` order.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<AuthorLabel> classes);

  const std::vector<AuthorLabel>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }

  std::int64_t at(std::size_t truth, std::size_t pred) const { return counts_[truth * size() + pred]; }
  void add(std::size_t truth, std::size_t pred, std::int64_t n = 1) { counts_[truth * size() + pred] += n; }

  std::int64_t row_sum(std::size_t truth) const;
  std::int64_t col_sum(std::size_t pred) const;
  std::int64_t total() const;

  // Sums another matrix over the same classes.
  void merge(const ConfusionMatrix& other);

 private:
  std::vector<AuthorLabel> classes_;
  std::vector<std::int64_t> counts_;
};

// Throws kEmptyList on empty input, kLengthMismatch, kUnknownLabel.
ConfusionMatrix confusion_matrix(const std::vector<AuthorLabel>& predictions,
                                 const std::vector<AuthorLabel>& truth,
                                 const std::vector<AuthorLabel>& classes);

struct ClassMetrics {
  AuthorLabel label = AuthorLabel::human();
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
  bool positive = false;  // MACHINE in a binary report
};

struct PrfSummary {
  std::vector<ClassMetrics> per_class;
  // Support-weighted averages.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Per-class P/R/F1 (0 where undefined) and their support-weighted means.
// Throws kEmptyList when the matrix holds no counts.
PrfSummary weighted_prf(const ConfusionMatrix& confusion);

struct EvalReport {
  TaskId task_id = TaskId::kE0;
  Problem problem = Problem::kTuringTest;
  ConfusionMatrix confusion{{}};
  PrfSummary metrics;
};

// Scores predictions for every test document under the task's label space.
// For TT, machine labels collapse to the aggregate MACHINE class first.
// Throws kMissingPrediction naming the document, kUnknownLabel for labels
// outside the task.
EvalReport evaluate_task(const std::map<std::string, AuthorLabel>& predictions,
                         const std::vector<Document>& test_docs, const TaskSpec& task);

// JSON mirror of the report with full-precision reals.
std::string eval_report_json(const EvalReport& report);
// Fixed-width P / R / F1 table, three decimals.
std::string render_eval_table(const EvalReport& report);

}  // namespace mgt
