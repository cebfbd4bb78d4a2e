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

#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include "mgtscope/evaluation.hpp"
#include "mgtscope/random.hpp"

namespace {

using mgt::AuthorLabel;

const AuthorLabel kH = AuthorLabel::human();
const AuthorLabel kM = AuthorLabel::any_machine();

TEST(Confusion, HandTally) {
  const auto cm = mgt::confusion_matrix({kM, kH, kH, kH}, {kM, kM, kH, kH}, {kM, kH});
  EXPECT_EQ(cm.at(0, 0), 1);
  EXPECT_EQ(cm.at(0, 1), 1);
  EXPECT_EQ(cm.at(1, 0), 0);
  EXPECT_EQ(cm.at(1, 1), 2);
  EXPECT_THROW(mgt::confusion_matrix({}, {}, {kM, kH}), mgt::Error);
  EXPECT_THROW(mgt::confusion_matrix({kM}, {kM, kH}, {kM, kH}), mgt::Error);
  EXPECT_THROW(mgt::confusion_matrix({AuthorLabel::machine("X")}, {kM}, {kM, kH}), mgt::Error);
}

TEST(WeightedPrf, HandDerivedCase) {
  mgt::ConfusionMatrix cm({kM, kH});
  cm.add(0, 0, 1);
  cm.add(0, 1, 1);
  cm.add(1, 1, 2);
  const auto m = mgt::weighted_prf(cm);
  EXPECT_NEAR(m.per_class[0].precision, 1.0, 1e-12);
  EXPECT_NEAR(m.per_class[0].recall, 0.5, 1e-12);
  EXPECT_NEAR(m.per_class[0].f1, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.per_class[1].precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.per_class[1].f1, 0.8, 1e-12);
  EXPECT_NEAR(m.f1, 0.7333, 1e-4);
  EXPECT_NEAR(m.recall, 0.75, 1e-12);
}

TEST(WeightedPrf, PerfectAndEmpty) {
  mgt::ConfusionMatrix cm({kH, kM});
  cm.add(0, 0, 3);
  cm.add(1, 1, 5);
  const auto m = mgt::weighted_prf(cm);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 1.0);
  EXPECT_THROW(mgt::weighted_prf(mgt::ConfusionMatrix({kH, kM})), mgt::Error);
}

mgt::ConfusionMatrix random_matrix(mgt::Rng& rng, std::size_t k) {
  std::vector<AuthorLabel> classes = {kH};
  for (std::size_t i = 1; i < k; ++i) classes.push_back(AuthorLabel::machine("g" + std::to_string(i)));
  mgt::ConfusionMatrix cm(classes);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t p = 0; p < k; ++p) {
      if (rng.uniform01() < 0.3) continue;
      cm.add(t, p, static_cast<std::int64_t>(rng.uniform_index(20)));
    }
  }
  cm.add(0, 0, 1);
  return cm;
}

TEST(WeightedPrf, PermutingClassesKeepsAggregates) {
  mgt::Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.uniform_index(6);
    const auto cm = random_matrix(rng, k);
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    rng.shuffle(std::span<std::size_t>(perm));
    std::vector<AuthorLabel> classes;
    for (std::size_t i = 0; i < k; ++i) classes.push_back(cm.classes()[perm[i]]);
    mgt::ConfusionMatrix permuted(classes);
    for (std::size_t t = 0; t < k; ++t) {
      for (std::size_t p = 0; p < k; ++p) permuted.add(t, p, cm.at(perm[t], perm[p]));
    }
    const auto a = mgt::weighted_prf(cm);
    const auto b = mgt::weighted_prf(permuted);
    EXPECT_NEAR(a.precision, b.precision, 1e-12);
    EXPECT_NEAR(a.recall, b.recall, 1e-12);
    EXPECT_NEAR(a.f1, b.f1, 1e-12);
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(b.per_class[i].f1, a.per_class[perm[i]].f1, 1e-12);
  }
}

TEST(WeightedPrf, MergeIsAdditive) {
  mgt::Rng rng(3);
  auto a = random_matrix(rng, 3);
  const auto b = random_matrix(rng, 3);
  const auto total = a.total() + b.total();
  a.merge(b);
  EXPECT_EQ(a.total(), total);
}

std::vector<mgt::Document> docs_with(const std::vector<AuthorLabel>& labels) {
  std::vector<mgt::Document> docs;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    mgt::Document d;
    d.doc_id = "d" + std::to_string(i);
    d.text = "x";
    d.label = labels[i];
    docs.push_back(d);
  }
  return docs;
}

TEST(EvaluateTask, TuringTestCollapsesGenerators) {
  const auto docs = docs_with({AuthorLabel::machine("Llama3-8"), kH});
  std::map<std::string, AuthorLabel> preds = {{"d0", AuthorLabel::machine("Qwen-7")}, {"d1", kH}};
  const auto r = mgt::evaluate_task(preds, docs, mgt::find_task(mgt::TaskId::kE0, mgt::Problem::kTuringTest));
  EXPECT_DOUBLE_EQ(r.metrics.f1, 1.0);
  EXPECT_EQ(r.confusion.total(), 2);
  const auto aa = mgt::evaluate_task(preds, docs,
                                     mgt::find_task(mgt::TaskId::kE0, mgt::Problem::kAuthorshipAttribution));
  EXPECT_LT(aa.metrics.f1, 1.0);
  EXPECT_EQ(aa.confusion.size(), 8u);
}

TEST(EvaluateTask, MissingPredictionNamesDocument) {
  const auto docs = docs_with({kH, kH});
  std::map<std::string, AuthorLabel> preds = {{"d0", kH}};
  try {
    mgt::evaluate_task(preds, docs, mgt::find_task(mgt::TaskId::kE0, mgt::Problem::kTuringTest));
    FAIL();
  } catch (const mgt::Error& e) {
    EXPECT_EQ(e.code(), mgt::ErrorCode::kMissingPrediction);
    EXPECT_NE(std::string(e.what()).find("d1"), std::string::npos);
  }
}

TEST(EvaluateTask, UnseenModelTaskIsTwoByTwo) {
  const auto yi = AuthorLabel::machine(std::string(mgt::kUnseenGenerator));
  const auto docs = docs_with({yi, yi, kH});
  std::map<std::string, AuthorLabel> preds = {
      {"d0", yi}, {"d1", AuthorLabel::machine("Gemma")}, {"d2", kH}};
  const auto r =
      mgt::evaluate_task(preds, docs, mgt::find_task(mgt::TaskId::kE6, mgt::Problem::kAuthorshipAttribution));
  EXPECT_EQ(r.confusion.size(), 2u);
  EXPECT_EQ(r.confusion.total(), 3);
  EXPECT_FALSE(mgt::render_eval_table(r).empty());
  EXPECT_NE(mgt::eval_report_json(r).find("confusion"), std::string::npos);
}

}  // namespace
