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

#include <benchmark/benchmark.h>

#include "mgtscope/classify.hpp"
#include "mgtscope/contrastive.hpp"
#include "mgtscope/pairstats.hpp"
#include "mgtscope/random.hpp"
#include "mgtscope/textstats.hpp"
#include "synth.hpp"

namespace {

void BM_EditDistance(benchmark::State& state) {
  mgt::Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::string a(n, 'a'), b(n, 'a');
  for (auto& c : a) c = static_cast<char>('a' + rng.uniform_index(8));
  for (auto& c : b) c = static_cast<char>('a' + rng.uniform_index(8));
  for (auto _ : state) benchmark::DoNotOptimize(mgt::edit_distance(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EditDistance)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared);

void BM_TextStats(benchmark::State& state) {
  mgt::Rng rng(2);
  mgt::Document doc;
  doc.doc_id = "d";
  doc.text = synth::random_text(rng, 400, 400);
  mgt::PosTagSequence tags{"d", std::vector<std::string>(400, "NOUN")};
  for (auto _ : state) benchmark::DoNotOptimize(mgt::text_stats_report(doc, &tags));
}
BENCHMARK(BM_TextStats);

void BM_PairStats(benchmark::State& state) {
  mgt::Rng rng(3);
  mgt::Document m, h;
  m.text = synth::random_text(rng, 300, 300);
  h.text = synth::random_text(rng, 300, 300);
  for (auto _ : state) benchmark::DoNotOptimize(mgt::pair_stats_report(m, h, {}));
}
BENCHMARK(BM_PairStats);

void BM_TripletObjective(benchmark::State& state) {
  const auto g = synth::gaussian_classes(8, 768, 32, 1.0, 4);
  const auto head = mgt::ProjectionHead::random(768, {}, 256, mgt::Activation::kTanh, 5);
  const auto triplets = mgt::mine_index_triplets(g.labels, static_cast<std::size_t>(state.range(0)), 6,
                                                 mgt::MiningStrategy::kUniformRandom);
  for (auto _ : state) benchmark::DoNotOptimize(mgt::triplet_objective(head, g.x, triplets, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TripletObjective)->Arg(64)->Arg(256);

void BM_TrainLogistic(benchmark::State& state) {
  mgt::Rng rng(7);
  std::vector<mgt::FeatureVector> rows;
  std::vector<mgt::AuthorLabel> labels;
  for (int i = 0; i < 1000; ++i) {
    mgt::FeatureVector v{"d" + std::to_string(i), {}};
    for (int j = 0; j < 10; ++j) v.values.push_back(rng.normal() + (i % 2 ? 0.5 : -0.5));
    rows.push_back(v);
    labels.push_back(i % 2 ? mgt::AuthorLabel::human() : mgt::AuthorLabel::any_machine());
  }
  const std::vector<std::string> schema = {"f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9"};
  mgt::LogisticHyper hyper;
  hyper.epochs = 20;
  for (auto _ : state) benchmark::DoNotOptimize(mgt::train_logistic(schema, rows, labels, hyper));
}
BENCHMARK(BM_TrainLogistic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
