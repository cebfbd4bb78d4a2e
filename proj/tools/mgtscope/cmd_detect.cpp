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
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mgtscope/classify.hpp"
#include "mgtscope/report_writer.hpp"
#include "mgtscope/trace_metrics.hpp"

namespace mgt::cli {

namespace {

struct ScoreArgs {
  std::string traces;
  std::string features = "log_likelihood,rank,log_rank,entropy,gltr,lrr,curvature";
  std::string buckets = "10,100,1000";
  std::string lrr_sentinel = "nan";
  bool skip_invalid = false;
  std::string out = "features.csv";
};

struct TrainLrArgs {
  std::string features;
  std::string corpus;
  std::string problem = "TT";
  std::string split = "train";
  std::string resplit;
  double lr = 0.1;
  int epochs = 200;
  double l2 = 1e-4;
  std::size_t batch = 32;
  bool allow_unknown = false;
  bool skip_invalid = false;
  std::string out = "lr_model.json";
  std::string curve_out = "lr_loss_curve.tsv";
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(',', start);
    const std::string part = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!part.empty()) out.push_back(part);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

void run_score(RunContext& ctx, const ScoreArgs& a) {
  FeatureConfig config;
  config.features.clear();
  for (const auto& name : split_commas(a.features)) {
    auto f = parse_feature(name);
    if (!f) throw UsageError("--features: unknown feature \"" + name + "\"");
    config.features.push_back(*f);
  }
  if (config.features.empty()) throw UsageError("--features is empty");
  config.gltr_buckets.clear();
  for (const auto& b : split_commas(a.buckets)) {
    char* end = nullptr;
    const long long v = std::strtoll(b.c_str(), &end, 10);
    if (*end != '\0') throw UsageError("--gltr-buckets: not an integer: " + b);
    config.gltr_buckets.push_back(v);
  }
  {
    char* end = nullptr;
    config.lrr_sentinel = std::strtod(a.lrr_sentinel.c_str(), &end);
    if (*end != '\0' || a.lrr_sentinel.empty()) throw UsageError("--lrr-sentinel: not a number");
  }

  const auto path = ctx.input("--traces", a.traces);
  auto loaded = load_traces(path);
  check_line_errors(ctx, a.traces, loaded.errors, a.skip_invalid);
  if (loaded.traces.empty()) throw Error(ErrorCode::kEmptyList, a.traces + ": no traces");
  const FeatureBatch batch = extract_features(loaded.traces, config, ctx.threads());
  for (const auto& n : batch.notes) {
    ctx.warn(n);
    ctx.note(n);
  }
  const auto out = ctx.output_path(a.out);
  write_feature_csv(out, batch);
  ctx.record_output(out);
}

void run_train_lr(RunContext& ctx, const TrainLrArgs& a) {
  const Problem problem = parse_problem_flag(a.problem);
  const auto split = parse_split_flag("--split", a.split);
  const auto features_path = ctx.input("--features", a.features);
  auto docs = load_corpus_checked(ctx, a.corpus, a.allow_unknown, a.skip_invalid);
  docs = maybe_resplit(ctx, std::move(docs), a.resplit);
  const auto labels = label_map(docs, split, problem);

  const FeatureBatch batch = read_feature_csv(features_path);
  std::vector<FeatureVector> rows;
  std::vector<AuthorLabel> y;
  std::size_t masked = 0;
  for (const auto& r : batch.rows) {
    auto it = labels.find(r.doc_id);
    if (it == labels.end()) continue;
    if (!std::all_of(r.values.begin(), r.values.end(), [](double v) { return std::isfinite(v); })) {
      ++masked;
      continue;
    }
    rows.push_back(r);
    y.push_back(it->second);
  }
  if (masked > 0) {
    const std::string msg = std::to_string(masked) + " training row(s) with non-finite features left out";
    ctx.warn(msg);
    ctx.note(msg);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyList, "no feature rows match labeled documents in split " + a.split);
  }

  LogisticHyper hyper;
  hyper.lr = a.lr;
  hyper.epochs = a.epochs;
  hyper.l2 = a.l2;
  hyper.batch = a.batch;
  hyper.seed = ctx.seed();
  const auto result = train_logistic(batch.schema, rows, y, hyper);
  for (const auto& w : result.warnings) {
    ctx.warn(w);
    ctx.note(w);
  }
  const auto model_path = ctx.output_path(a.out);
  save_linear_classifier(model_path, result.model);
  ctx.record_output(model_path);

  std::string curve = "epoch\tloss\tloss_hex\n";
  for (std::size_t e = 0; e < result.loss_curve.size(); ++e) {
    curve += std::to_string(e + 1) + "\t" + format_fixed6(result.loss_curve[e]) + "\t" +
             format_hex(result.loss_curve[e]) + "\n";
  }
  ctx.write_output(a.curve_out, curve);
  ctx.info("trained on " + std::to_string(rows.size()) + " rows, final loss " +
           format_fixed6(result.final_train_loss));
}

}  // namespace

void add_detection_commands(CLI::App& app, std::vector<Command>& out) {
  {
    auto a = std::make_shared<ScoreArgs>();
    auto* sub = app.add_subcommand("score", "Metric-based detector features from token traces");
    sub->add_option("--traces", a->traces, "Trace JSONL")->required();
    sub->add_option("--features", a->features, "Comma-separated feature list");
    sub->add_option("--gltr-buckets", a->buckets, "Comma-separated GLTR rank boundaries");
    sub->add_option("--lrr-sentinel", a->lrr_sentinel, "Value written when LRR is undefined");
    sub->add_flag("--skip-invalid", a->skip_invalid, "Drop malformed input lines instead of failing");
    sub->add_option("--out", a->out, "Feature CSV file name in the output directory");
    out.push_back({sub, [a](RunContext& ctx) { run_score(ctx, *a); }});
  }
  {
    auto a = std::make_shared<TrainLrArgs>();
    auto* sub = app.add_subcommand("train-lr", "Train the logistic-regression head on feature CSV");
    sub->add_option("--features", a->features, "Feature CSV from score")->required();
    sub->add_option("--corpus", a->corpus, "Corpus JSONL providing labels")->required();
    sub->add_option("--problem", a->problem, "TT (human vs machine) or AA (per generator)");
    sub->add_option("--split", a->split, "Training split: train, val, test or any");
    sub->add_option("--resplit", a->resplit, "Re-split the corpus with these ratios under --seed");
    sub->add_option("--lr", a->lr, "Learning rate")->check(CLI::PositiveNumber);
    sub->add_option("--epochs", a->epochs, "Epochs")->check(CLI::NonNegativeNumber);
    sub->add_option("--l2", a->l2, "L2 penalty")->check(CLI::NonNegativeNumber);
    sub->add_option("--batch", a->batch, "Mini-batch size, 0 for full batch");
    sub->add_flag("--allow-unknown-generators", a->allow_unknown, "Accept generator ids outside the registry");
    sub->add_flag("--skip-invalid", a->skip_invalid, "Drop malformed input lines instead of failing");
    sub->add_option("--out", a->out, "Model file name in the output directory");
    sub->add_option("--curve-out", a->curve_out, "Loss curve file name");
    out.push_back({sub, [a](RunContext& ctx) { run_train_lr(ctx, *a); }});
  }
}

}  // namespace mgt::cli
