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

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "mgtscope/classify.hpp"
#include "mgtscope/contrastive.hpp"
#include "mgtscope/report_writer.hpp"
#include "mgtscope/trace_metrics.hpp"

namespace mgt::cli {

namespace {

struct TrainContrastiveArgs {
  std::string embeddings;
  std::string corpus;
  std::string problem = "AA";
  std::string split = "train";
  std::string val_split = "val";
  std::string resplit;
  Eigen::Index output_dim = 256;
  std::string hidden;
  std::string hidden_activation = "tanh";
  std::string init = "random";
  double margin = 1.0;
  double lr = 1e-2;
  double momentum = 0.9;
  int epochs = 30;
  std::size_t batch_triplets = 256;
  std::size_t triplets_per_epoch = 0;
  std::string mining = "uniform";
  int patience = 5;
  std::string encoder_name = "unknown";
  bool allow_unknown = false;
  bool skip_invalid = false;
  std::string out = "attribution_model.json";
  std::string curve_out = "contrastive_curve.tsv";
};

struct AttributeArgs {
  std::string model;
  std::string embeddings;
  std::string features;
  std::string corpus;
  std::string split = "any";
  std::string resplit;
  bool allow_unknown = false;
  bool skip_invalid = false;
  std::string out = "predictions.jsonl";
};

std::vector<Eigen::Index> parse_dims(const std::string& s) {
  std::vector<Eigen::Index> out;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    const std::string part = s.substr(start, end - start);
    char* stop = nullptr;
    const long long v = std::strtoll(part.c_str(), &stop, 10);
    if (part.empty() || *stop != '\0' || v <= 0) throw UsageError("--hidden: bad layer width \"" + part + "\"");
    out.push_back(static_cast<Eigen::Index>(v));
    start = end + 1;
  }
  return out;
}

bool val_usable(const EmbeddingSet& val) {
  std::map<AuthorLabel, std::size_t> counts;
  for (const auto& l : val.labels) ++counts[l];
  if (counts.size() < 2) return false;
  for (const auto& [label, n] : counts) {
    if (n >= 2) return true;
  }
  return false;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_fixed6(*v) : "null"; }

void run_train_contrastive(RunContext& ctx, const TrainContrastiveArgs& a) {
  const Problem problem = parse_problem_flag(a.problem);
  const auto split = parse_split_flag("--split", a.split);
  ProjectionHyper hyper;
  hyper.output_dim = a.output_dim;
  hyper.hidden_dims = parse_dims(a.hidden);
  if (a.hidden_activation == "tanh") hyper.hidden_activation = Activation::kTanh;
  else if (a.hidden_activation == "identity") hyper.hidden_activation = Activation::kIdentity;
  else throw UsageError("--hidden-activation must be tanh or identity");
  if (a.init == "random") hyper.init = HeadInit::kRandom;
  else if (a.init == "identity") hyper.init = HeadInit::kIdentity;
  else throw UsageError("--init must be random or identity");
  if (hyper.init == HeadInit::kIdentity && !hyper.hidden_dims.empty()) {
    throw UsageError("--init identity needs a single linear layer (no --hidden)");
  }
  if (a.mining == "uniform") hyper.mining = MiningStrategy::kUniformRandom;
  else if (a.mining == "balanced") hyper.mining = MiningStrategy::kClassBalanced;
  else throw UsageError("--mining must be uniform or balanced");
  if (a.output_dim <= 0) throw UsageError("--output-dim must be positive");
  if (a.batch_triplets == 0) throw UsageError("--batch-triplets must be positive");
  hyper.margin = a.margin;
  hyper.lr = a.lr;
  hyper.momentum = a.momentum;
  hyper.epochs = a.epochs;
  hyper.batch_triplets = a.batch_triplets;
  hyper.triplets_per_epoch = a.triplets_per_epoch;
  hyper.early_stop_patience = a.patience;
  hyper.seed = ctx.seed();

  const auto emb_path = ctx.input("--embeddings", a.embeddings);
  auto docs = load_corpus_checked(ctx, a.corpus, a.allow_unknown, a.skip_invalid);
  docs = maybe_resplit(ctx, std::move(docs), a.resplit);
  auto loaded = load_embeddings(emb_path);
  check_line_errors(ctx, a.embeddings, loaded.errors, a.skip_invalid);

  const EmbeddingSet train = make_embedding_set(loaded.records, label_map(docs, split, problem));
  if (train.size() == 0) throw Error(ErrorCode::kEmptyList, "no embeddings for labeled training documents");

  std::optional<EmbeddingSet> val;
  if (a.val_split != "none") {
    const auto vs = parse_split_flag("--val-split", a.val_split);
    EmbeddingSet v = make_embedding_set(loaded.records, label_map(docs, vs, problem));
    if (val_usable(v)) {
      val = std::move(v);
    } else {
      const std::string msg = "validation split \"" + a.val_split +
                              "\" lacks two classes with a repeated member; early stopping disabled";
      ctx.warn(msg);
      ctx.note(msg);
    }
  }

  const auto result = train_projection(train, val ? &*val : nullptr, hyper);
  const AttributionModel model =
      build_attribution_model(result.head, train, EmbeddingSource{a.encoder_name, loaded.dim});
  const auto model_path = ctx.output_path(a.out);
  save_attribution_model(model_path, model);
  ctx.record_output(model_path);

  std::string curve = "epoch\ttrain_loss\tval_intra\tval_inter\ttrain_loss_hex\n";
  for (const auto& r : result.curve) {
    curve += std::to_string(r.epoch) + "\t" + format_fixed6(r.train_loss) + "\t" + opt_real(r.val_intra) +
             "\t" + opt_real(r.val_inter) + "\t" + format_hex(r.train_loss) + "\n";
  }
  ctx.write_output(a.curve_out, curve);
  ctx.note("best_epoch=" + std::to_string(result.best_epoch) +
           (result.early_stopped ? " (early stop)" : ""));
}

std::string prediction_line(const Prediction& p, const std::vector<AuthorLabel>& classes,
                            const char* score_type) {
  nlohmann::ordered_json j;
  j["doc_id"] = p.doc_id;
  j["label"] = p.label.to_string();
  j["score_type"] = score_type;
  nlohmann::ordered_json scores = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < classes.size(); ++k) {
    scores[classes[k].to_string()] = p.scores(static_cast<Eigen::Index>(k));
  }
  j["scores"] = scores;
  return j.dump() + "\n";
}

void run_attribute(RunContext& ctx, const AttributeArgs& a) {
  if (a.embeddings.empty() == a.features.empty()) {
    throw UsageError("pass exactly one of --embeddings or --features");
  }
  const auto model_path = ctx.input("--model", a.model);
  std::string format;
  {
    std::ifstream in(model_path, std::ios::binary);
    try {
      format = nlohmann::json::parse(in).at("format").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaViolation, a.model + ": not a model file: " + e.what());
    }
  }

  std::optional<std::set<std::string>> keep;
  if (!a.corpus.empty()) {
    auto docs = load_corpus_checked(ctx, a.corpus, a.allow_unknown, a.skip_invalid);
    docs = maybe_resplit(ctx, std::move(docs), a.resplit);
    const auto split = parse_split_flag("--split", a.split);
    keep.emplace();
    for (const auto& d : docs) {
      if (!split || d.split == split) keep->insert(d.doc_id);
    }
  } else if (a.split != "any" || !a.resplit.empty()) {
    throw UsageError("--split and --resplit need --corpus");
  }
  const auto wanted = [&](const std::string& id) { return !keep || keep->contains(id); };

  std::string lines;
  std::size_t written = 0;
  if (format == "mgtscope.attribution_model") {
    if (a.embeddings.empty()) throw UsageError("an attribution model needs --embeddings");
    const auto model = load_attribution_model(model_path);
    const auto emb_path = ctx.input("--embeddings", a.embeddings);
    auto loaded = load_embeddings(emb_path);
    check_line_errors(ctx, a.embeddings, loaded.errors, a.skip_invalid);
    for (const auto& r : loaded.records) {
      if (!wanted(r.doc_id)) continue;
      lines += prediction_line(attribute(model, r), model.classes, "cosine_distance");
      ++written;
    }
  } else if (format == "mgtscope.linear_classifier") {
    if (a.features.empty()) throw UsageError("a linear classifier needs --features");
    const auto model = load_linear_classifier(model_path);
    const auto batch = read_feature_csv(ctx.input("--features", a.features));
    if (batch.schema != model.schema) {
      throw Error(ErrorCode::kSchemaMismatch, a.features + ": columns [" + join(batch.schema, ",") +
                                                  "] differ from the model schema [" +
                                                  join(model.schema, ",") + "]");
    }
    for (const auto& row : batch.rows) {
      if (!wanted(row.doc_id)) continue;
      if (!std::all_of(row.values.begin(), row.values.end(), [](double v) { return std::isfinite(v); })) {
        ctx.warn(row.doc_id + ": non-finite features, no prediction written");
        ctx.note("no prediction for " + row.doc_id + " (non-finite features)");
        continue;
      }
      lines += prediction_line(predict_logistic(model, row), model.class_labels, "probability");
      ++written;
    }
  } else {
    throw Error(ErrorCode::kSchemaViolation, a.model + ": unknown model format \"" + format + "\"");
  }
  ctx.write_output(a.out, lines);
  ctx.info("wrote " + std::to_string(written) + " predictions");
}

}  // namespace

void add_attribution_commands(CLI::App& app, std::vector<Command>& out) {
  {
    auto a = std::make_shared<TrainContrastiveArgs>();
    auto* sub = app.add_subcommand("train-contrastive",
                                   "Train a projection head with triplet loss and store class centroids");
    sub->add_option("--embeddings", a->embeddings, "Embedding JSONL")->required();
    sub->add_option("--corpus", a->corpus, "Corpus JSONL providing labels")->required();
    sub->add_option("--problem", a->problem, "AA (per generator) or TT (human vs machine)");
    sub->add_option("--split", a->split, "Training split: train, val, test or any");
    sub->add_option("--val-split", a->val_split, "Early-stopping split, or none");
    sub->add_option("--resplit", a->resplit, "Re-split the corpus with these ratios under --seed");
    sub->add_option("--output-dim", a->output_dim, "Projection width");
    sub->add_option("--hidden", a->hidden, "Comma-separated hidden layer widths");
    sub->add_option("--hidden-activation", a->hidden_activation, "tanh or identity");
    sub->add_option("--init", a->init, "random or identity");
    sub->add_option("--margin", a->margin, "Triplet margin")->check(CLI::PositiveNumber);
    sub->add_option("--lr", a->lr, "Learning rate")->check(CLI::PositiveNumber);
    sub->add_option("--momentum", a->momentum, "Momentum in [0, 1)")->check(CLI::Range(0.0, 0.999999));
    sub->add_option("--epochs", a->epochs, "Epochs")->check(CLI::NonNegativeNumber);
    sub->add_option("--batch-triplets", a->batch_triplets, "Triplets per gradient step");
    sub->add_option("--triplets-per-epoch", a->triplets_per_epoch, "0: one per training document");
    sub->add_option("--mining", a->mining, "uniform or balanced");
    sub->add_option("--patience", a->patience, "Early-stopping patience in epochs")->check(CLI::NonNegativeNumber);
    sub->add_option("--encoder-name", a->encoder_name, "Encoder that produced the embeddings");
    sub->add_flag("--allow-unknown-generators", a->allow_unknown, "Accept generator ids outside the registry");
    sub->add_flag("--skip-invalid", a->skip_invalid, "Drop malformed input lines instead of failing");
    sub->add_option("--out", a->out, "Model file name in the output directory");
    sub->add_option("--curve-out", a->curve_out, "Training curve file name");
    out.push_back({sub, [a](RunContext& ctx) { run_train_contrastive(ctx, *a); }});
  }
  {
    auto a = std::make_shared<AttributeArgs>();
    auto* sub = app.add_subcommand("attribute", "Predict labels with a trained model");
    sub->add_option("--model", a->model, "Model file from train-lr or train-contrastive")->required();
    sub->add_option("--embeddings", a->embeddings, "Embedding JSONL (attribution model)");
    sub->add_option("--features", a->features, "Feature CSV (linear classifier)");
    sub->add_option("--corpus", a->corpus, "Corpus JSONL used to restrict documents by split");
    sub->add_option("--split", a->split, "Split to predict: train, val, test or any");
    sub->add_option("--resplit", a->resplit, "Re-split the corpus with these ratios under --seed");
    sub->add_flag("--allow-unknown-generators", a->allow_unknown, "Accept generator ids outside the registry");
    sub->add_flag("--skip-invalid", a->skip_invalid, "Drop malformed input lines instead of failing");
    sub->add_option("--out", a->out, "Predictions file name in the output directory");
    out.push_back({sub, [a](RunContext& ctx) { run_attribute(ctx, *a); }});
  }
}

}  // namespace mgt::cli
