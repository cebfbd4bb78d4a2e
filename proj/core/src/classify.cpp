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

#include "mgtscope/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "json.hpp"
#include "mgtscope/random.hpp"

namespace mgt {

std::vector<AuthorLabel> canonical_class_order(const std::vector<AuthorLabel>& labels) {
  std::vector<AuthorLabel> out = labels;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

SoftmaxObjective softmax_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                   const Eigen::MatrixXd& x, const std::vector<int>& y, double l2) {
  const Eigen::Index n = x.rows();
  SoftmaxObjective out;
  out.d_weights = Eigen::MatrixXd::Zero(weights.rows(), weights.cols());
  out.d_bias = Eigen::VectorXd::Zero(bias.size());

  // logits: N x C
  Eigen::MatrixXd logits = x * weights.transpose();
  logits.rowwise() += bias.transpose();
  double ce = 0.0;
  Eigen::MatrixXd delta(n, weights.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd shifted = logits.row(i).array() - m;
    const double log_z = std::log(shifted.array().exp().sum());
    const int yi = y[static_cast<std::size_t>(i)];
    ce -= shifted(yi) - log_z;
    delta.row(i) = (shifted.array() - log_z).exp().matrix();
    delta(i, yi) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  out.loss = ce * inv_n + 0.5 * l2 * weights.squaredNorm();
  out.d_weights = delta.transpose() * x * inv_n + l2 * weights;
  out.d_bias = delta.colwise().sum().transpose() * inv_n;
  return out;
}

namespace {

void check_schema(const std::vector<std::string>& expected, const std::vector<std::string>& got) {
  if (expected != got) {
    throw Error(ErrorCode::kSchemaMismatch, "feature schema does not match the model");
  }
}

Eigen::MatrixXd to_matrix(const std::vector<FeatureVector>& rows, std::size_t width) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != width) {
      throw Error(ErrorCode::kSchemaMismatch, rows[i].doc_id + ": row length differs from schema");
    }
    for (std::size_t j = 0; j < width; ++j) {
      const double v = rows[i].values[j];
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFinite, rows[i].doc_id + ": non-finite feature in column " +
                                               std::to_string(j));
      }
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return x;
}

}  // namespace

LogisticTrainResult train_logistic(const std::vector<std::string>& schema,
                                   const std::vector<FeatureVector>& features,
                                   const std::vector<AuthorLabel>& labels,
                                   const LogisticHyper& hyper) {
  if (features.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "features and labels differ in length");
  }
  if (features.empty()) throw Error(ErrorCode::kEmptyList, "no training rows");
  if (hyper.epochs < 0 || !(hyper.lr > 0.0) || hyper.l2 < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid logistic hyperparameters");
  }
  LogisticTrainResult result;
  LinearClassifier& model = result.model;
  model.schema = schema;
  model.class_labels = canonical_class_order(labels);
  if (model.class_labels.size() < 2) {
    throw Error(ErrorCode::kSingleClass, "training data contains a single class");
  }

  const Eigen::MatrixXd raw = to_matrix(features, schema.size());
  const auto n = raw.rows();
  const auto f = raw.cols();
  model.feature_means = raw.colwise().mean().transpose();
  model.feature_scales.resize(f);
  for (Eigen::Index j = 0; j < f; ++j) {
    const double var = (raw.col(j).array() - model.feature_means(j)).square().sum() /
                       static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (sd > 1e-12) {
      model.feature_scales(j) = sd;
    } else {
      model.feature_scales(j) = 1.0;
      result.warnings.push_back("feature \"" + schema[static_cast<std::size_t>(j)] +
                                "\" has zero variance; scale clamped to 1");
    }
  }
  Eigen::MatrixXd x = raw.rowwise() - model.feature_means.transpose();
  x.array().rowwise() /= model.feature_scales.transpose().array();

  std::map<AuthorLabel, int> index_of;
  for (std::size_t c = 0; c < model.class_labels.size(); ++c) {
    index_of[model.class_labels[c]] = static_cast<int>(c);
  }
  std::vector<int> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) y[i] = index_of.at(labels[i]);

  const auto c = static_cast<Eigen::Index>(model.class_labels.size());
  model.weights = Eigen::MatrixXd::Zero(c, f);
  model.bias = Eigen::VectorXd::Zero(c);

  const std::size_t batch =
      hyper.batch == 0 ? static_cast<std::size_t>(n) : std::min<std::size_t>(hyper.batch, n);
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(hyper.seed);

  Eigen::MatrixXd xb;
  std::vector<int> yb;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    if (batch < static_cast<std::size_t>(n)) rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      xb.resize(static_cast<Eigen::Index>(len), f);
      yb.resize(len);
      for (std::size_t k = 0; k < len; ++k) {
        xb.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(order[start + k]));
        yb[k] = y[order[start + k]];
      }
      const auto obj = softmax_objective(model.weights, model.bias, xb, yb, hyper.l2);
      model.weights -= hyper.lr * obj.d_weights;
      model.bias -= hyper.lr * obj.d_bias;
    }
    const double loss = softmax_objective(model.weights, model.bias, x, y, hyper.l2).loss;
    if (!std::isfinite(loss)) throw Error(ErrorCode::kDivergence, "training loss is not finite");
    result.loss_curve.push_back(loss);
  }
  result.final_train_loss = result.loss_curve.empty()
                                ? softmax_objective(model.weights, model.bias, x, y, hyper.l2).loss
                                : result.loss_curve.back();
  return result;
}

Prediction predict_logistic(const LinearClassifier& model, const FeatureVector& row) {
  if (row.values.size() != model.num_features()) {
    throw Error(ErrorCode::kSchemaMismatch, row.doc_id + ": row length differs from model schema");
  }
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(row.values.data(),
                                                        static_cast<Eigen::Index>(row.values.size()));
  if (!x.allFinite()) throw Error(ErrorCode::kNonFinite, row.doc_id + ": non-finite feature");
  x = ((x - model.feature_means).array() / model.feature_scales.array()).matrix();
  Prediction p;
  p.doc_id = row.doc_id;
  p.scores = softmax(model.weights * x + model.bias);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < p.scores.size(); ++k) {
    if (p.scores(k) > p.scores(best)) best = k;
  }
  p.class_index = static_cast<std::size_t>(best);
  p.label = model.class_labels[p.class_index];
  return p;
}

std::vector<Prediction> predict_logistic(const LinearClassifier& model,
                                         const std::vector<std::string>& schema,
                                         const std::vector<FeatureVector>& rows) {
  check_schema(model.schema, schema);
  std::vector<Prediction> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(predict_logistic(model, r));
  return out;
}

namespace {

constexpr const char* kLinearFormat = "mgtscope.linear_classifier";
constexpr int kLinearVersion = 1;

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd json_vector(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

void save_linear_classifier(const std::filesystem::path& path, const LinearClassifier& model) {
  nlohmann::json j;
  j["format"] = kLinearFormat;
  j["version"] = kLinearVersion;
  j["schema"] = model.schema;
  std::vector<std::string> labels;
  for (const auto& l : model.class_labels) labels.push_back(l.to_string());
  j["labels"] = labels;
  nlohmann::json w = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
    w.push_back(vector_json(model.weights.row(r).transpose()));
  }
  j["weights"] = w;
  j["bias"] = vector_json(model.bias);
  j["means"] = vector_json(model.feature_means);
  j["scales"] = vector_json(model.feature_scales);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

LinearClassifier load_linear_classifier(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileMissing, path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format") != kLinearFormat || j.at("version") != kLinearVersion) {
      throw Error(ErrorCode::kSchemaViolation, path.string() + " is not a linear classifier v1");
    }
    LinearClassifier m;
    m.schema = j.at("schema").get<std::vector<std::string>>();
    for (const auto& l : j.at("labels")) m.class_labels.push_back(AuthorLabel::parse(l.get<std::string>()));
    const auto& w = j.at("weights");
    const auto c = static_cast<Eigen::Index>(m.class_labels.size());
    const auto f = static_cast<Eigen::Index>(m.schema.size());
    if (static_cast<Eigen::Index>(w.size()) != c) {
      throw Error(ErrorCode::kSchemaViolation, "weights row count differs from labels");
    }
    m.weights.resize(c, f);
    for (Eigen::Index r = 0; r < c; ++r) {
      const auto row = json_vector(w.at(static_cast<std::size_t>(r)));
      if (row.size() != f) throw Error(ErrorCode::kSchemaViolation, "weights width differs from schema");
      m.weights.row(r) = row.transpose();
    }
    m.bias = json_vector(j.at("bias"));
    m.feature_means = json_vector(j.at("means"));
    m.feature_scales = json_vector(j.at("scales"));
    if (m.bias.size() != c || m.feature_means.size() != f || m.feature_scales.size() != f ||
        (m.feature_scales.array() <= 0.0).any()) {
      throw Error(ErrorCode::kSchemaViolation, "inconsistent classifier parameters");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, path.string() + ": " + e.what());
  }
}

}  // namespace mgt
