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
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mgtscope/corpus.hpp"
#include "mgtscope/trace_metrics.hpp"

namespace mgt {

// Multinomial logistic regression over standardized detector features.
struct LinearClassifier {
  std::vector<AuthorLabel> class_labels;  // C entries, HUMAN first
  std::vector<std::string> schema;        // F feature names
  Eigen::MatrixXd weights;                // C x F
  Eigen::VectorXd bias;                   // C
  Eigen::VectorXd feature_means;          // F
  Eigen::VectorXd feature_scales;         // F, all > 0

  std::size_t num_classes() const { return class_labels.size(); }
  std::size_t num_features() const { return schema.size(); }
};

struct LogisticHyper {
  double lr = 0.1;
  int epochs = 200;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  std::size_t batch = 32;  // 0 means full batch
};

struct LogisticTrainResult {
  LinearClassifier model;
  double final_train_loss = 0.0;
  std::vector<double> loss_curve;  // full-data objective after each epoch
  std::vector<std::string> warnings;
};

// HUMAN first, then machine generators in byte order; duplicates removed.
std::vector<AuthorLabel> canonical_class_order(const std::vector<AuthorLabel>& labels);

// Fits the classifier by mini-batch gradient descent on
//   mean softmax cross-entropy + (l2 / 2) * ||W||^2
// after standardizing features with train statistics. Deterministic for a
// fixed seed. Errors: kSingleClass, kNonFinite, kSchemaMismatch,
// kLengthMismatch. A zero-variance feature gets scale 1 and a warning.
LogisticTrainResult train_logistic(const std::vector<std::string>& schema,
                                   const std::vector<FeatureVector>& features,
                                   const std::vector<AuthorLabel>& labels,
                                   const LogisticHyper& hyper);

struct SoftmaxObjective {
  double loss = 0.0;
  Eigen::MatrixXd d_weights;
  Eigen::VectorXd d_bias;
};

// Objective and analytic gradient on already standardized rows `x` (N x F)
// with class indices `y`.
SoftmaxObjective softmax_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                   const Eigen::MatrixXd& x, const std::vector<int>& y, double l2);

// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

struct Prediction {
  std::string doc_id;
  AuthorLabel label = AuthorLabel::human();
  std::size_t class_index = 0;
  Eigen::VectorXd scores;  // class probabilities, or distances for centroid models
};

// Argmax of the softmax; ties go to the lowest class index.
Prediction predict_logistic(const LinearClassifier& model, const FeatureVector& row);
std::vector<Prediction> predict_logistic(const LinearClassifier& model,
                                         const std::vector<std::string>& schema,
                                         const std::vector<FeatureVector>& rows);

void save_linear_classifier(const std::filesystem::path& path, const LinearClassifier& model);
LinearClassifier load_linear_classifier(const std::filesystem::path& path);

}  // namespace mgt
