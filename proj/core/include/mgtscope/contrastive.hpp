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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mgtscope/classify.hpp"
#include "mgtscope/corpus.hpp"

namespace mgt {

// Document-level encoder output, optionally with the token vectors it was
// pooled from.
struct EmbeddingRecord {
  std::string doc_id;
  Eigen::VectorXd vector;
  std::optional<Eigen::MatrixXd> token_vectors;  // rows are tokens
};

struct EmbeddingLoadResult {
  std::vector<EmbeddingRecord> records;
  std::vector<LineError> errors;
  Eigen::Index dim = 0;
};

// Reads embedding JSONL. The first valid record fixes the dimension; records
// with another dimension are reported as line errors.
EmbeddingLoadResult load_embeddings(const std::filesystem::path& path);

// Element-wise mean of token vectors (rows).
Eigen::VectorXd pool_embeddings(const Eigen::MatrixXd& token_vectors);
Eigen::VectorXd pool_embeddings(const std::vector<std::vector<double>>& token_vectors);

// Labeled vectors, one per row, kept in doc_id order by the helpers below.
struct EmbeddingSet {
  std::vector<std::string> doc_ids;
  std::vector<AuthorLabel> labels;
  Eigen::MatrixXd vectors;

  std::size_t size() const { return doc_ids.size(); }
};

// Joins records with labels by doc_id; records without a label are skipped.
EmbeddingSet make_embedding_set(const std::vector<EmbeddingRecord>& records,
                                const std::map<std::string, AuthorLabel>& labels);

struct Triplet {
  std::string anchor_id;
  std::string positive_id;
  std::string negative_id;
};

struct IndexTriplet {
  std::size_t anchor;
  std::size_t positive;
  std::size_t negative;
};

enum class MiningStrategy { kUniformRandom, kClassBalanced };

// Samples `count` triplets. UNIFORM_RANDOM draws anchors uniformly over all
// documents; CLASS_BALANCED cycles anchors over classes in label order.
// Positives are same-class documents other than the anchor, negatives are
// uniform over the other classes. Errors: kInsufficientClasses,
// kClassTooSmall (a class with fewer than two members).
std::vector<IndexTriplet> mine_index_triplets(const std::vector<AuthorLabel>& labels,
                                              std::size_t count, std::uint64_t seed,
                                              MiningStrategy strategy);
std::vector<Triplet> mine_triplets(const std::map<std::string, AuthorLabel>& labels,
                                   std::size_t count, std::uint64_t seed,
                                   MiningStrategy strategy = MiningStrategy::kUniformRandom);

// 1 - cos(x, y). Throws kZeroNorm / kDimensionMismatch.
double cosine_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double cosine_similarity(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// max(d(a, p) - d(a, n) + margin, 0) with d the cosine distance.
double triplet_loss(const Eigen::VectorXd& anchor, const Eigen::VectorXd& positive,
                    const Eigen::VectorXd& negative, double margin);

enum class Activation { kIdentity, kTanh };
std::string_view to_string(Activation activation);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::kIdentity;
};

// Feed-forward projection applied to frozen document embeddings.
class ProjectionHead {
 public:
  ProjectionHead() = default;
  explicit ProjectionHead(std::vector<DenseLayer> layers);

  // Single linear layer with ones on the leading diagonal.
  static ProjectionHead identity(Eigen::Index input_dim, Eigen::Index output_dim);
  // Gaussian weights with variance 1 / fan_in, zero biases. Hidden layers use
  // `hidden_activation`; the output layer is linear.
  static ProjectionHead random(Eigen::Index input_dim, const std::vector<Eigen::Index>& hidden_dims,
                               Eigen::Index output_dim, Activation hidden_activation,
                               std::uint64_t seed);

  Eigen::Index input_dim() const;
  Eigen::Index output_dim() const;
  const std::vector<DenseLayer>& layers() const { return layers_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  // Rows are samples.
  Eigen::MatrixXd forward_rows(const Eigen::MatrixXd& x) const;

  Eigen::Index parameter_count() const;
  // Layer by layer: weights (column-major), then bias.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

 private:
  std::vector<DenseLayer> layers_;
};

struct TripletObjective {
  double loss = 0.0;            // mean over triplets
  Eigen::VectorXd gradient;     // d loss / d parameters(), same layout
  std::size_t active = 0;       // triplets with a positive hinge
};

// Mean triplet loss of a batch and its gradient through the head and the
// cosine distance. Inactive hinges (value <= 0) contribute zero gradient.
TripletObjective triplet_objective(const ProjectionHead& head, const Eigen::MatrixXd& embeddings,
                                   const std::vector<IndexTriplet>& triplets, double margin);

enum class HeadInit { kRandom, kIdentity };

struct ProjectionHyper {
  Eigen::Index output_dim = 256;
  std::vector<Eigen::Index> hidden_dims;  // empty: one linear layer
  Activation hidden_activation = Activation::kTanh;
  HeadInit init = HeadInit::kRandom;
  double margin = 1.0;
  double lr = 1e-2;
  double momentum = 0.9;
  int epochs = 30;
  std::size_t batch_triplets = 256;
  std::size_t triplets_per_epoch = 0;  // 0: one per training document
  MiningStrategy mining = MiningStrategy::kUniformRandom;
  std::uint64_t seed = 0;
  int early_stop_patience = 5;
};

struct EpochRecord {
  int epoch = 0;  // 0 is the initial head
  double train_loss = 0.0;
  std::optional<double> val_intra;
  std::optional<double> val_inter;
};

struct ProjectionTrainResult {
  ProjectionHead head;
  std::vector<EpochRecord> curve;
  int best_epoch = 0;
  bool early_stopped = false;
};

// Minimizes the mean triplet loss by mini-batch SGD with momentum. With a
// validation set, keeps the head that maximizes (intra - inter) on it and
// stops after `early_stop_patience` epochs without improvement.
ProjectionTrainResult train_projection(const EmbeddingSet& train, const EmbeddingSet* val,
                                       const ProjectionHyper& hyper);

EmbeddingSet project(const ProjectionHead& head, const EmbeddingSet& set);

struct EmbeddingSource {
  std::string model = "unknown";
  Eigen::Index dim = 0;
};

struct AttributionModel {
  ProjectionHead head;
  std::vector<AuthorLabel> classes;
  Eigen::MatrixXd centroids;  // one row per class, post-head space
  std::string metric = "cosine";
  EmbeddingSource source;
};

struct Centroids {
  std::vector<AuthorLabel> classes;
  Eigen::MatrixXd vectors;
};

// Per-class mean of (already projected) vectors. When `expected` is given,
// every listed class must have members (kEmptyClass otherwise).
Centroids compute_centroids(const EmbeddingSet& projected,
                            const std::vector<AuthorLabel>* expected = nullptr);

AttributionModel build_attribution_model(ProjectionHead head, const EmbeddingSet& train,
                                         EmbeddingSource source);

// Nearest centroid by cosine distance over a post-head query; ties go to the
// lowest class index. scores holds every distance.
Prediction nearest_centroid(const Eigen::VectorXd& query, const AttributionModel& model);
// Projects a raw embedding, then nearest_centroid.
Prediction attribute(const AttributionModel& model, const EmbeddingRecord& record);

// Mean cosine similarity over all unordered same-class pairs, pooled across
// classes with at least two members.
double intra_compactness(const EmbeddingSet& set);
// Mean cosine similarity over all cross-class pairs.
double inter_separation(const EmbeddingSet& set);

void save_attribution_model(const std::filesystem::path& path, const AttributionModel& model);
AttributionModel load_attribution_model(const std::filesystem::path& path);

}  // namespace mgt
