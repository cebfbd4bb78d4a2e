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

#include "mgtscope/contrastive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "jsonl.hpp"
#include "mgtscope/random.hpp"

namespace mgt {

EmbeddingLoadResult load_embeddings(const std::filesystem::path& path) {
  EmbeddingLoadResult result;
  detail::for_each_jsonl(
      path,
      [&](std::size_t, const nlohmann::json& rec) {
        EmbeddingRecord r;
        r.doc_id = detail::require_string(rec, "doc_id");
        const auto vec = detail::number_array(detail::require_field(rec, "vec"), "\"vec\"");
        if (vec.empty()) throw detail::RecordError{"\"vec\" is empty"};
        const auto dim = static_cast<Eigen::Index>(vec.size());
        if (result.dim != 0 && dim != result.dim) {
          throw detail::RecordError{"\"vec\" has dimension " + std::to_string(dim) + ", expected " +
                                    std::to_string(result.dim)};
        }
        r.vector = Eigen::Map<const Eigen::VectorXd>(vec.data(), dim);
        auto tok = rec.find("tok_vecs");
        if (tok != rec.end() && !tok->is_null()) {
          if (!tok->is_array() || tok->empty()) {
            throw detail::RecordError{"\"tok_vecs\" must be a non-empty array or null"};
          }
          Eigen::MatrixXd m(static_cast<Eigen::Index>(tok->size()), dim);
          for (std::size_t i = 0; i < tok->size(); ++i) {
            const auto row = detail::number_array((*tok)[i], "\"tok_vecs\" row");
            if (static_cast<Eigen::Index>(row.size()) != dim) {
              throw detail::RecordError{"\"tok_vecs\" row " + std::to_string(i) +
                                        " has the wrong dimension"};
            }
            m.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), dim);
          }
          r.token_vectors = std::move(m);
        }
        result.dim = dim;
        result.records.push_back(std::move(r));
      },
      result.errors);
  return result;
}

Eigen::VectorXd pool_embeddings(const Eigen::MatrixXd& token_vectors) {
  if (token_vectors.rows() == 0) throw Error(ErrorCode::kEmptyList, "no token vectors to pool");
  return token_vectors.colwise().mean().transpose();
}

Eigen::VectorXd pool_embeddings(const std::vector<std::vector<double>>& token_vectors) {
  if (token_vectors.empty()) throw Error(ErrorCode::kEmptyList, "no token vectors to pool");
  const std::size_t dim = token_vectors.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(token_vectors.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < token_vectors.size(); ++i) {
    if (token_vectors[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "token vectors differ in dimension");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = token_vectors[i][j];
    }
  }
  return pool_embeddings(m);
}

EmbeddingSet make_embedding_set(const std::vector<EmbeddingRecord>& records,
                                const std::map<std::string, AuthorLabel>& labels) {
  std::vector<const EmbeddingRecord*> kept;
  for (const auto& r : records) {
    if (labels.contains(r.doc_id)) kept.push_back(&r);
  }
  std::sort(kept.begin(), kept.end(),
            [](const EmbeddingRecord* a, const EmbeddingRecord* b) { return a->doc_id < b->doc_id; });
  EmbeddingSet set;
  if (kept.empty()) return set;
  const Eigen::Index dim = kept.front()->vector.size();
  set.vectors.resize(static_cast<Eigen::Index>(kept.size()), dim);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i]->vector.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, kept[i]->doc_id + ": embedding dimension differs");
    }
    set.doc_ids.push_back(kept[i]->doc_id);
    set.labels.push_back(labels.at(kept[i]->doc_id));
    set.vectors.row(static_cast<Eigen::Index>(i)) = kept[i]->vector.transpose();
  }
  return set;
}

std::vector<IndexTriplet> mine_index_triplets(const std::vector<AuthorLabel>& labels,
                                              std::size_t count, std::uint64_t seed,
                                              MiningStrategy strategy) {
  std::map<AuthorLabel, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  if (groups.size() < 2) {
    throw Error(ErrorCode::kInsufficientClasses, "triplet mining needs at least two classes");
  }
  std::vector<const std::vector<std::size_t>*> classes;
  for (const auto& [label, members] : groups) {
    if (members.size() < 2) {
      throw Error(ErrorCode::kClassTooSmall,
                  "class " + label.to_string() + " has fewer than two members");
    }
    classes.push_back(&members);
  }
  std::vector<std::size_t> class_of(labels.size());
  std::vector<std::size_t> pos_in_class(labels.size());
  for (std::size_t k = 0; k < classes.size(); ++k) {
    for (std::size_t j = 0; j < classes[k]->size(); ++j) {
      class_of[(*classes[k])[j]] = k;
      pos_in_class[(*classes[k])[j]] = j;
    }
  }

  Rng rng(seed);
  std::vector<IndexTriplet> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    std::size_t k;
    std::size_t anchor_pos;
    if (strategy == MiningStrategy::kClassBalanced) {
      k = t % classes.size();
      anchor_pos = rng.uniform_index(classes[k]->size());
    } else {
      const std::size_t anchor = rng.uniform_index(labels.size());
      k = class_of[anchor];
      anchor_pos = pos_in_class[anchor];
    }
    const auto& own = *classes[k];
    std::size_t pos = rng.uniform_index(own.size() - 1);
    if (pos >= anchor_pos) ++pos;

    std::size_t r = rng.uniform_index(labels.size() - own.size());
    std::size_t negative = 0;
    for (std::size_t h = 0; h < classes.size(); ++h) {
      if (h == k) continue;
      if (r < classes[h]->size()) {
        negative = (*classes[h])[r];
        break;
      }
      r -= classes[h]->size();
    }
    out.push_back({own[anchor_pos], own[pos], negative});
  }
  return out;
}

std::vector<Triplet> mine_triplets(const std::map<std::string, AuthorLabel>& labels,
                                   std::size_t count, std::uint64_t seed,
                                   MiningStrategy strategy) {
  std::vector<std::string> ids;
  std::vector<AuthorLabel> flat;
  for (const auto& [id, label] : labels) {
    ids.push_back(id);
    flat.push_back(label);
  }
  std::vector<Triplet> out;
  for (const auto& t : mine_index_triplets(flat, count, seed, strategy)) {
    out.push_back({ids[t.anchor], ids[t.positive], ids[t.negative]});
  }
  return out;
}

double cosine_similarity(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kDimensionMismatch, "cosine of unequal sizes");
  const double nx = x.norm();
  const double ny = y.norm();
  if (!(nx > 0.0) || !(ny > 0.0)) throw Error(ErrorCode::kZeroNorm, "cosine of a zero vector");
  return x.dot(y) / (nx * ny);
}

double cosine_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return 1.0 - cosine_similarity(x, y);
}

double triplet_loss(const Eigen::VectorXd& anchor, const Eigen::VectorXd& positive,
                    const Eigen::VectorXd& negative, double margin) {
  if (!(margin > 0.0)) throw Error(ErrorCode::kInvalidArgument, "margin must be > 0");
  return std::max(cosine_distance(anchor, positive) - cosine_distance(anchor, negative) + margin,
                  0.0);
}

std::string_view to_string(Activation activation) {
  return activation == Activation::kTanh ? "tanh" : "identity";
}

ProjectionHead::ProjectionHead(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.bias.size() != layer.weights.rows() ||
        (l > 0 && layer.weights.cols() != layers_[l - 1].weights.rows())) {
      throw Error(ErrorCode::kDimensionMismatch, "projection layers do not compose");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw Error(ErrorCode::kNonFinite, "projection parameters must be finite");
    }
  }
}

ProjectionHead ProjectionHead::identity(Eigen::Index input_dim, Eigen::Index output_dim) {
  DenseLayer layer;
  layer.weights = Eigen::MatrixXd::Identity(output_dim, input_dim);
  layer.bias = Eigen::VectorXd::Zero(output_dim);
  return ProjectionHead({std::move(layer)});
}

ProjectionHead ProjectionHead::random(Eigen::Index input_dim,
                                      const std::vector<Eigen::Index>& hidden_dims,
                                      Eigen::Index output_dim, Activation hidden_activation,
                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  Eigen::Index fan_in = input_dim;
  std::vector<Eigen::Index> dims = hidden_dims;
  dims.push_back(output_dim);
  for (std::size_t l = 0; l < dims.size(); ++l) {
    DenseLayer layer;
    layer.weights.resize(dims[l], fan_in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) layer.weights(r, c) = scale * rng.normal();
    }
    layer.bias = Eigen::VectorXd::Zero(dims[l]);
    layer.activation = l + 1 < dims.size() ? hidden_activation : Activation::kIdentity;
    fan_in = dims[l];
    layers.push_back(std::move(layer));
  }
  return ProjectionHead(std::move(layers));
}

Eigen::Index ProjectionHead::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().weights.cols();
}

Eigen::Index ProjectionHead::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().weights.rows();
}

namespace {

void apply_activation(Eigen::MatrixXd& m, Activation a) {
  if (a == Activation::kTanh) m = m.array().tanh().matrix();
}

}  // namespace

Eigen::VectorXd ProjectionHead::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) throw Error(ErrorCode::kDimensionMismatch, "head input dimension");
  Eigen::VectorXd h = x;
  for (const auto& layer : layers_) {
    h = layer.weights * h + layer.bias;
    if (layer.activation == Activation::kTanh) h = h.array().tanh().matrix();
  }
  return h;
}

Eigen::MatrixXd ProjectionHead::forward_rows(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim()) throw Error(ErrorCode::kDimensionMismatch, "head input dimension");
  Eigen::MatrixXd h = x;
  for (const auto& layer : layers_) {
    Eigen::MatrixXd z = h * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    apply_activation(z, layer.activation);
    h = std::move(z);
  }
  return h;
}

Eigen::Index ProjectionHead::parameter_count() const {
  Eigen::Index n = 0;
  for (const auto& layer : layers_) n += layer.weights.size() + layer.bias.size();
  return n;
}

Eigen::VectorXd ProjectionHead::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index off = 0;
  for (const auto& layer : layers_) {
    flat.segment(off, layer.weights.size()) =
        Eigen::Map<const Eigen::VectorXd>(layer.weights.data(), layer.weights.size());
    off += layer.weights.size();
    flat.segment(off, layer.bias.size()) = layer.bias;
    off += layer.bias.size();
  }
  return flat;
}

void ProjectionHead::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "parameter vector has the wrong length");
  }
  Eigen::Index off = 0;
  for (auto& layer : layers_) {
    Eigen::Map<Eigen::VectorXd>(layer.weights.data(), layer.weights.size()) =
        flat.segment(off, layer.weights.size());
    off += layer.weights.size();
    layer.bias = flat.segment(off, layer.bias.size());
    off += layer.bias.size();
  }
}

namespace {

// d cos(u, v) / d u.
Eigen::RowVectorXd cosine_grad(const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& v,
                               double nu, double nv, double cos) {
  return v / (nu * nv) - cos * u / (nu * nu);
}

}  // namespace

TripletObjective triplet_objective(const ProjectionHead& head, const Eigen::MatrixXd& embeddings,
                                   const std::vector<IndexTriplet>& triplets, double margin) {
  if (triplets.empty()) throw Error(ErrorCode::kEmptyList, "no triplets");
  if (!(margin > 0.0)) throw Error(ErrorCode::kInvalidArgument, "margin must be > 0");

  // Forward every referenced row once, keeping layer outputs for backprop.
  std::vector<std::size_t> rows;
  for (const auto& t : triplets) rows.insert(rows.end(), {t.anchor, t.positive, t.negative});
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  const auto local = [&](std::size_t global) {
    return static_cast<Eigen::Index>(std::lower_bound(rows.begin(), rows.end(), global) - rows.begin());
  };

  const auto& layers = head.layers();
  std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[l + 1] = output of layer l
  acts.reserve(layers.size() + 1);
  Eigen::MatrixXd input(static_cast<Eigen::Index>(rows.size()), embeddings.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    input.row(static_cast<Eigen::Index>(i)) = embeddings.row(static_cast<Eigen::Index>(rows[i]));
  }
  acts.push_back(std::move(input));
  for (const auto& layer : layers) {
    Eigen::MatrixXd z = acts.back() * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    apply_activation(z, layer.activation);
    acts.push_back(std::move(z));
  }
  const Eigen::MatrixXd& out = acts.back();
  Eigen::VectorXd norms = out.rowwise().norm();
  if ((norms.array() <= 0.0).any()) throw Error(ErrorCode::kZeroNorm, "projected vector is zero");

  TripletObjective obj;
  Eigen::MatrixXd grad_out = Eigen::MatrixXd::Zero(out.rows(), out.cols());
  const double inv_t = 1.0 / static_cast<double>(triplets.size());
  for (const auto& t : triplets) {
    const Eigen::Index a = local(t.anchor), p = local(t.positive), n = local(t.negative);
    const double cap = out.row(a).dot(out.row(p)) / (norms(a) * norms(p));
    const double can = out.row(a).dot(out.row(n)) / (norms(a) * norms(n));
    const double hinge = can - cap + margin;  // (1 - cap) - (1 - can) + margin
    if (hinge <= 0.0) continue;
    obj.loss += hinge * inv_t;
    ++obj.active;
    grad_out.row(a) += inv_t * (cosine_grad(out.row(a), out.row(n), norms(a), norms(n), can) -
                                cosine_grad(out.row(a), out.row(p), norms(a), norms(p), cap));
    grad_out.row(p) -= inv_t * cosine_grad(out.row(p), out.row(a), norms(p), norms(a), cap);
    grad_out.row(n) += inv_t * cosine_grad(out.row(n), out.row(a), norms(n), norms(a), can);
  }

  obj.gradient = Eigen::VectorXd::Zero(head.parameter_count());
  if (obj.active == 0) return obj;

  std::vector<Eigen::Index> offsets(layers.size());
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    offsets[l] = off;
    off += layers[l].weights.size() + layers[l].bias.size();
  }
  Eigen::MatrixXd g = std::move(grad_out);
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    if (layer.activation == Activation::kTanh) {
      g = (g.array() * (1.0 - acts[l + 1].array().square())).matrix();
    }
    const Eigen::MatrixXd d_w = g.transpose() * acts[l];
    obj.gradient.segment(offsets[l], d_w.size()) =
        Eigen::Map<const Eigen::VectorXd>(d_w.data(), d_w.size());
    obj.gradient.segment(offsets[l] + d_w.size(), layer.bias.size()) = g.colwise().sum().transpose();
    if (l > 0) g = g * layer.weights;
  }
  return obj;
}

EmbeddingSet project(const ProjectionHead& head, const EmbeddingSet& set) {
  EmbeddingSet out;
  out.doc_ids = set.doc_ids;
  out.labels = set.labels;
  out.vectors = set.size() == 0 ? Eigen::MatrixXd(0, head.output_dim()) : head.forward_rows(set.vectors);
  return out;
}

namespace {

Eigen::MatrixXd unit_rows(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd u = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double n = m.row(i).norm();
    if (!(n > 0.0)) throw Error(ErrorCode::kZeroNorm, "embedding row " + std::to_string(i) + " is zero");
    u.row(i) /= n;
  }
  return u;
}

struct ClassSums {
  std::vector<Eigen::RowVectorXd> sums;
  std::vector<double> self_dots;  // sum of |u_i|^2 per class
  std::vector<std::size_t> counts;
};

ClassSums class_sums(const EmbeddingSet& set) {
  const Eigen::MatrixXd u = unit_rows(set.vectors);
  std::map<AuthorLabel, std::size_t> index;
  for (const auto& l : set.labels) index.emplace(l, 0);
  std::size_t k = 0;
  for (auto& [label, idx] : index) idx = k++;
  ClassSums cs;
  cs.sums.assign(index.size(), Eigen::RowVectorXd::Zero(u.cols()));
  cs.self_dots.assign(index.size(), 0.0);
  cs.counts.assign(index.size(), 0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::size_t c = index.at(set.labels[i]);
    const auto row = u.row(static_cast<Eigen::Index>(i));
    cs.sums[c] += row;
    cs.self_dots[c] += row.squaredNorm();
    ++cs.counts[c];
  }
  return cs;
}

}  // namespace

double intra_compactness(const EmbeddingSet& set) {
  const ClassSums cs = class_sums(set);
  double total = 0.0;
  double pairs = 0.0;
  for (std::size_t c = 0; c < cs.counts.size(); ++c) {
    const double n = static_cast<double>(cs.counts[c]);
    if (cs.counts[c] < 2) continue;
    total += 0.5 * (cs.sums[c].squaredNorm() - cs.self_dots[c]);
    pairs += 0.5 * n * (n - 1.0);
  }
  if (pairs == 0.0) throw Error(ErrorCode::kEmptyClass, "no class has two or more members");
  return total / pairs;
}

double inter_separation(const EmbeddingSet& set) {
  const ClassSums cs = class_sums(set);
  if (cs.counts.size() < 2) throw Error(ErrorCode::kSingleClass, "separation needs two classes");
  double total = 0.0;
  double pairs = 0.0;
  for (std::size_t h = 0; h < cs.counts.size(); ++h) {
    for (std::size_t k = h + 1; k < cs.counts.size(); ++k) {
      total += cs.sums[h].dot(cs.sums[k]);
      pairs += static_cast<double>(cs.counts[h]) * static_cast<double>(cs.counts[k]);
    }
  }
  return total / pairs;
}

ProjectionTrainResult train_projection(const EmbeddingSet& train, const EmbeddingSet* val,
                                       const ProjectionHyper& hyper) {
  if (train.size() == 0) throw Error(ErrorCode::kEmptyList, "no training embeddings");
  if (!train.vectors.allFinite()) throw Error(ErrorCode::kNonFinite, "training embeddings");
  if (hyper.epochs < 0 || !(hyper.lr > 0.0) || hyper.momentum < 0.0 || hyper.momentum >= 1.0 ||
      hyper.batch_triplets == 0 || !(hyper.margin > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid projection hyperparameters");
  }
  const Eigen::Index f = train.vectors.cols();

  Rng master(hyper.seed);
  const std::uint64_t init_seed = master.next_u64();
  const std::uint64_t monitor_seed = master.next_u64();

  ProjectionHead head = hyper.init == HeadInit::kIdentity
                            ? ProjectionHead::identity(f, hyper.output_dim)
                            : ProjectionHead::random(f, hyper.hidden_dims, hyper.output_dim,
                                                     hyper.hidden_activation, init_seed);

  const std::size_t per_epoch = hyper.triplets_per_epoch > 0 ? hyper.triplets_per_epoch : train.size();
  // Fixed triplets for a loss curve that is comparable across epochs.
  const auto monitor = mine_index_triplets(train.labels, std::min<std::size_t>(per_epoch, 4096),
                                           monitor_seed, hyper.mining);

  ProjectionTrainResult result;
  double best_score = -std::numeric_limits<double>::infinity();
  ProjectionHead best = head;
  int stale = 0;

  const auto record_epoch = [&](int epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = triplet_objective(head, train.vectors, monitor, hyper.margin).loss;
    if (!std::isfinite(rec.train_loss)) {
      throw Error(ErrorCode::kDivergence, "training loss is not finite at epoch " + std::to_string(epoch));
    }
    if (val != nullptr) {
      const EmbeddingSet projected = project(head, *val);
      rec.val_intra = intra_compactness(projected);
      rec.val_inter = inter_separation(projected);
      const double score = *rec.val_intra - *rec.val_inter;
      if (score > best_score) {
        best_score = score;
        best = head;
        result.best_epoch = epoch;
        stale = 0;
      } else {
        ++stale;
      }
    }
    result.curve.push_back(rec);
  };

  record_epoch(0);
  Eigen::VectorXd theta = head.parameters();
  Eigen::VectorXd velocity = Eigen::VectorXd::Zero(theta.size());
  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    const auto triplets = mine_index_triplets(train.labels, per_epoch, master.next_u64(), hyper.mining);
    for (std::size_t start = 0; start < triplets.size(); start += hyper.batch_triplets) {
      const std::size_t end = std::min(triplets.size(), start + hyper.batch_triplets);
      const std::vector<IndexTriplet> batch(triplets.begin() + static_cast<std::ptrdiff_t>(start),
                                            triplets.begin() + static_cast<std::ptrdiff_t>(end));
      const auto obj = triplet_objective(head, train.vectors, batch, hyper.margin);
      if (!std::isfinite(obj.loss) || !obj.gradient.allFinite()) {
        throw Error(ErrorCode::kDivergence, "non-finite loss or gradient at epoch " +
                                                std::to_string(epoch) + ", batch starting at " +
                                                std::to_string(start));
      }
      velocity = hyper.momentum * velocity - hyper.lr * obj.gradient;
      theta += velocity;
      head.set_parameters(theta);
    }
    record_epoch(epoch);
    if (val != nullptr && stale >= hyper.early_stop_patience) {
      result.early_stopped = true;
      break;
    }
  }

  if (val != nullptr) {
    result.head = std::move(best);
  } else {
    result.head = std::move(head);
    result.best_epoch = result.curve.back().epoch;
  }
  return result;
}

Centroids compute_centroids(const EmbeddingSet& projected, const std::vector<AuthorLabel>* expected) {
  std::map<AuthorLabel, std::pair<Eigen::RowVectorXd, std::size_t>> acc;
  if (expected != nullptr) {
    for (const auto& l : *expected) acc.emplace(l, std::make_pair(Eigen::RowVectorXd::Zero(projected.vectors.cols()), std::size_t{0}));
  }
  for (std::size_t i = 0; i < projected.size(); ++i) {
    auto it = acc.emplace(projected.labels[i],
                          std::make_pair(Eigen::RowVectorXd::Zero(projected.vectors.cols()), std::size_t{0}))
                  .first;
    it->second.first += projected.vectors.row(static_cast<Eigen::Index>(i));
    ++it->second.second;
  }
  Centroids out;
  out.vectors.resize(static_cast<Eigen::Index>(acc.size()), projected.vectors.cols());
  Eigen::Index r = 0;
  for (const auto& [label, sum_count] : acc) {
    if (sum_count.second == 0) {
      throw Error(ErrorCode::kEmptyClass, "class " + label.to_string() + " has no members");
    }
    out.classes.push_back(label);
    out.vectors.row(r++) = sum_count.first / static_cast<double>(sum_count.second);
  }
  return out;
}

AttributionModel build_attribution_model(ProjectionHead head, const EmbeddingSet& train,
                                         EmbeddingSource source) {
  AttributionModel model;
  const EmbeddingSet projected = project(head, train);
  Centroids c = compute_centroids(projected);
  for (Eigen::Index r = 0; r < c.vectors.rows(); ++r) {
    if (!c.vectors.row(r).allFinite() || !(c.vectors.row(r).norm() > 0.0)) {
      throw Error(ErrorCode::kZeroNorm, "centroid of " + c.classes[static_cast<std::size_t>(r)].to_string() +
                                            " is zero or non-finite");
    }
  }
  model.head = std::move(head);
  model.classes = std::move(c.classes);
  model.centroids = std::move(c.vectors);
  source.dim = model.head.input_dim();
  model.source = std::move(source);
  return model;
}

Prediction nearest_centroid(const Eigen::VectorXd& query, const AttributionModel& model) {
  if (!query.allFinite()) throw Error(ErrorCode::kNonFinite, "query has non-finite entries");
  if (!(query.norm() > 0.0)) throw Error(ErrorCode::kZeroNorm, "query vector is zero");
  if (query.size() != model.centroids.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "query dimension differs from centroids");
  }
  Prediction p;
  p.scores.resize(model.centroids.rows());
  for (Eigen::Index k = 0; k < model.centroids.rows(); ++k) {
    p.scores(k) = cosine_distance(query, model.centroids.row(k).transpose());
  }
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < p.scores.size(); ++k) {
    if (p.scores(k) < p.scores(best)) best = k;
  }
  p.class_index = static_cast<std::size_t>(best);
  p.label = model.classes[p.class_index];
  return p;
}

Prediction attribute(const AttributionModel& model, const EmbeddingRecord& record) {
  if (record.vector.size() != model.head.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                record.doc_id + ": embedding dimension " + std::to_string(record.vector.size()) +
                    " does not match model input " + std::to_string(model.head.input_dim()));
  }
  Prediction p = nearest_centroid(model.head.forward(record.vector), model);
  p.doc_id = record.doc_id;
  return p;
}

namespace {

constexpr const char* kAttributionFormat = "mgtscope.attribution_model";
constexpr int kAttributionVersion = 1;

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd json_matrix(const nlohmann::json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto row = j[r].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kSchemaViolation, "matrix row has the wrong width");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

}  // namespace

void save_attribution_model(const std::filesystem::path& path, const AttributionModel& model) {
  nlohmann::ordered_json j;
  j["format"] = kAttributionFormat;
  j["version"] = kAttributionVersion;
  j["metric"] = model.metric;
  j["source"] = {{"model", model.source.model}, {"dim", model.source.dim}};
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : model.head.layers()) {
    nlohmann::json l;
    l["activation"] = std::string(to_string(layer.activation));
    l["in"] = layer.weights.cols();
    l["out"] = layer.weights.rows();
    l["weights"] = matrix_json(layer.weights);
    l["bias"] = std::vector<double>(layer.bias.data(), layer.bias.data() + layer.bias.size());
    layers.push_back(l);
  }
  j["head"] = layers;
  std::vector<std::string> classes;
  for (const auto& c : model.classes) classes.push_back(c.to_string());
  j["classes"] = classes;
  j["centroids"] = matrix_json(model.centroids);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

AttributionModel load_attribution_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileMissing, path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format") != kAttributionFormat || j.at("version") != kAttributionVersion) {
      throw Error(ErrorCode::kSchemaViolation, path.string() + " is not an attribution model v1");
    }
    AttributionModel m;
    m.metric = j.at("metric").get<std::string>();
    if (m.metric != "cosine") throw Error(ErrorCode::kSchemaViolation, "unsupported metric " + m.metric);
    m.source.model = j.at("source").at("model").get<std::string>();
    m.source.dim = j.at("source").at("dim").get<Eigen::Index>();
    std::vector<DenseLayer> layers;
    for (const auto& l : j.at("head")) {
      DenseLayer layer;
      const auto act = l.at("activation").get<std::string>();
      if (act == "tanh") layer.activation = Activation::kTanh;
      else if (act == "identity") layer.activation = Activation::kIdentity;
      else throw Error(ErrorCode::kSchemaViolation, "unknown activation " + act);
      layer.weights = json_matrix(l.at("weights"), l.at("in").get<Eigen::Index>());
      const auto bias = l.at("bias").get<std::vector<double>>();
      layer.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), static_cast<Eigen::Index>(bias.size()));
      layers.push_back(std::move(layer));
    }
    m.head = ProjectionHead(std::move(layers));
    for (const auto& c : j.at("classes")) m.classes.push_back(AuthorLabel::parse(c.get<std::string>()));
    m.centroids = json_matrix(j.at("centroids"), m.head.output_dim());
    if (static_cast<std::size_t>(m.centroids.rows()) != m.classes.size() ||
        m.head.input_dim() != m.source.dim) {
      throw Error(ErrorCode::kSchemaViolation, "inconsistent attribution model");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, path.string() + ": " + e.what());
  }
}

}  // namespace mgt
