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

// Seeded generators for synthetic test data.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mgtscope/contrastive.hpp"
#include "mgtscope/random.hpp"
#include "mgtscope/trace_metrics.hpp"

namespace synth {

// Small vocabulary so that n-grams repeat often.
inline const std::vector<std::string>& vocab() {
  static const std::vector<std::string> v = {"the", "cat", "sat", "on", "mat", "a",
                                             "dog", "ran", "far", "and", "it", "was"};
  return v;
}

// Lowercase words in sentences ending with ". ", total words in [lo, hi].
inline std::string random_text(mgt::Rng& rng, std::size_t lo, std::size_t hi,
                               std::size_t vocab_size = 0) {
  const auto& v = vocab();
  const std::size_t vs = vocab_size == 0 ? v.size() : std::min(vocab_size, v.size());
  const std::size_t n = lo + static_cast<std::size_t>(rng.uniform_index(hi - lo + 1));
  std::string out;
  std::size_t in_sentence = 0;
  const std::size_t max_len = 1 + static_cast<std::size_t>(rng.uniform_index(8));
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += v[static_cast<std::size_t>(rng.uniform_index(vs))];
    ++in_sentence;
    if (in_sentence >= max_len || rng.uniform01() < 0.15 || i + 1 == n) {
      out.push_back('.');
      in_sentence = 0;
    }
  }
  return out;
}

inline std::string random_ascii(mgt::Rng& rng, std::size_t max_len, std::size_t alphabet) {
  const std::size_t n = static_cast<std::size_t>(rng.uniform_index(max_len + 1));
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + rng.uniform_index(alphabet)));
  return s;
}

// Ranks are 1 + Geometric(p); log-probs shift with the rank regime.
inline mgt::TokenTrace geometric_trace(mgt::Rng& rng, const std::string& id, double p,
                                       std::size_t length, bool moments = true) {
  mgt::TokenTrace t;
  t.doc_id = id;
  const bool machine = p > 0.1;
  for (std::size_t i = 0; i < length; ++i) {
    mgt::TraceToken tok;
    tok.text = "w" + std::to_string(i);
    tok.rank = 1 + static_cast<std::int64_t>(rng.geometric(p));
    const double base = machine ? -0.6 : -4.0;
    tok.logprob = base - 0.5 * rng.uniform01() - 0.1 * std::log(static_cast<double>(tok.rank));
    tok.entropy = machine ? 1.0 + rng.uniform01() : 3.0 + 2.0 * rng.uniform01();
    if (moments) {
      tok.exp_logprob = -tok.entropy;
      tok.var_logprob = 0.5 + 1.5 * rng.uniform01();
    }
    t.tokens.push_back(std::move(tok));
  }
  return t;
}

struct GaussianClasses {
  std::vector<mgt::AuthorLabel> labels;
  std::vector<std::string> ids;
  Eigen::MatrixXd x;
};

// k classes in f dimensions; class means are +-sigma per coordinate with
// random signs, samples add N(0, sigma^2) noise.
inline GaussianClasses gaussian_classes(std::size_t k, Eigen::Index f, std::size_t per_class,
                                        double sigma, std::uint64_t seed) {
  mgt::Rng rng(seed);
  Eigen::MatrixXd means(static_cast<Eigen::Index>(k), f);
  for (Eigen::Index c = 0; c < means.rows(); ++c) {
    for (Eigen::Index j = 0; j < f; ++j) means(c, j) = rng.uniform01() < 0.5 ? -sigma : sigma;
  }
  GaussianClasses out;
  out.x.resize(static_cast<Eigen::Index>(k * per_class), f);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const auto label = c == 0 ? mgt::AuthorLabel::human()
                              : mgt::AuthorLabel::machine("gen" + std::to_string(c));
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      for (Eigen::Index j = 0; j < f; ++j) {
        out.x(row, j) = means(static_cast<Eigen::Index>(c), j) + sigma * rng.normal();
      }
      char id[32];
      std::snprintf(id, sizeof id, "c%02zu-%04zu", c, i);
      out.ids.emplace_back(id);
      out.labels.push_back(label);
    }
  }
  return out;
}

inline mgt::EmbeddingSet to_set(const GaussianClasses& g, const std::vector<std::size_t>& rows) {
  mgt::EmbeddingSet s;
  s.vectors.resize(static_cast<Eigen::Index>(rows.size()), g.x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.doc_ids.push_back(g.ids[rows[i]]);
    s.labels.push_back(g.labels[rows[i]]);
    s.vectors.row(static_cast<Eigen::Index>(i)) = g.x.row(static_cast<Eigen::Index>(rows[i]));
  }
  return s;
}

}  // namespace synth
