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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mgtscope/error.hpp"

namespace mgt {

// One scored token. Log-probabilities and entropies are in nats.
struct TraceToken {
  std::string text;
  double logprob = 0.0;
  std::int64_t rank = 1;
  double entropy = 0.0;
  // Mean and variance of log p(v) under the model's own next-token
  // distribution; present together or not at all.
  std::optional<double> exp_logprob;
  std::optional<double> var_logprob;
};

struct TokenTrace {
  std::string doc_id;
  std::vector<TraceToken> tokens;

  bool has_moments() const;
};

// Throws Error(kSchemaViolation) naming the offending token.
void validate_trace(const TokenTrace& trace);

struct TraceLoadResult {
  std::vector<TokenTrace> traces;
  std::vector<LineError> errors;
};

TraceLoadResult load_traces(const std::filesystem::path& path);

double log_likelihood_score(const TokenTrace& trace);
// Lower values suggest machine text.
double rank_score(const TokenTrace& trace);
double log_rank_score(const TokenTrace& trace);
double entropy_score(const TokenTrace& trace);

inline const std::vector<std::int64_t> kDefaultGltrBuckets = {10, 100, 1000};

// Fractions of tokens with rank <= b1, in (b1, b2], ..., and > b_last.
std::vector<double> gltr_features(const TokenTrace& trace,
                                  const std::vector<std::int64_t>& buckets = kDefaultGltrBuckets);

// (-sum logprob) / (sum ln rank). Throws kDegenerate when every rank is 1.
double lrr_score(const TokenTrace& trace);

// (sum logprob - sum exp_logprob) / sqrt(sum var_logprob).
double fast_detectgpt_curvature(const TokenTrace& trace);

enum class Feature { kLogLikelihood, kRank, kLogRank, kEntropy, kGltr, kLrr, kCurvature };

std::string_view to_string(Feature feature);
std::optional<Feature> parse_feature(std::string_view name);

struct FeatureConfig {
  std::vector<Feature> features = {Feature::kLogLikelihood, Feature::kRank, Feature::kLogRank,
                                   Feature::kEntropy, Feature::kGltr, Feature::kLrr,
                                   Feature::kCurvature};
  std::vector<std::int64_t> gltr_buckets = kDefaultGltrBuckets;
  // Value written for a document whose LRR is undefined. NaN keeps the
  // document masked; downstream training rejects non-finite rows.
  double lrr_sentinel = std::numeric_limits<double>::quiet_NaN();
};

// Column names for a config, e.g. log_likelihood, gltr_b1..gltr_b4, lrr.
std::vector<std::string> feature_schema(const FeatureConfig& config);

struct FeatureVector {
  std::string doc_id;
  std::vector<double> values;
};

FeatureVector feature_vector(const TokenTrace& trace, const FeatureConfig& config);

struct FeatureBatch {
  std::vector<std::string> schema;
  std::vector<FeatureVector> rows;
  std::vector<std::string> notes;  // e.g. curvature dropped, LRR sentinels
};

// Scores every trace with one shared schema. Curvature is kept only when all
// traces carry moments; otherwise it is dropped and a note is recorded.
FeatureBatch extract_features(const std::vector<TokenTrace>& traces, const FeatureConfig& config,
                              unsigned threads = 1);

// CSV with a header row "doc_id,<schema...>"; reals use %.17g so the file
// round-trips exactly.
void write_feature_csv(const std::filesystem::path& path, const FeatureBatch& batch);
FeatureBatch read_feature_csv(const std::filesystem::path& path);

}  // namespace mgt
