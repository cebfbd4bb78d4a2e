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
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mgtscope/error.hpp"
#include "mgtscope/textstats.hpp"

namespace mgt {

// Character-level Levenshtein distance over Unicode scalar values, unit
// costs, O(min(|a|, |b|)) memory.
std::int64_t edit_distance(std::string_view a, std::string_view b);
std::int64_t edit_distance(std::u32string_view a, std::u32string_view b);

// compression_ratio(human + "\n" + machine).
double joint_compression_ratio(std::string_view machine_text, std::string_view human_text,
                               int level = kDefaultCompressionLevel);

// Cumulative n-gram diversity of the two texts' concatenated word sequence:
// entry n holds sum_{i<=n} unique_i / total_i. Throws kTooShortInput when the
// sequence has fewer than n_max words.
std::map<int, double> ngram_diversity(std::string_view machine_text, std::string_view human_text,
                                      int n_max = 3);
std::map<int, double> ngram_diversity(const std::vector<std::string>& tokens, int n_max);

// Mean over sentences s of ln(1 + ssum(s)), where ssum(s) adds, for each
// distinct word n-gram of s, its number of occurrences in the other sentences.
// Sentences shorter than n contribute ln(1) = 0.
double self_repetition(std::string_view text, int n);
double self_repetition(const std::vector<std::vector<std::string>>& sentences, int n);

inline constexpr double kBleuEpsilon = 1e-9;
inline constexpr int kBleuMaxOrder = 4;

// Sentence BLEU of `machine_text` against the single reference `human_text`:
// geometric mean of clipped i-gram precisions (i = 1..4, zero matches replaced
// by epsilon, orders the hypothesis is too short for skipped) times the
// brevity penalty min(1, exp(1 - ref_len / hyp_len)).
double homogenization_bleu(std::string_view machine_text, std::string_view human_text);
double bleu(const std::vector<std::string>& hypothesis, const std::vector<std::string>& reference);

enum class RougeVariant { kRougeL, kRouge1 };
std::string_view to_string(RougeVariant variant);

// ROUGE F1 of machine (hypothesis) against human (reference) word tokens.
double homogenization_rouge(std::string_view machine_text, std::string_view human_text,
                            RougeVariant variant = RougeVariant::kRougeL);
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Greedy-matching F1 over cosine similarities of token embeddings (no
// baseline rescaling). Rows are tokens.
double homogenization_bertscore(const Eigen::MatrixXd& machine_tokens,
                                const Eigen::MatrixXd& human_tokens);

struct PairStatsReport {
  std::string machine_doc_id;
  std::string human_doc_id;
  std::int64_t edit_distance = 0;
  double joint_compression_ratio = 0.0;
  std::map<int, double> ngram_diversity;
  std::map<int, double> self_repetition;
  double homog_bleu = 0.0;
  double homog_rouge = 0.0;
  RougeVariant rouge_variant = RougeVariant::kRougeL;
  std::optional<double> homog_bertscore;
};

struct PairStatsOptions {
  int compression_level = kDefaultCompressionLevel;
  int n_max = 3;
  RougeVariant rouge_variant = RougeVariant::kRougeL;
};

PairStatsReport pair_stats_report(const Document& machine, const Document& human,
                                  const PairStatsOptions& options = {},
                                  const Eigen::MatrixXd* machine_token_vectors = nullptr,
                                  const Eigen::MatrixXd* human_token_vectors = nullptr);

struct DocPair {
  std::string machine_doc_id;
  std::string human_doc_id;
};

struct PairLoadResult {
  std::vector<DocPair> pairs;
  std::vector<LineError> errors;
};

PairLoadResult load_pairs(const std::filesystem::path& path);

}  // namespace mgt
