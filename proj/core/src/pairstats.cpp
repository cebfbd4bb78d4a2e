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

#include "mgtscope/pairstats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "jsonl.hpp"
#include "mgtscope/tokenize.hpp"

namespace mgt {

std::int64_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // b is the shorter string; one row of |b| + 1 cells.
  std::vector<std::int64_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::int64_t diag = row[0];
    row[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::int64_t up = row[j];
      const std::int64_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

std::int64_t edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(decode_utf8(a), decode_utf8(b));
}

double joint_compression_ratio(std::string_view machine_text, std::string_view human_text,
                               int level) {
  if (machine_text.empty() || human_text.empty()) {
    throw Error(ErrorCode::kEmptyText, "joint compression needs two non-empty texts");
  }
  std::string joined;
  joined.reserve(machine_text.size() + human_text.size() + 1);
  joined.append(human_text).push_back('\n');
  joined.append(machine_text);
  return compression_ratio(joined, level);
}

namespace {

using NgramCounts = std::unordered_map<std::string, std::int64_t>;

std::string ngram_key(const std::vector<std::string>& tokens, std::size_t start, std::size_t n) {
  std::string key;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) key.push_back('\x1f');
    key += tokens[start + k];
  }
  return key;
}

NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[ngram_key(tokens, i, n)];
  return counts;
}

std::vector<std::string> words_or_throw(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyText, "text is empty");
  }
  auto words = word_tokens(text);
  if (words.empty()) throw Error(ErrorCode::kZeroWords, "text has no words");
  return words;
}

}  // namespace

std::map<int, double> ngram_diversity(const std::vector<std::string>& tokens, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  if (tokens.size() < static_cast<std::size_t>(n_max)) {
    throw Error(ErrorCode::kTooShortInput, "fewer tokens than n_max");
  }
  std::map<int, double> out;
  double cumulative = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto counts = count_ngrams(tokens, static_cast<std::size_t>(n));
    const double total = static_cast<double>(tokens.size() - static_cast<std::size_t>(n) + 1);
    cumulative += static_cast<double>(counts.size()) / total;
    out[n] = cumulative;
  }
  return out;
}

std::map<int, double> ngram_diversity(std::string_view machine_text, std::string_view human_text,
                                      int n_max) {
  std::vector<std::string> tokens = word_tokens(machine_text);
  auto human = word_tokens(human_text);
  tokens.insert(tokens.end(), std::make_move_iterator(human.begin()),
                std::make_move_iterator(human.end()));
  return ngram_diversity(tokens, n_max);
}

double self_repetition(const std::vector<std::vector<std::string>>& sentences, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (sentences.empty()) throw Error(ErrorCode::kEmptyText, "no sentences");

  const auto size = static_cast<std::size_t>(n);
  std::vector<NgramCounts> per_sentence;
  per_sentence.reserve(sentences.size());
  NgramCounts global;
  for (const auto& s : sentences) {
    per_sentence.push_back(count_ngrams(s, size));
    for (const auto& [g, c] : per_sentence.back()) global[g] += c;
  }

  double total = 0.0;
  for (const auto& own : per_sentence) {
    std::int64_t ssum = 0;
    for (const auto& [g, c] : own) ssum += global.at(g) - c;
    total += std::log1p(static_cast<double>(ssum));
  }
  return total / static_cast<double>(sentences.size());
}

double self_repetition(std::string_view text, int n) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyText, "text is empty");
  }
  return self_repetition(sentence_tokens(text), n);
}

double bleu(const std::vector<std::string>& hypothesis,
            const std::vector<std::string>& reference) {
  if (hypothesis.empty() || reference.empty()) {
    throw Error(ErrorCode::kEmptyText, "BLEU needs non-empty hypothesis and reference");
  }
  const std::size_t max_order = std::min<std::size_t>(kBleuMaxOrder, hypothesis.size());
  double log_sum = 0.0;
  for (std::size_t order = 1; order <= max_order; ++order) {
    const auto hyp = count_ngrams(hypothesis, order);
    const auto ref = count_ngrams(reference, order);
    std::int64_t matched = 0;
    for (const auto& [g, c] : hyp) {
      auto it = ref.find(g);
      if (it != ref.end()) matched += std::min(c, it->second);
    }
    const double total = static_cast<double>(hypothesis.size() - order + 1);
    const double numerator = matched > 0 ? static_cast<double>(matched) : kBleuEpsilon;
    log_sum += std::log(numerator / total);
  }
  const double hyp_len = static_cast<double>(hypothesis.size());
  const double ref_len = static_cast<double>(reference.size());
  const double bp = std::min(1.0, std::exp(1.0 - ref_len / hyp_len));
  return bp * std::exp(log_sum / static_cast<double>(max_order));
}

double homogenization_bleu(std::string_view machine_text, std::string_view human_text) {
  return bleu(words_or_throw(machine_text), words_or_throw(human_text));
}

std::string_view to_string(RougeVariant variant) {
  return variant == RougeVariant::kRougeL ? "rougeL" : "rouge1";
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto& longer = a.size() >= b.size() ? a : b;
  const auto& shorter = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> row(shorter.size() + 1, 0);
  for (std::size_t i = 1; i <= longer.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= shorter.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = longer[i - 1] == shorter[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[shorter.size()];
}

namespace {

double f1(double p, double r) { return p + r != 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

double homogenization_rouge(std::string_view machine_text, std::string_view human_text,
                            RougeVariant variant) {
  const auto hyp = words_or_throw(machine_text);
  const auto ref = words_or_throw(human_text);
  double overlap = 0.0;
  if (variant == RougeVariant::kRougeL) {
    overlap = static_cast<double>(lcs_length(hyp, ref));
  } else {
    const auto h = count_ngrams(hyp, 1);
    const auto r = count_ngrams(ref, 1);
    for (const auto& [g, c] : h) {
      auto it = r.find(g);
      if (it != r.end()) overlap += static_cast<double>(std::min(c, it->second));
    }
  }
  return f1(overlap / static_cast<double>(hyp.size()), overlap / static_cast<double>(ref.size()));
}

namespace {

Eigen::MatrixXd unit_rows(const Eigen::MatrixXd& m, const char* what) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (!(norm > 0.0)) throw Error(ErrorCode::kZeroNorm, std::string(what) + " has a zero vector");
    out.row(i) /= norm;
  }
  return out;
}

}  // namespace

double homogenization_bertscore(const Eigen::MatrixXd& machine_tokens,
                                const Eigen::MatrixXd& human_tokens) {
  if (machine_tokens.rows() == 0 || human_tokens.rows() == 0) {
    throw Error(ErrorCode::kEmptyList, "token embedding list is empty");
  }
  if (machine_tokens.cols() != human_tokens.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "token embeddings differ in dimension");
  }
  const Eigen::MatrixXd hyp = unit_rows(machine_tokens, "machine tokens");
  const Eigen::MatrixXd ref = unit_rows(human_tokens, "human tokens");
  const Eigen::MatrixXd sim = hyp * ref.transpose();
  const double precision = sim.rowwise().maxCoeff().mean();
  const double recall = sim.colwise().maxCoeff().mean();
  return f1(precision, recall);
}

PairStatsReport pair_stats_report(const Document& machine, const Document& human,
                                  const PairStatsOptions& options,
                                  const Eigen::MatrixXd* machine_token_vectors,
                                  const Eigen::MatrixXd* human_token_vectors) {
  PairStatsReport r;
  r.machine_doc_id = machine.doc_id;
  r.human_doc_id = human.doc_id;
  r.edit_distance = edit_distance(machine.text, human.text);
  r.joint_compression_ratio =
      joint_compression_ratio(machine.text, human.text, options.compression_level);
  r.ngram_diversity = ngram_diversity(machine.text, human.text, options.n_max);
  for (int n = 1; n <= options.n_max; ++n) r.self_repetition[n] = self_repetition(machine.text, n);
  r.homog_bleu = homogenization_bleu(machine.text, human.text);
  r.rouge_variant = options.rouge_variant;
  r.homog_rouge = homogenization_rouge(machine.text, human.text, options.rouge_variant);
  if (machine_token_vectors != nullptr && human_token_vectors != nullptr) {
    r.homog_bertscore = homogenization_bertscore(*machine_token_vectors, *human_token_vectors);
  }
  return r;
}

PairLoadResult load_pairs(const std::filesystem::path& path) {
  PairLoadResult result;
  detail::for_each_jsonl(
      path,
      [&](std::size_t, const nlohmann::json& rec) {
        result.pairs.push_back({detail::require_string(rec, "machine_doc_id"),
                                detail::require_string(rec, "human_doc_id")});
      },
      result.errors);
  return result;
}

}  // namespace mgt
