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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgtscope/corpus.hpp"
#include "mgtscope/error.hpp"

namespace mgt {

// Per-word POS tags for one document, produced by an external tagger.
struct PosTagSequence {
  std::string doc_id;
  std::vector<std::string> tags;
};

struct PosTagLoadResult {
  std::vector<PosTagSequence> sequences;
  std::vector<LineError> errors;
};

PosTagLoadResult load_pos_tags(const std::filesystem::path& path);

// Heuristic syllable count: maximal [aeiouy] groups per word, minus a silent
// trailing "e" (not after a consonant+"l") when the word has more than one
// group, with at least one syllable per word.
std::int64_t count_syllables(std::string_view text);
std::int64_t syllables_in_word(std::string_view word);
std::int64_t count_words(std::string_view text);
std::int64_t count_sentences(std::string_view text);

inline constexpr int kDefaultCompressionLevel = 6;

// Raw UTF-8 size over gzip-compressed size (gzip container, zero mtime).
// `level` must lie in [0, 9].
double compression_ratio(std::string_view text, int level = kDefaultCompressionLevel);
std::size_t gzip_size(std::string_view bytes, int level);

// 206.835 - 1.015 * words/sentences - 84.6 * syllables/words.
double flesch_reading_ease(std::string_view text);

// Shannon entropy (nats) of the tag-type distribution.
double pos_entropy(const std::vector<std::string>& tags);

inline constexpr double kDefaultPositionalDecay = 0.1;

// Entropy of the tag-type distribution where position i carries weight
// exp(-alpha * i), normalized over positions.
double positional_pos_entropy(const std::vector<std::string>& tags,
                              double alpha = kDefaultPositionalDecay);

struct TextStatsReport {
  std::string doc_id;
  std::int64_t syllable_count = 0;
  std::int64_t lexicon_count = 0;
  std::int64_t sentence_count = 0;
  double compression_ratio = 0.0;
  double flesch_reading_ease = 0.0;
  std::optional<double> pos_entropy;
  std::optional<double> positional_pos_entropy;
  int compression_level = kDefaultCompressionLevel;
  double positional_decay = kDefaultPositionalDecay;
};

// Builds a report. POS fields are filled only when `tags` is given; its
// doc_id must match the document.
TextStatsReport text_stats_report(const Document& doc, const PosTagSequence* tags,
                                  int level = kDefaultCompressionLevel,
                                  double alpha = kDefaultPositionalDecay);

// Welford accumulator for mean / sample standard deviation / min / max.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  // Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
  double stddev() const;
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace mgt
