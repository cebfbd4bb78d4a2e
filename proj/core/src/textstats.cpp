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

#include "mgtscope/textstats.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "jsonl.hpp"
#include "mgtscope/tokenize.hpp"

namespace mgt {

PosTagLoadResult load_pos_tags(const std::filesystem::path& path) {
  PosTagLoadResult result;
  detail::for_each_jsonl(
      path,
      [&](std::size_t, const nlohmann::json& rec) {
        PosTagSequence seq;
        seq.doc_id = detail::require_string(rec, "doc_id");
        const auto& tags = detail::require_field(rec, "tags");
        if (!tags.is_array()) throw detail::RecordError{"\"tags\" must be an array"};
        for (const auto& t : tags) {
          if (!t.is_string() || t.get_ref<const std::string&>().empty()) {
            throw detail::RecordError{"tags must be non-empty strings"};
          }
          seq.tags.push_back(t.get<std::string>());
        }
        result.sequences.push_back(std::move(seq));
      },
      result.errors);
  return result;
}

namespace {

void require_text(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyText, "text is empty");
  }
}

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z'); }

}  // namespace

std::int64_t syllables_in_word(std::string_view word) {
  std::string w;
  w.reserve(word.size());
  for (char c : word) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    w.push_back(c);
  }

  std::int64_t groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }

  const std::size_t n = w.size();
  if (groups > 1 && n >= 2 && w[n - 1] == 'e' && !is_vowel(w[n - 2])) {
    const bool consonant_le = n >= 3 && w[n - 2] == 'l' && is_ascii_letter(w[n - 3]) &&
                              !is_vowel(w[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max<std::int64_t>(groups, 1);
}

std::int64_t count_syllables(std::string_view text) {
  require_text(text);
  std::int64_t total = 0;
  for (const auto& w : word_tokens(text)) total += syllables_in_word(w);
  return total;
}

std::int64_t count_words(std::string_view text) {
  require_text(text);
  return static_cast<std::int64_t>(word_tokens(text).size());
}

std::int64_t count_sentences(std::string_view text) {
  require_text(text);
  return static_cast<std::int64_t>(sentence_tokens(text).size());
}

std::size_t gzip_size(std::string_view bytes, int level) {
  if (level < 0 || level > 9) {
    throw Error(ErrorCode::kInvalidArgument, "compression level must be in [0, 9]");
  }
  z_stream zs{};
  // windowBits 15 + 16 selects the gzip container.
  if (deflateInit2(&zs, level, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorCode::kIo, "deflateInit2 failed");
  }
  std::vector<unsigned char> out(deflateBound(&zs, static_cast<uLong>(bytes.size())) + 32);
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  zs.avail_in = static_cast<uInt>(bytes.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const std::size_t size = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::kIo, "deflate did not finish");
  return size;
}

double compression_ratio(std::string_view text, int level) {
  if (text.empty()) throw Error(ErrorCode::kEmptyText, "text is empty");
  return static_cast<double>(text.size()) / static_cast<double>(gzip_size(text, level));
}

double flesch_reading_ease(std::string_view text) {
  require_text(text);
  const auto sentences = sentence_tokens(text);
  std::int64_t words = 0;
  std::int64_t syllables = 0;
  for (const auto& s : sentences) {
    words += static_cast<std::int64_t>(s.size());
    for (const auto& w : s) syllables += syllables_in_word(w);
  }
  if (words == 0) throw Error(ErrorCode::kZeroWords, "text has no words");
  const double wps = static_cast<double>(words) / static_cast<double>(sentences.size());
  const double spw = static_cast<double>(syllables) / static_cast<double>(words);
  return 206.835 - 1.015 * wps - 84.6 * spw;
}

namespace {

double entropy_of(const std::map<std::string_view, double>& mass) {
  double h = 0.0;
  for (const auto& [tag, p] : mass) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double pos_entropy(const std::vector<std::string>& tags) {
  if (tags.empty()) throw Error(ErrorCode::kEmptyTags, "no POS tags");
  std::map<std::string_view, std::size_t> counts;
  for (const auto& t : tags) ++counts[t];
  std::map<std::string_view, double> freq;
  const double n = static_cast<double>(tags.size());
  for (const auto& [tag, c] : counts) freq[tag] = static_cast<double>(c) / n;
  return entropy_of(freq);
}

double positional_pos_entropy(const std::vector<std::string>& tags, double alpha) {
  if (tags.empty()) throw Error(ErrorCode::kEmptyTags, "no POS tags");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be >= 0");

  std::vector<double> w(tags.size());
  double total = 0.0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    w[i] = std::exp(-alpha * static_cast<double>(i));
    total += w[i];
  }
  std::map<std::string_view, double> wfreq;
  for (std::size_t i = 0; i < tags.size(); ++i) wfreq[tags[i]] += w[i] / total;
  return entropy_of(wfreq);
}

TextStatsReport text_stats_report(const Document& doc, const PosTagSequence* tags, int level,
                                  double alpha) {
  require_text(doc.text);
  TextStatsReport r;
  r.doc_id = doc.doc_id;
  r.syllable_count = count_syllables(doc.text);
  r.lexicon_count = count_words(doc.text);
  r.sentence_count = count_sentences(doc.text);
  r.compression_ratio = compression_ratio(doc.text, level);
  r.flesch_reading_ease = flesch_reading_ease(doc.text);
  r.compression_level = level;
  r.positional_decay = alpha;
  if (tags != nullptr) {
    if (tags->doc_id != doc.doc_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "tag sequence for \"" + tags->doc_id + "\" paired with \"" + doc.doc_id + "\"");
    }
    r.pos_entropy = pos_entropy(tags->tags);
    r.positional_pos_entropy = positional_pos_entropy(tags->tags, alpha);
  }
  return r;
}

void RunningStats::add(double x) {
  ++n_;
  if (n_ == 1) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
}

double RunningStats::stddev() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(m2_ / static_cast<double>(n_ - 1));
}

}  // namespace mgt
