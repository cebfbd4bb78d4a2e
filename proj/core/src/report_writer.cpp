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

#include "mgtscope/report_writer.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace mgt {

std::string format_fixed6(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  // Avoid "-0.000000" for tiny negatives so equal reports compare equal.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::string format_hex(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

double parse_hex(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::kSchemaViolation, "not a hexadecimal float: " + s);
  }
  return v;
}

void JsonLine::key(std::string_view k) {
  if (!body_.empty()) body_ += ", ";
  body_ += nlohmann::json(std::string(k)).dump();
  body_ += ": ";
}

JsonLine& JsonLine::add(std::string_view k, std::string_view value) {
  key(k);
  body_ += nlohmann::json(std::string(value)).dump();
  return *this;
}

JsonLine& JsonLine::add(std::string_view k, std::int64_t value) {
  key(k);
  body_ += std::to_string(value);
  return *this;
}

JsonLine& JsonLine::add(std::string_view k, bool value) {
  key(k);
  body_ += value ? "true" : "false";
  return *this;
}

JsonLine& JsonLine::add_real(std::string_view k, double value) {
  key(k);
  body_ += format_fixed6(value);
  key(std::string(k) + "_hex");
  body_ += '"' + format_hex(value) + '"';
  return *this;
}

JsonLine& JsonLine::add_real(std::string_view k, const std::optional<double>& value) {
  if (value) return add_real(k, *value);
  add_null(k);
  return add_null(std::string(k) + "_hex");
}

JsonLine& JsonLine::add_null(std::string_view k) {
  key(k);
  body_ += "null";
  return *this;
}

std::string JsonLine::str() const { return "{" + body_ + "}\n"; }

std::string text_stats_line(const TextStatsReport& r) {
  JsonLine line;
  line.add("doc_id", r.doc_id)
      .add("syllable_count", r.syllable_count)
      .add("lexicon_count", r.lexicon_count)
      .add("sentence_count", r.sentence_count)
      .add_real("compression_ratio", r.compression_ratio)
      .add_real("flesch_reading_ease", r.flesch_reading_ease)
      .add_real("pos_entropy", r.pos_entropy)
      .add_real("positional_pos_entropy", r.positional_pos_entropy)
      .add("compression_level", r.compression_level)
      .add_real("positional_decay", r.positional_decay);
  return line.str();
}

std::string pair_stats_line(const PairStatsReport& r) {
  JsonLine line;
  line.add("machine_doc_id", r.machine_doc_id)
      .add("human_doc_id", r.human_doc_id)
      .add("edit_distance", r.edit_distance)
      .add_real("joint_compression_ratio", r.joint_compression_ratio);
  for (const auto& [n, v] : r.ngram_diversity) line.add_real("ngram_diversity_" + std::to_string(n), v);
  for (const auto& [n, v] : r.self_repetition) line.add_real("self_repetition_" + std::to_string(n), v);
  line.add_real("homog_bleu", r.homog_bleu)
      .add_real("homog_rouge", r.homog_rouge)
      .add("rouge_variant", to_string(r.rouge_variant))
      .add_real("homog_bertscore", r.homog_bertscore);
  return line.str();
}

}  // namespace mgt
