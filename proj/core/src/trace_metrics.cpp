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

#include "mgtscope/trace_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jsonl.hpp"
#include "mgtscope/parallel.hpp"

namespace mgt {

bool TokenTrace::has_moments() const {
  if (tokens.empty()) return false;
  for (const auto& t : tokens) {
    if (!t.exp_logprob || !t.var_logprob) return false;
  }
  return true;
}

void validate_trace(const TokenTrace& trace) {
  for (std::size_t i = 0; i < trace.tokens.size(); ++i) {
    const auto& t = trace.tokens[i];
    const auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::kSchemaViolation,
                  trace.doc_id + " token " + std::to_string(i) + ": " + why);
    };
    if (!std::isfinite(t.logprob) || t.logprob > 0.0) fail("logprob must be finite and <= 0");
    if (t.rank < 1) fail("rank must be >= 1");
    if (!std::isfinite(t.entropy) || t.entropy < 0.0) fail("entropy must be finite and >= 0");
    if (t.exp_logprob.has_value() != t.var_logprob.has_value()) {
      fail("elp and vlp must be both present or both absent");
    }
    if (t.exp_logprob && !std::isfinite(*t.exp_logprob)) fail("elp must be finite");
    if (t.var_logprob && (!std::isfinite(*t.var_logprob) || *t.var_logprob < 0.0)) {
      fail("vlp must be finite and >= 0");
    }
  }
}

TraceLoadResult load_traces(const std::filesystem::path& path) {
  TraceLoadResult result;
  detail::for_each_jsonl(
      path,
      [&](std::size_t, const nlohmann::json& rec) {
        TokenTrace trace;
        trace.doc_id = detail::require_string(rec, "doc_id");
        const auto& tokens = detail::require_field(rec, "tokens");
        if (!tokens.is_array()) throw detail::RecordError{"\"tokens\" must be an array"};
        if (tokens.empty()) throw detail::RecordError{"\"tokens\" is empty"};
        trace.tokens.reserve(tokens.size());
        for (const auto& tok : tokens) {
          if (!tok.is_object()) throw detail::RecordError{"token entries must be objects"};
          TraceToken t;
          t.text = detail::optional_string(tok, "t").value_or("");
          t.logprob = detail::require_number(tok, "lp");
          const auto& rank = detail::require_field(tok, "rank");
          if (!rank.is_number_integer()) throw detail::RecordError{"\"rank\" must be an integer"};
          t.rank = rank.get<std::int64_t>();
          t.entropy = detail::require_number(tok, "ent");
          t.exp_logprob = detail::optional_number(tok, "elp");
          t.var_logprob = detail::optional_number(tok, "vlp");
          trace.tokens.push_back(std::move(t));
        }
        try {
          validate_trace(trace);
        } catch (const Error& e) {
          throw detail::RecordError{e.what()};
        }
        result.traces.push_back(std::move(trace));
      },
      result.errors);
  return result;
}

namespace {

void require_tokens(const TokenTrace& trace) {
  if (trace.tokens.empty()) throw Error(ErrorCode::kEmptyTrace, trace.doc_id);
}

template <typename Fn>
double mean_of(const TokenTrace& trace, Fn&& value) {
  require_tokens(trace);
  double sum = 0.0;
  for (const auto& t : trace.tokens) sum += value(t);
  return sum / static_cast<double>(trace.tokens.size());
}

}  // namespace

double log_likelihood_score(const TokenTrace& trace) {
  return mean_of(trace, [](const TraceToken& t) { return t.logprob; });
}

double rank_score(const TokenTrace& trace) {
  return mean_of(trace, [](const TraceToken& t) { return static_cast<double>(t.rank); });
}

double log_rank_score(const TokenTrace& trace) {
  return mean_of(trace, [](const TraceToken& t) { return std::log(static_cast<double>(t.rank)); });
}

double entropy_score(const TokenTrace& trace) {
  return mean_of(trace, [](const TraceToken& t) { return t.entropy; });
}

std::vector<double> gltr_features(const TokenTrace& trace,
                                  const std::vector<std::int64_t>& buckets) {
  require_tokens(trace);
  if (buckets.empty() || buckets.front() < 1) {
    throw Error(ErrorCode::kInvalidBuckets, "buckets must be non-empty and >= 1");
  }
  for (std::size_t i = 1; i < buckets.size(); ++i) {
    if (buckets[i] <= buckets[i - 1]) {
      throw Error(ErrorCode::kInvalidBuckets, "buckets must be strictly ascending");
    }
  }
  std::vector<std::size_t> counts(buckets.size() + 1, 0);
  for (const auto& t : trace.tokens) {
    std::size_t k = 0;
    while (k < buckets.size() && t.rank > buckets[k]) ++k;
    ++counts[k];
  }
  std::vector<double> fractions(counts.size());
  const double n = static_cast<double>(trace.tokens.size());
  for (std::size_t k = 0; k < counts.size(); ++k) fractions[k] = static_cast<double>(counts[k]) / n;
  return fractions;
}

double lrr_score(const TokenTrace& trace) {
  require_tokens(trace);
  double neg_ll = 0.0;
  double log_rank = 0.0;
  for (const auto& t : trace.tokens) {
    neg_ll -= t.logprob;
    log_rank += std::log(static_cast<double>(t.rank));
  }
  if (!(log_rank > 0.0)) {
    throw Error(ErrorCode::kDegenerate, trace.doc_id + ": every token has rank 1, LRR undefined");
  }
  return neg_ll / log_rank;
}

double fast_detectgpt_curvature(const TokenTrace& trace) {
  require_tokens(trace);
  double delta = 0.0;
  double variance = 0.0;
  for (const auto& t : trace.tokens) {
    if (!t.exp_logprob || !t.var_logprob) {
      throw Error(ErrorCode::kMissingMoments, trace.doc_id + ": token lacks elp/vlp");
    }
    delta += t.logprob - *t.exp_logprob;
    variance += *t.var_logprob;
  }
  if (!(variance > 0.0)) throw Error(ErrorCode::kZeroVariance, trace.doc_id);
  return delta / std::sqrt(variance);
}

std::string_view to_string(Feature feature) {
  switch (feature) {
    case Feature::kLogLikelihood: return "log_likelihood";
    case Feature::kRank: return "rank";
    case Feature::kLogRank: return "log_rank";
    case Feature::kEntropy: return "entropy";
    case Feature::kGltr: return "gltr";
    case Feature::kLrr: return "lrr";
    case Feature::kCurvature: return "curvature";
  }
  return "?";
}

std::optional<Feature> parse_feature(std::string_view name) {
  for (Feature f : {Feature::kLogLikelihood, Feature::kRank, Feature::kLogRank, Feature::kEntropy,
                    Feature::kGltr, Feature::kLrr, Feature::kCurvature}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::vector<std::string> feature_schema(const FeatureConfig& config) {
  std::vector<std::string> names;
  for (Feature f : config.features) {
    if (f == Feature::kGltr) {
      for (std::size_t k = 1; k <= config.gltr_buckets.size() + 1; ++k) {
        names.push_back("gltr_b" + std::to_string(k));
      }
    } else {
      names.emplace_back(to_string(f));
    }
  }
  return names;
}

FeatureVector feature_vector(const TokenTrace& trace, const FeatureConfig& config) {
  FeatureVector out{trace.doc_id, {}};
  for (Feature f : config.features) {
    switch (f) {
      case Feature::kLogLikelihood: out.values.push_back(log_likelihood_score(trace)); break;
      case Feature::kRank: out.values.push_back(rank_score(trace)); break;
      case Feature::kLogRank: out.values.push_back(log_rank_score(trace)); break;
      case Feature::kEntropy: out.values.push_back(entropy_score(trace)); break;
      case Feature::kGltr: {
        const auto g = gltr_features(trace, config.gltr_buckets);
        out.values.insert(out.values.end(), g.begin(), g.end());
        break;
      }
      case Feature::kLrr:
        try {
          out.values.push_back(lrr_score(trace));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDegenerate) throw;
          out.values.push_back(config.lrr_sentinel);
        }
        break;
      case Feature::kCurvature: out.values.push_back(fast_detectgpt_curvature(trace)); break;
    }
  }
  return out;
}

FeatureBatch extract_features(const std::vector<TokenTrace>& traces, const FeatureConfig& config,
                              unsigned threads) {
  FeatureConfig effective = config;
  FeatureBatch batch;
  const bool wants_curvature =
      std::find(config.features.begin(), config.features.end(), Feature::kCurvature) !=
      config.features.end();
  if (wants_curvature) {
    std::size_t missing = 0;
    for (const auto& t : traces) missing += t.has_moments() ? 0 : 1;
    if (missing > 0) {
      std::erase(effective.features, Feature::kCurvature);
      batch.notes.push_back("curvature dropped: " + std::to_string(missing) +
                            " trace(s) lack log-probability moments");
    }
  }
  batch.schema = feature_schema(effective);
  batch.rows.resize(traces.size());
  parallel_for(traces.size(), threads,
               [&](std::size_t i) { batch.rows[i] = feature_vector(traces[i], effective); });

  if (std::find(effective.features.begin(), effective.features.end(), Feature::kLrr) !=
      effective.features.end()) {
    for (const auto& trace : traces) {
      const bool all_rank_one = std::all_of(trace.tokens.begin(), trace.tokens.end(),
                                            [](const TraceToken& t) { return t.rank == 1; });
      if (all_rank_one) {
        std::ostringstream note;
        note << "lrr undefined for " << trace.doc_id << " (all ranks 1); wrote sentinel "
             << config.lrr_sentinel;
        batch.notes.push_back(note.str());
      }
    }
  }
  return batch;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureBatch& batch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "doc_id";
  for (const auto& name : batch.schema) out << ',' << name;
  out << '\n';
  char buf[64];
  for (const auto& row : batch.rows) {
    if (row.values.size() != batch.schema.size()) {
      throw Error(ErrorCode::kSchemaMismatch, row.doc_id + ": row length differs from schema");
    }
    out << row.doc_id;
    for (double v : row.values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

FeatureBatch read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileMissing, path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kSchemaViolation, "feature file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.empty() || header.front() != "doc_id") {
    throw Error(ErrorCode::kSchemaViolation, "feature header must start with doc_id");
  }
  FeatureBatch batch;
  batch.schema.assign(header.begin() + 1, header.end());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  path.string() + " line " + std::to_string(line_no) + ": wrong column count");
    }
    FeatureVector row{cells.front(), {}};
    for (std::size_t k = 1; k < cells.size(); ++k) {
      char* end = nullptr;
      const double v = std::strtod(cells[k].c_str(), &end);
      if (cells[k].empty() || end != cells[k].c_str() + cells[k].size()) {
        throw Error(ErrorCode::kSchemaViolation,
                    path.string() + " line " + std::to_string(line_no) + ": bad number");
      }
      row.values.push_back(v);
    }
    batch.rows.push_back(std::move(row));
  }
  return batch;
}

}  // namespace mgt
