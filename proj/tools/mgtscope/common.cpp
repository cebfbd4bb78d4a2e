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

#include <cstdio>
#include <string>

#include "commands.hpp"

namespace mgt::cli {

void check_line_errors(const RunContext& ctx, const std::string& file,
                       const std::vector<LineError>& errors, bool skip_invalid) {
  for (const auto& e : errors) {
    ctx.log(skip_invalid ? LogLevel::kWarn : LogLevel::kError,
            file + ":" + std::to_string(e.line) + ": " + e.message);
  }
  if (!errors.empty() && !skip_invalid) {
    throw Error(ErrorCode::kSchemaViolation,
                file + ": " + std::to_string(errors.size()) +
                    " invalid line(s); fix them or pass --skip-invalid");
  }
}

std::vector<Document> load_corpus_checked(RunContext& ctx, const std::string& path,
                                          bool allow_unknown, bool skip_invalid) {
  const auto p = ctx.input("--corpus", path);
  LoadOptions options{GeneratorRegistry::default_registry(allow_unknown)};
  auto result = load_corpus(p, options);
  check_line_errors(ctx, path, result.errors, skip_invalid);
  if (result.documents.empty()) throw Error(ErrorCode::kEmptyList, path + ": no documents");
  return std::move(result.documents);
}

std::optional<Split> parse_split_flag(const std::string& flag, const std::string& value) {
  if (value == "train") return Split::kTrain;
  if (value == "val") return Split::kVal;
  if (value == "test") return Split::kTest;
  if (value == "any") return std::nullopt;
  throw UsageError(flag + " must be one of train, val, test, any");
}

Problem parse_problem_flag(const std::string& value) {
  auto p = parse_problem(value);
  if (!p) throw UsageError("--problem must be TT or AA");
  return *p;
}

std::map<std::string, AuthorLabel> label_map(const std::vector<Document>& docs,
                                             std::optional<Split> split, Problem problem) {
  std::map<std::string, AuthorLabel> out;
  for (const auto& d : docs) {
    if (split && d.split != split) continue;
    out.emplace(d.doc_id, problem == Problem::kTuringTest ? d.label.collapsed() : d.label);
  }
  return out;
}

std::vector<Document> maybe_resplit(RunContext& ctx, std::vector<Document> docs,
                                    const std::string& ratios) {
  if (ratios.empty()) return docs;
  SplitRatios r;
  if (std::sscanf(ratios.c_str(), "%lf,%lf,%lf", &r.train, &r.val, &r.test) != 3) {
    throw UsageError("--resplit expects three comma-separated ratios, e.g. 0.8,0.1,0.1");
  }
  Partition part = split_corpus(docs, r, ctx.seed());
  for (const auto& w : part.warnings) {
    ctx.warn(w);
    ctx.note(w);
  }
  std::vector<Document> out = std::move(part.train);
  for (auto* v : {&part.val, &part.test}) {
    out.insert(out.end(), std::make_move_iterator(v->begin()), std::make_move_iterator(v->end()));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace mgt::cli
