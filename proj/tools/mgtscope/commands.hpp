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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgtscope/corpus.hpp"
#include "run_context.hpp"

namespace CLI {
class App;
}

namespace mgt::cli {

struct Command {
  CLI::App* app = nullptr;
  std::function<void(RunContext&)> run;
};

void add_stats_commands(CLI::App& app, std::vector<Command>& out);        // stats, pairstats
void add_detection_commands(CLI::App& app, std::vector<Command>& out);    // score, train-lr
void add_attribution_commands(CLI::App& app, std::vector<Command>& out);  // train-contrastive, attribute
void add_evaluation_commands(CLI::App& app, std::vector<Command>& out);   // evaluate, tasks

// Shared helpers.

// Logs every line error; unless `skip_invalid`, then fails with exit code 1.
void check_line_errors(const RunContext& ctx, const std::string& file,
                       const std::vector<LineError>& errors, bool skip_invalid);

std::vector<Document> load_corpus_checked(RunContext& ctx, const std::string& path,
                                          bool allow_unknown, bool skip_invalid);

// "train", "val", "test" or "any" (no filter).
std::optional<Split> parse_split_flag(const std::string& flag, const std::string& value);
Problem parse_problem_flag(const std::string& value);

// doc_id -> label for documents in `split` (all when nullopt). TT collapses
// machine labels to the aggregate class.
std::map<std::string, AuthorLabel> label_map(const std::vector<Document>& docs,
                                             std::optional<Split> split, Problem problem);

// Reassigns splits with split_corpus under the run seed. `ratios` is
// "train,val,test"; empty leaves the corpus splits untouched.
std::vector<Document> maybe_resplit(RunContext& ctx, std::vector<Document> docs,
                                    const std::string& ratios);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace mgt::cli
