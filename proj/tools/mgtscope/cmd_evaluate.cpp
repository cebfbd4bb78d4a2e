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
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "mgtscope/evaluation.hpp"

namespace mgt::cli {

namespace {

struct EvaluateArgs {
  std::string predictions;
  std::string corpus;
  std::string task = "E0";
  std::string problem = "TT";
  std::string split = "test";
  std::string resplit;
  bool allow_unknown = false;
  bool skip_invalid = false;
  std::string out_prefix = "eval";
};

struct TasksArgs {
  bool json = false;
  std::string out;
};

std::map<std::string, AuthorLabel> load_predictions(const RunContext& ctx, const std::filesystem::path& path,
                                                    const std::string& flag_value, bool skip_invalid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileMissing, path.string());
  std::map<std::string, AuthorLabel> out;
  std::vector<LineError> errors;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto id = j.at("doc_id").get<std::string>();
      const auto label = AuthorLabel::parse(j.at("label").get<std::string>());
      if (!out.emplace(id, label).second) {
        throw Error(ErrorCode::kDuplicateId, flag_value + ": duplicate prediction for doc_id \"" + id + "\"");
      }
    } catch (const nlohmann::json::exception& e) {
      errors.push_back({n, e.what()});
    }
  }
  check_line_errors(ctx, flag_value, errors, skip_invalid);
  return out;
}

void run_evaluate(RunContext& ctx, const EvaluateArgs& a) {
  const auto task_id = parse_task_id(a.task);
  if (!task_id) throw UsageError("--task must be one of E0..E6");
  const Problem problem = parse_problem_flag(a.problem);
  const auto split = parse_split_flag("--split", a.split);
  const TaskSpec& task = find_task(*task_id, problem);

  const auto pred_path = ctx.input("--predictions", a.predictions);
  // The unseen-model task carries generators outside the registry by design.
  const bool allow_unknown = a.allow_unknown || *task_id == TaskId::kE6;
  auto docs = load_corpus_checked(ctx, a.corpus, allow_unknown, a.skip_invalid);
  docs = maybe_resplit(ctx, std::move(docs), a.resplit);

  std::vector<Document> test_docs;
  for (auto& d : docs) {
    if (split && d.split != split) continue;
    if (d.task.value_or(TaskId::kE0) != *task_id) continue;
    test_docs.push_back(std::move(d));
  }
  if (test_docs.empty()) {
    throw Error(ErrorCode::kEmptyList, "no documents for task " + a.task + " in split " + a.split);
  }
  if (task.expected_test_size && *task.expected_test_size != static_cast<std::int64_t>(test_docs.size())) {
    ctx.info("task " + a.task + " benchmark test size is " + std::to_string(*task.expected_test_size) +
             ", evaluating " + std::to_string(test_docs.size()) + " documents");
  }

  const auto predictions = load_predictions(ctx, pred_path, a.predictions, a.skip_invalid);
  const EvalReport report = evaluate_task(predictions, test_docs, task);
  const std::string stem = a.out_prefix + "_" + std::string(to_string(*task_id)) + "_" +
                           std::string(to_string(problem));
  const std::string table = render_eval_table(report);
  ctx.write_output(stem + ".json", eval_report_json(report));
  ctx.write_output(stem + ".txt", table);
  std::cout << table;
}

std::string tasks_text() {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-4s %-3s %-8s %-6s %-8s %-10s %s\n", "task", "pb", "classes", "goal",
                "models", "test_size", "description");
  out += buf;
  for (const auto& t : task_registry()) {
    const std::string size = t.expected_test_size ? std::to_string(*t.expected_test_size) : "-";
    std::snprintf(buf, sizeof buf, "%-4s %-3s %-8d %-6s %-8s %-10s %s\n", std::string(to_string(t.task_id)).c_str(),
                  std::string(to_string(t.problem)).c_str(), t.tested_classes, t.goal.c_str(),
                  t.tested_models.c_str(), size.c_str(), t.description.c_str());
    out += buf;
  }
  return out;
}

std::string tasks_json() {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : task_registry()) {
    nlohmann::ordered_json j;
    j["task"] = std::string(to_string(t.task_id));
    j["problem"] = std::string(to_string(t.problem));
    std::vector<std::string> labels;
    for (const auto& l : t.class_labels) labels.push_back(l.to_string());
    j["class_labels"] = labels;
    j["tested_classes"] = t.tested_classes;
    j["expected_test_size"] = t.expected_test_size ? nlohmann::ordered_json(*t.expected_test_size) : nullptr;
    j["tested_models"] = t.tested_models;
    j["goal"] = t.goal;
    j["description"] = t.description;
    j["fold_unlisted_machine_predictions"] = t.fold_unlisted_machine_predictions;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

void run_tasks(RunContext& ctx, const TasksArgs& a) {
  const std::string text = a.json ? tasks_json() : tasks_text();
  if (a.out.empty()) {
    std::cout << text;
  } else {
    ctx.write_output(a.out, text);
  }
}

}  // namespace

void add_evaluation_commands(CLI::App& app, std::vector<Command>& out) {
  {
    auto a = std::make_shared<EvaluateArgs>();
    auto* sub = app.add_subcommand("evaluate", "Score predictions against a benchmark task");
    sub->add_option("--predictions", a->predictions, "Predictions JSONL from attribute")->required();
    sub->add_option("--corpus", a->corpus, "Corpus JSONL with gold labels")->required();
    sub->add_option("--task", a->task, "E0..E6");
    sub->add_option("--problem", a->problem, "TT or AA");
    sub->add_option("--split", a->split, "Evaluation split: train, val, test or any");
    sub->add_option("--resplit", a->resplit, "Re-split the corpus with these ratios under --seed");
    sub->add_flag("--allow-unknown-generators", a->allow_unknown, "Accept generator ids outside the registry");
    sub->add_flag("--skip-invalid", a->skip_invalid, "Drop malformed input lines instead of failing");
    sub->add_option("--out-prefix", a->out_prefix, "Report file name prefix");
    out.push_back({sub, [a](RunContext& ctx) { run_evaluate(ctx, *a); }});
  }
  {
    auto a = std::make_shared<TasksArgs>();
    auto* sub = app.add_subcommand("tasks", "List the benchmark task registry");
    sub->add_flag("--json", a->json, "JSON instead of a table");
    sub->add_option("--out", a->out, "Write to this file in the output directory instead of stdout");
    out.push_back({sub, [a](RunContext& ctx) { run_tasks(ctx, *a); }});
  }
}

}  // namespace mgt::cli
