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

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mgtscope/error.hpp"

namespace mgt {

// Authorship of a text: HUMAN, or MACHINE together with the generator that
// produced it. The generator id "*" denotes the aggregate MACHINE class used
// by the binary Turing Test.
class AuthorLabel {
 public:
  enum class Kind { kHuman, kMachine };

  static AuthorLabel human() { return AuthorLabel(Kind::kHuman, {}); }
  // Throws Error(kInvalidArgument) on an empty generator id.
  static AuthorLabel machine(std::string generator_id);
  static AuthorLabel any_machine() { return machine(std::string(kAggregate)); }

  // Inverse of to_string(): "human", "machine" (aggregate) or "machine:<id>".
  static AuthorLabel parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_human() const { return kind_ == Kind::kHuman; }
  bool is_machine() const { return kind_ == Kind::kMachine; }
  bool is_aggregate_machine() const { return is_machine() && generator_ == kAggregate; }
  const std::string& generator_id() const { return generator_; }

  // TT view of the label: HUMAN stays HUMAN, any machine becomes MACHINE.
  AuthorLabel collapsed() const { return is_human() ? *this : any_machine(); }

  std::string to_string() const;

  // HUMAN sorts first, then generators in byte order.
  friend std::strong_ordering operator<=>(const AuthorLabel&, const AuthorLabel&) = default;
  friend bool operator==(const AuthorLabel&, const AuthorLabel&) = default;

  static constexpr std::string_view kAggregate = "*";

 private:
  AuthorLabel(Kind kind, std::string generator) : kind_(kind), generator_(std::move(generator)) {}

  Kind kind_;
  std::string generator_;
};

// Generator ids accepted when loading a corpus. Unknown ids are rejected
// unless the registry was opened with allow_unknown (needed for texts from
// models never seen in training).
class GeneratorRegistry {
 public:
  explicit GeneratorRegistry(std::set<std::string> ids, bool allow_unknown = false)
      : ids_(std::move(ids)), allow_unknown_(allow_unknown) {}

  // SOLAR, Gemma, Llama3-8, Qwen-7, Mistral, NeuralChat, Phi3.
  static GeneratorRegistry default_registry(bool allow_unknown = false);

  bool accepts(std::string_view id) const;
  bool allow_unknown() const { return allow_unknown_; }
  const std::set<std::string>& ids() const { return ids_; }

 private:
  std::set<std::string> ids_;
  bool allow_unknown_;
};

enum class Split { kTrain, kVal, kTest };
std::string_view to_string(Split split);

enum class TaskId { kE0, kE1, kE2, kE3, kE4, kE5, kE6 };
std::string_view to_string(TaskId task);
std::optional<TaskId> parse_task_id(std::string_view text);

enum class Problem { kTuringTest, kAuthorshipAttribution };
std::string_view to_string(Problem problem);  // "TT" / "AA"
std::optional<Problem> parse_problem(std::string_view text);

struct Document {
  std::string doc_id;
  std::string text;
  std::optional<std::string> headline;
  AuthorLabel label = AuthorLabel::human();
  std::string domain_tag;
  std::optional<Split> split;
  std::optional<TaskId> task;
  // Sampling temperature of the generation, when recorded. Lets E1 hold both
  // temperature settings in a single task.
  std::optional<double> temperature;
};

struct LoadOptions {
  GeneratorRegistry registry = GeneratorRegistry::default_registry();
};

struct CorpusLoadResult {
  std::vector<Document> documents;
  std::vector<LineError> errors;
};

// Reads corpus JSONL. Malformed records and empty texts are reported per line
// in `errors`. Throws Error(kFileMissing) and Error(kDuplicateId).
CorpusLoadResult load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});

// Parses one corpus record; throws Error(kSchemaViolation) with the reason.
Document parse_document(std::string_view json_line, const GeneratorRegistry& registry);

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct Partition {
  std::vector<Document> train;
  std::vector<Document> val;
  std::vector<Document> test;
  std::vector<std::string> warnings;
};

// Deterministic split stratified by full class label. Documents are ordered
// by doc_id before shuffling, so the result does not depend on input order.
// Each class is allocated by largest remainder; classes with at least three
// members get one document in every split with a positive ratio, classes
// with fewer go entirely to TRAIN (with a warning). Output vectors are sorted
// by doc_id and carry the assigned split.
Partition split_corpus(const std::vector<Document>& docs, const SplitRatios& ratios,
                       std::uint64_t seed);

// Per-class split sizes for n documents (exposed for testing).
std::array<std::size_t, 3> allocate_split(std::size_t n, const SplitRatios& ratios);

struct TaskSpec {
  TaskId task_id;
  Problem problem;
  // Label space the predictions are scored in.
  std::vector<AuthorLabel> class_labels;
  // Number of classes actually present in the task's test data ("# Classes").
  int tested_classes;
  std::optional<std::int64_t> expected_test_size;
  std::string tested_models;  // e.g. "7 + 1"
  std::string goal;           // ID, ID-V or OOD
  std::string description;
  // When set, any machine prediction that is not itself in class_labels is
  // scored as the task's machine class (the unseen-model task: the detector
  // can only name generators it saw in training).
  bool fold_unlisted_machine_predictions = false;
};

// The fourteen evaluation settings: tasks E0-E6, each under TT and AA.
const std::vector<TaskSpec>& task_registry();
const TaskSpec& find_task(TaskId task, Problem problem);

// Default generator for the unseen-model task.
inline constexpr std::string_view kUnseenGenerator = "Yi-1.5-9B";

}  // namespace mgt
