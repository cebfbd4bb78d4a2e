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

#include "mgtscope/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "jsonl.hpp"
#include "mgtscope/random.hpp"

namespace mgt {

AuthorLabel AuthorLabel::machine(std::string generator_id) {
  if (generator_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "machine label requires a generator id");
  }
  return AuthorLabel(Kind::kMachine, std::move(generator_id));
}

AuthorLabel AuthorLabel::parse(std::string_view text) {
  if (text == "human") return human();
  if (text == "machine") return any_machine();
  constexpr std::string_view kPrefix = "machine:";
  if (text.starts_with(kPrefix) && text.size() > kPrefix.size()) {
    return machine(std::string(text.substr(kPrefix.size())));
  }
  throw Error(ErrorCode::kUnknownLabel, "cannot parse label \"" + std::string(text) + "\"");
}

std::string AuthorLabel::to_string() const {
  if (is_human()) return "human";
  if (is_aggregate_machine()) return "machine";
  return "machine:" + generator_;
}

GeneratorRegistry GeneratorRegistry::default_registry(bool allow_unknown) {
  return GeneratorRegistry(
      {"SOLAR", "Gemma", "Llama3-8", "Qwen-7", "Mistral", "NeuralChat", "Phi3"}, allow_unknown);
}

bool GeneratorRegistry::accepts(std::string_view id) const {
  if (id.empty() || id == AuthorLabel::kAggregate) return false;
  return allow_unknown_ || ids_.contains(std::string(id));
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

std::string_view to_string(TaskId task) {
  static constexpr std::array<std::string_view, 7> kNames = {"E0", "E1", "E2", "E3",
                                                             "E4", "E5", "E6"};
  return kNames[static_cast<std::size_t>(task)];
}

std::optional<TaskId> parse_task_id(std::string_view text) {
  if (text.size() != 2 || text[0] != 'E' || text[1] < '0' || text[1] > '6') return std::nullopt;
  return static_cast<TaskId>(text[1] - '0');
}

std::string_view to_string(Problem problem) {
  return problem == Problem::kTuringTest ? "TT" : "AA";
}

std::optional<Problem> parse_problem(std::string_view text) {
  if (text == "TT" || text == "tt") return Problem::kTuringTest;
  if (text == "AA" || text == "aa") return Problem::kAuthorshipAttribution;
  return std::nullopt;
}

namespace {

Document document_from_json(const nlohmann::json& rec, const GeneratorRegistry& registry) {
  using detail::RecordError;
  Document doc;
  doc.doc_id = detail::require_string(rec, "doc_id");
  if (doc.doc_id.empty()) throw RecordError{"doc_id is empty"};
  doc.text = detail::require_string(rec, "text");
  doc.headline = detail::optional_string(rec, "headline");
  doc.domain_tag = detail::require_string(rec, "domain");

  const std::string label = detail::require_string(rec, "label");
  const auto generator = detail::optional_string(rec, "generator");
  if (label == "human") {
    if (generator && !generator->empty()) {
      throw RecordError{"human record must not name a generator"};
    }
    doc.label = AuthorLabel::human();
  } else if (label == "machine") {
    if (!generator || generator->empty()) throw RecordError{"machine record requires \"generator\""};
    if (!registry.accepts(*generator)) {
      throw RecordError{"unknown generator \"" + *generator + "\""};
    }
    doc.label = AuthorLabel::machine(*generator);
  } else {
    throw RecordError{"label must be \"human\" or \"machine\""};
  }

  if (const auto split = detail::optional_string(rec, "split")) {
    if (*split == "train") doc.split = Split::kTrain;
    else if (*split == "val") doc.split = Split::kVal;
    else if (*split == "test") doc.split = Split::kTest;
    else throw RecordError{"split must be train, val, test or null"};
  }
  if (const auto task = detail::optional_string(rec, "task")) {
    doc.task = parse_task_id(*task);
    if (!doc.task) throw RecordError{"task must be E0..E6 or null"};
  }
  doc.temperature = detail::optional_number(rec, "temperature");

  if (doc.text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw RecordError{"empty text for doc_id \"" + doc.doc_id + "\""};
  }
  return doc;
}

}  // namespace

Document parse_document(std::string_view json_line, const GeneratorRegistry& registry) {
  try {
    const auto rec = nlohmann::json::parse(json_line);
    if (!rec.is_object()) throw detail::RecordError{"record is not a JSON object"};
    return document_from_json(rec, registry);
  } catch (const detail::RecordError& e) {
    throw Error(ErrorCode::kSchemaViolation, e.message);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, e.what());
  }
}

CorpusLoadResult load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
  CorpusLoadResult result;
  std::map<std::string, std::size_t> first_line;
  detail::for_each_jsonl(
      path,
      [&](std::size_t line, const nlohmann::json& rec) {
        Document doc = document_from_json(rec, options.registry);
        auto [it, inserted] = first_line.emplace(doc.doc_id, line);
        if (!inserted) {
          throw Error(ErrorCode::kDuplicateId,
                      "doc_id \"" + doc.doc_id + "\" on lines " + std::to_string(it->second) +
                          " and " + std::to_string(line));
        }
        result.documents.push_back(std::move(doc));
      },
      result.errors);
  return result;
}

std::array<std::size_t, 3> allocate_split(std::size_t n, const SplitRatios& ratios) {
  const std::array<double, 3> r = {ratios.train, ratios.val, ratios.test};
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double exact = r[k] * static_cast<double>(n);
    counts[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[k] = exact - static_cast<double>(counts[k]);
    assigned += counts[k];
  }
  // Largest remainder; ties go to the earlier split.
  while (assigned < n) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k) {
      if (remainder[k] > remainder[best]) best = k;
    }
    ++counts[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  while (assigned > n) {  // only reachable through the epsilon above
    const auto k = static_cast<std::size_t>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    --counts[k];
    --assigned;
  }

  std::size_t positive = 0;
  for (double x : r) positive += x > 0.0 ? 1 : 0;
  if (n >= positive) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (r[k] > 0.0 && counts[k] == 0) {
        const auto donor = static_cast<std::size_t>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
        --counts[donor];
        ++counts[k];
      }
    }
  }
  return counts;
}

Partition split_corpus(const std::vector<Document>& docs, const SplitRatios& ratios,
                       std::uint64_t seed) {
  for (double x : {ratios.train, ratios.val, ratios.test}) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "split ratios must lie in [0, 1]");
    }
  }
  if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must sum to 1");
  }
  if (docs.empty()) throw Error(ErrorCode::kEmptyList, "no documents to split");

  std::map<AuthorLabel, std::vector<const Document*>> by_class;
  for (const auto& d : docs) by_class[d.label].push_back(&d);

  Partition out;
  Rng rng(seed);
  for (auto& [label, members] : by_class) {
    std::sort(members.begin(), members.end(),
              [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });
    // One stream per class, derived from the shared generator in class order,
    // so adding documents to one class leaves the other classes untouched.
    Rng class_rng(rng.next_u64());
    class_rng.shuffle(std::span<const Document*>(members));

    std::array<std::size_t, 3> counts{};
    if (members.size() < 3) {
      counts = {members.size(), 0, 0};
      out.warnings.push_back("class " + label.to_string() + " has " +
                             std::to_string(members.size()) +
                             " member(s); placed entirely in train");
    } else {
      counts = allocate_split(members.size(), ratios);
    }

    std::size_t i = 0;
    const auto take = [&](std::size_t count, Split split, std::vector<Document>& dst) {
      for (std::size_t k = 0; k < count; ++k, ++i) {
        Document d = *members[i];
        d.split = split;
        dst.push_back(std::move(d));
      }
    };
    take(counts[0], Split::kTrain, out.train);
    take(counts[1], Split::kVal, out.val);
    take(counts[2], Split::kTest, out.test);
  }

  const auto by_id = [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; };
  std::sort(out.train.begin(), out.train.end(), by_id);
  std::sort(out.val.begin(), out.val.end(), by_id);
  std::sort(out.test.begin(), out.test.end(), by_id);
  return out;
}

namespace {

std::vector<AuthorLabel> seen_generators() {
  std::vector<AuthorLabel> labels;
  const auto registry = GeneratorRegistry::default_registry();
  for (const auto& id : registry.ids()) {
    labels.push_back(AuthorLabel::machine(id));
  }
  return labels;  // std::set iteration order: alphabetical
}

std::vector<TaskSpec> build_registry() {
  struct Row {
    TaskId id;
    std::int64_t test_size;
    const char* models;
    const char* goal;
    int tt_classes;
    int aa_classes;
    const char* description;
  };
  static constexpr Row kRows[] = {
      {TaskId::kE0, 33051, "7 + 1", "ID", 2, 8,
       "In-domain test split of news articles: detection and attribution"},
      {TaskId::kE1, 66102, "7 + 1", "ID-V", 2, 8,
       "Temperature variants: test headlines regenerated at temperature 0.7 and 1.0"},
      {TaskId::kE2, 33051, "7 + 1", "ID-V", 2, 8,
       "Larger model size: ~70B Llama 3.1 and Qwen 2.5 against detectors trained on 8B/7B"},
      {TaskId::kE3, 33042, "7 + 1", "ID-V", 2, 8,
       "Self-rewriting: each model rewrites its own previous generations"},
      {TaskId::kE4, 65718, "7 + 1", "ID-V", 2, 8,
       "Human-machine mixing: human content revised or continued by each model"},
      {TaskId::kE5, 6573, "7", "OOD", 1, 7,
       "Out-of-domain text: essays written by each model"},
      {TaskId::kE6, 8193, "1 + 1", "OOD", 2, 2,
       "Previously unseen model: Yi-1.5-9B-Chat generations plus human texts"},
  };

  std::vector<TaskSpec> registry;
  for (const Row& row : kRows) {
    TaskSpec tt{row.id, Problem::kTuringTest, {AuthorLabel::human(), AuthorLabel::any_machine()},
                row.tt_classes, row.test_size, row.models, row.goal, row.description};
    TaskSpec aa{row.id, Problem::kAuthorshipAttribution, {}, row.aa_classes, row.test_size,
                row.models, row.goal, row.description};
    if (row.id == TaskId::kE5) {
      aa.class_labels = seen_generators();
    } else if (row.id == TaskId::kE6) {
      aa.class_labels = {AuthorLabel::human(), AuthorLabel::machine(std::string(kUnseenGenerator))};
      aa.fold_unlisted_machine_predictions = true;
    } else {
      aa.class_labels.push_back(AuthorLabel::human());
      for (auto& g : seen_generators()) aa.class_labels.push_back(std::move(g));
    }
    registry.push_back(std::move(tt));
    registry.push_back(std::move(aa));
  }
  return registry;
}

}  // namespace

const std::vector<TaskSpec>& task_registry() {
  static const std::vector<TaskSpec> registry = build_registry();
  return registry;
}

const TaskSpec& find_task(TaskId task, Problem problem) {
  for (const auto& spec : task_registry()) {
    if (spec.task_id == task && spec.problem == problem) return spec;
  }
  throw Error(ErrorCode::kInvalidArgument, "no such task");  // unreachable
}

}  // namespace mgt
