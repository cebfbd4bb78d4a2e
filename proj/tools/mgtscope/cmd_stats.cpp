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
#include <map>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mgtscope/contrastive.hpp"
#include "mgtscope/pairstats.hpp"
#include "mgtscope/parallel.hpp"
#include "mgtscope/report_writer.hpp"
#include "mgtscope/textstats.hpp"

namespace mgt::cli {

namespace {

struct StatsArgs {
  std::string corpus;
  std::string tags;
  bool no_pos = false;
  int level = kDefaultCompressionLevel;
  double alpha = kDefaultPositionalDecay;
  bool skip_invalid = false;
  bool allow_unknown = false;
  std::string out = "stats.jsonl";
  std::string aggregate_out = "stats_aggregate.txt";
};

struct PairArgs {
  std::string corpus;
  std::string pairs;
  std::string embeddings;
  int n_max = 3;
  std::string rouge = "rougeL";
  int level = kDefaultCompressionLevel;
  bool skip_invalid = false;
  bool allow_unknown = false;
  std::string out = "pairstats.jsonl";
};

using StatTable = std::map<std::string, RunningStats>;

// Row order of the aggregate table.
const std::vector<std::string> kStatRows = {"syC", "lC", "sC", "FRE", "POS-E", "pPOS-E", "Cr"};

void accumulate(StatTable& t, const TextStatsReport& r) {
  t["syC"].add(static_cast<double>(r.syllable_count));
  t["lC"].add(static_cast<double>(r.lexicon_count));
  t["sC"].add(static_cast<double>(r.sentence_count));
  t["FRE"].add(r.flesch_reading_ease);
  if (r.pos_entropy) t["POS-E"].add(*r.pos_entropy);
  if (r.positional_pos_entropy) t["pPOS-E"].add(*r.positional_pos_entropy);
  t["Cr"].add(r.compression_ratio);
}

struct Cell {
  double mean, std, min, max;
};

// One column group per class, plus the unweighted average of the per
// generator groups, as in the human / machines layout of the benchmark
// statistics table.
std::string render_aggregate(const std::map<AuthorLabel, StatTable>& groups) {
  std::vector<std::string> names;
  std::vector<std::map<std::string, Cell>> columns;
  std::map<std::string, std::vector<Cell>> machine_cells;
  std::size_t machine_groups = 0;
  for (const auto& [label, table] : groups) {
    names.push_back(label.to_string());
    std::map<std::string, Cell> col;
    for (const auto& [stat, rs] : table) {
      if (rs.count() == 0) continue;
      col[stat] = {rs.mean(), rs.stddev(), rs.min(), rs.max()};
      if (label.is_machine()) machine_cells[stat].push_back(col[stat]);
    }
    if (label.is_machine()) ++machine_groups;
    columns.push_back(std::move(col));
  }
  if (machine_groups > 1) {
    names.push_back("machines (avg)");
    std::map<std::string, Cell> col;
    for (const auto& [stat, cells] : machine_cells) {
      if (cells.size() != machine_groups) continue;
      Cell c{0, 0, 0, 0};
      for (const auto& x : cells) {
        c.mean += x.mean;
        c.std += x.std;
        c.min += x.min;
        c.max += x.max;
      }
      const double k = static_cast<double>(cells.size());
      col[stat] = {c.mean / k, c.std / k, c.min / k, c.max / k};
    }
    columns.push_back(std::move(col));
  }

  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s", "");
  out += buf;
  for (const auto& n : names) {
    std::snprintf(buf, sizeof buf, " | %-43s", n.c_str());
    out += buf;
  }
  out += "\n";
  std::snprintf(buf, sizeof buf, "%-10s", "statistic");
  out += buf;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::snprintf(buf, sizeof buf, " | %10s %10s %10s %10s", "Mean", "Std", "Min", "Max");
    out += buf;
  }
  out += "\n";
  for (const auto& stat : kStatRows) {
    std::snprintf(buf, sizeof buf, "%-10s", stat.c_str());
    out += buf;
    for (const auto& col : columns) {
      auto it = col.find(stat);
      if (it == col.end()) {
        std::snprintf(buf, sizeof buf, " | %10s %10s %10s %10s", "-", "-", "-", "-");
      } else {
        const Cell& c = it->second;
        std::snprintf(buf, sizeof buf, " | %10.3f %10.3f %10.3f %10.3f", c.mean, c.std, c.min, c.max);
      }
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void run_stats(RunContext& ctx, const StatsArgs& a) {
  if (a.no_pos && !a.tags.empty()) throw UsageError("--tags and --no-pos are mutually exclusive");
  if (!a.no_pos && a.tags.empty()) {
    throw UsageError("--tags is required for the POS metrics (pass --no-pos to skip them)");
  }
  std::optional<std::filesystem::path> tags_path;
  if (!a.no_pos) tags_path = ctx.input("--tags", a.tags);
  const auto docs = load_corpus_checked(ctx, a.corpus, a.allow_unknown, a.skip_invalid);

  std::map<std::string, PosTagSequence> tags;
  if (tags_path) {
    auto loaded = load_pos_tags(*tags_path);
    check_line_errors(ctx, a.tags, loaded.errors, a.skip_invalid);
    for (auto& s : loaded.sequences) {
      const std::string id = s.doc_id;
      if (!tags.emplace(id, std::move(s)).second) {
        throw Error(ErrorCode::kDuplicateId, a.tags + ": duplicate doc_id \"" + id + "\"");
      }
    }
    for (const auto& d : docs) {
      if (!tags.contains(d.doc_id)) {
        throw Error(ErrorCode::kSchemaViolation, "--tags has no entry for doc_id \"" + d.doc_id + "\"");
      }
    }
  }

  std::vector<TextStatsReport> reports(docs.size());
  parallel_for(docs.size(), ctx.threads(), [&](std::size_t i) {
    const PosTagSequence* t = tags_path ? &tags.at(docs[i].doc_id) : nullptr;
    reports[i] = text_stats_report(docs[i], t, a.level, a.alpha);
  });

  std::string lines;
  std::map<AuthorLabel, StatTable> groups;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    lines += text_stats_line(reports[i]);
    accumulate(groups[docs[i].label], reports[i]);
  }
  ctx.write_output(a.out, lines);
  ctx.write_output(a.aggregate_out, render_aggregate(groups));
  ctx.info("wrote " + std::to_string(docs.size()) + " report lines");
}

void run_pairstats(RunContext& ctx, const PairArgs& a) {
  PairStatsOptions options;
  options.compression_level = a.level;
  options.n_max = a.n_max;
  if (a.rouge == "rougeL") {
    options.rouge_variant = RougeVariant::kRougeL;
  } else if (a.rouge == "rouge1") {
    options.rouge_variant = RougeVariant::kRouge1;
  } else {
    throw UsageError("--rouge must be rougeL or rouge1");
  }
  if (a.n_max < 1) throw UsageError("--n-max must be >= 1");

  const auto pairs_path = ctx.input("--pairs", a.pairs);
  std::optional<std::filesystem::path> emb_path;
  if (!a.embeddings.empty()) emb_path = ctx.input("--embeddings", a.embeddings);
  const auto docs = load_corpus_checked(ctx, a.corpus, a.allow_unknown, a.skip_invalid);
  std::map<std::string, const Document*> by_id;
  for (const auto& d : docs) by_id[d.doc_id] = &d;

  auto loaded = load_pairs(pairs_path);
  check_line_errors(ctx, a.pairs, loaded.errors, a.skip_invalid);
  const auto find_doc = [&](const std::string& id) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kSchemaViolation, "--pairs names doc_id \"" + id + "\" absent from the corpus");
    }
    return it->second;
  };

  std::map<std::string, Eigen::MatrixXd> token_vectors;
  if (emb_path) {
    auto emb = load_embeddings(*emb_path);
    check_line_errors(ctx, a.embeddings, emb.errors, a.skip_invalid);
    for (auto& r : emb.records) {
      if (r.token_vectors) token_vectors.emplace(r.doc_id, std::move(*r.token_vectors));
    }
  }

  std::vector<PairStatsReport> reports(loaded.pairs.size());
  std::vector<char> missing_vectors(loaded.pairs.size(), 0);
  parallel_for(loaded.pairs.size(), ctx.threads(), [&](std::size_t i) {
    const auto& p = loaded.pairs[i];
    const Document* m = find_doc(p.machine_doc_id);
    const Document* h = find_doc(p.human_doc_id);
    const Eigen::MatrixXd* mv = nullptr;
    const Eigen::MatrixXd* hv = nullptr;
    if (emb_path) {
      auto mi = token_vectors.find(p.machine_doc_id);
      auto hi = token_vectors.find(p.human_doc_id);
      if (mi != token_vectors.end() && hi != token_vectors.end()) {
        mv = &mi->second;
        hv = &hi->second;
      } else {
        missing_vectors[i] = 1;
      }
    }
    reports[i] = pair_stats_report(*m, *h, options, mv, hv);
  });

  std::string lines;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (missing_vectors[i]) {
      ctx.warn("no token vectors for pair " + loaded.pairs[i].machine_doc_id + " / " +
               loaded.pairs[i].human_doc_id + "; homog_bertscore left null");
    }
    lines += pair_stats_line(reports[i]);
  }
  ctx.write_output(a.out, lines);
}

}  // namespace

void add_stats_commands(CLI::App& app, std::vector<Command>& out) {
  {
    auto a = std::make_shared<StatsArgs>();
    auto* sub = app.add_subcommand("stats", "Per-document text statistics and a per-class aggregate table");
    sub->add_option("--corpus", a->corpus, "Corpus JSONL")->required();
    sub->add_option("--tags", a->tags, "POS-tag JSONL (required unless --no-pos)");
    sub->add_flag("--no-pos", a->no_pos, "Skip POS-entropy metrics");
    sub->add_option("--compression-level", a->level, "gzip level")->check(CLI::Range(0, 9));
    sub->add_option("--alpha", a->alpha, "Positional POS-entropy decay")->check(CLI::NonNegativeNumber);
    sub->add_flag("--skip-invalid", a->skip_invalid, "Drop malformed input lines instead of failing");
    sub->add_flag("--allow-unknown-generators", a->allow_unknown, "Accept generator ids outside the registry");
    sub->add_option("--out", a->out, "Report file name in the output directory");
    sub->add_option("--aggregate-out", a->aggregate_out, "Aggregate table file name");
    out.push_back({sub, [a](RunContext& ctx) { run_stats(ctx, *a); }});
  }
  {
    auto a = std::make_shared<PairArgs>();
    auto* sub = app.add_subcommand("pairstats", "Machine/human pair statistics");
    sub->add_option("--corpus", a->corpus, "Corpus JSONL")->required();
    sub->add_option("--pairs", a->pairs, "Pairing JSONL")->required();
    sub->add_option("--embeddings", a->embeddings, "Embedding JSONL with tok_vecs, enables BERTScore");
    sub->add_option("--n-max", a->n_max, "Largest n for diversity and self-repetition");
    sub->add_option("--rouge", a->rouge, "rougeL or rouge1");
    sub->add_option("--compression-level", a->level, "gzip level")->check(CLI::Range(0, 9));
    sub->add_flag("--skip-invalid", a->skip_invalid, "Drop malformed input lines instead of failing");
    sub->add_flag("--allow-unknown-generators", a->allow_unknown, "Accept generator ids outside the registry");
    sub->add_option("--out", a->out, "Report file name in the output directory");
    out.push_back({sub, [a](RunContext& ctx) { run_pairstats(ctx, *a); }});
  }
}

}  // namespace mgt::cli
