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

#include "run_context.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mgtscope/error.hpp"
#include "mgtscope/version.hpp"

namespace mgt::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileMissing, "cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "sha256 init failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

namespace {

LogLevel parse_level(const std::string& s) {
  if (s == "error") return LogLevel::kError;
  if (s == "warn") return LogLevel::kWarn;
  if (s == "info") return LogLevel::kInfo;
  if (s == "debug") return LogLevel::kDebug;
  throw UsageError("--log-level must be one of error, warn, info, debug");
}

const char* level_name(LogLevel l) {
  switch (l) {
    case LogLevel::kError: return "error";
    case LogLevel::kWarn: return "warning";
    case LogLevel::kInfo: return "info";
    case LogLevel::kDebug: return "debug";
  }
  return "";
}

}  // namespace

RunContext::RunContext(GlobalOptions globals, std::vector<std::string> argv)
    : globals_(std::move(globals)), argv_(std::move(argv)) {
  level_ = parse_level(globals_.log_level);
  threads_ = globals_.threads > 0 ? globals_.threads : std::max(1u, std::thread::hardware_concurrency());
  if (!globals_.output_dir.empty()) {
    output_dir_ = globals_.output_dir;
  } else if (const char* env = std::getenv("MGTSCOPE_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    output_dir_ = env;
  } else {
    output_dir_ = ".";
  }
}

void RunContext::log(LogLevel level, const std::string& message) const {
  if (level <= level_) std::cerr << "mgtscope: " << level_name(level) << ": " << message << '\n';
}

std::filesystem::path RunContext::input(const std::string& flag, const std::string& path) {
  std::filesystem::path p(path);
  if (!std::filesystem::is_regular_file(p)) {
    throw UsageError(flag + ": file not found: " + path);
  }
  inputs_.emplace_back(flag, p);
  return p;
}

std::filesystem::path RunContext::output_path(const std::string& name) {
  std::filesystem::create_directories(output_dir_);
  return output_dir_ / name;
}

void RunContext::write_output(const std::string& name, const std::string& content) {
  const auto path = output_path(name);
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  outputs_.push_back(path);
}

namespace {

nlohmann::ordered_json digest_json(const std::filesystem::path& p) {
  nlohmann::ordered_json j;
  j["path"] = p.generic_string();
  j["bytes"] = std::filesystem::file_size(p);
  j["sha256"] = sha256_file(p);
  return j;
}

}  // namespace

void RunContext::write_manifest(const CLI::App& sub) {
  nlohmann::ordered_json m;
  m["tool"] = "mgtscope";
  m["version"] = kVersionString;
  m["subcommand"] = sub.get_name();
  m["argv"] = argv_;
  m["global"] = {{"seed", globals_.seed},
                 {"threads", threads_},
                 {"output_dir", output_dir_.generic_string()},
                 {"log_level", globals_.log_level}};
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const std::string& name = opt->get_lnames().front();
    if (opt->get_expected_max() == 0) {
      config[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
      config[name] = joined;
    } else {
      config[name] = opt->get_default_str();
    }
  }
  m["config"] = config;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& [flag, p] : inputs_) {
    auto d = digest_json(p);
    d["flag"] = flag;
    inputs.push_back(d);
  }
  m["inputs"] = inputs;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& p : outputs_) outputs.push_back(digest_json(p));
  m["outputs"] = outputs;
  m["notes"] = notes_;

  const auto path = output_path(sub.get_name() + ".manifest.json");
  std::ofstream out(path, std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace mgt::cli
