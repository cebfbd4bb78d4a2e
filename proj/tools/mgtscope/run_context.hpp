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

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace mgt::cli {

// Bad flags or flag combinations; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LogLevel { kError, kWarn, kInfo, kDebug };

struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: logical core count
  std::string output_dir;
  std::string log_level = "warn";
};

struct FileDigest {
  std::string path;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

std::string sha256_file(const std::filesystem::path& path);

// State shared by one invocation: resolved globals, the files read and
// written, and the manifest that records them.
class RunContext {
 public:
  RunContext(GlobalOptions globals, std::vector<std::string> argv);

  unsigned threads() const { return threads_; }
  std::uint64_t seed() const { return globals_.seed; }
  const std::filesystem::path& output_dir() const { return output_dir_; }

  void log(LogLevel level, const std::string& message) const;
  void warn(const std::string& message) const { log(LogLevel::kWarn, message); }
  void info(const std::string& message) const { log(LogLevel::kInfo, message); }

  // Records an input for the manifest; throws UsageError when it is missing.
  std::filesystem::path input(const std::string& flag, const std::string& path);
  // Resolves `name` under the output directory, creating the directory.
  std::filesystem::path output_path(const std::string& name);
  void write_output(const std::string& name, const std::string& content);
  // Registers a file that was written under output_path(name) by other code.
  void record_output(const std::filesystem::path& path) { outputs_.push_back(path); }

  void note(std::string text) { notes_.push_back(std::move(text)); }
  bool has_outputs() const { return !outputs_.empty(); }

  // Writes <subcommand>.manifest.json next to the outputs.
  void write_manifest(const CLI::App& sub);

 private:
  GlobalOptions globals_;
  std::vector<std::string> argv_;
  unsigned threads_ = 1;
  LogLevel level_ = LogLevel::kWarn;
  std::filesystem::path output_dir_;
  std::vector<std::pair<std::string, std::filesystem::path>> inputs_;
  std::vector<std::filesystem::path> outputs_;
  std::vector<std::string> notes_;
};

}  // namespace mgt::cli
