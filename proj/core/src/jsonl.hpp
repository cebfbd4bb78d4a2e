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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mgtscope/error.hpp"

namespace mgt::detail {

// Thrown by record handlers to reject one line without aborting the load.
struct RecordError {
  std::string message;
};

// Streams a JSONL file. Blank lines are skipped. Parse failures and
// RecordError thrown from `on_record` are appended to `errors`; any other
// exception propagates. Throws Error(kFileMissing) if the file cannot be read.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t line, const nlohmann::json&)>& on_record,
                    std::vector<LineError>& errors);

const nlohmann::json& require_field(const nlohmann::json& obj, const char* name);
std::string require_string(const nlohmann::json& obj, const char* name);
std::optional<std::string> optional_string(const nlohmann::json& obj, const char* name);
double require_number(const nlohmann::json& obj, const char* name);
std::optional<double> optional_number(const nlohmann::json& obj, const char* name);
std::vector<double> number_array(const nlohmann::json& value, const char* what);

}  // namespace mgt::detail
