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

#include "jsonl.hpp"

#include <cmath>
#include <fstream>

namespace mgt::detail {

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const nlohmann::json&)>& on_record,
                    std::vector<LineError>& errors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileMissing, path.string());

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
      continue;
    }
    if (!record.is_object()) {
      errors.push_back({line_no, "record is not a JSON object"});
      continue;
    }
    try {
      on_record(line_no, record);
    } catch (const RecordError& e) {
      errors.push_back({line_no, e.message});
    } catch (const nlohmann::json::exception& e) {
      errors.push_back({line_no, e.what()});
    }
  }
}

const nlohmann::json& require_field(const nlohmann::json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw RecordError{std::string("missing field \"") + name + "\""};
  return *it;
}

std::string require_string(const nlohmann::json& obj, const char* name) {
  const auto& v = require_field(obj, name);
  if (!v.is_string()) throw RecordError{std::string("field \"") + name + "\" must be a string"};
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw RecordError{std::string("field \"") + name + "\" must be a string or null"};
  return it->get<std::string>();
}

double require_number(const nlohmann::json& obj, const char* name) {
  const auto& v = require_field(obj, name);
  if (!v.is_number()) throw RecordError{std::string("field \"") + name + "\" must be a number"};
  return v.get<double>();
}

std::optional<double> optional_number(const nlohmann::json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw RecordError{std::string("field \"") + name + "\" must be a number or null"};
  return it->get<double>();
}

std::vector<double> number_array(const nlohmann::json& value, const char* what) {
  if (!value.is_array()) throw RecordError{std::string(what) + " must be an array"};
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& x : value) {
    if (!x.is_number()) throw RecordError{std::string(what) + " must contain only numbers"};
    const double d = x.get<double>();
    if (!std::isfinite(d)) throw RecordError{std::string(what) + " contains a non-finite value"};
    out.push_back(d);
  }
  return out;
}

}  // namespace mgt::detail
