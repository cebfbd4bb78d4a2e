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
#include <optional>
#include <string>
#include <string_view>

#include "mgtscope/pairstats.hpp"
#include "mgtscope/textstats.hpp"

namespace mgt {

// "%.6f"; NaN and infinities render as null.
std::string format_fixed6(double value);
// C99 hexadecimal float ("%a"), exact round trip.
std::string format_hex(double value);
double parse_hex(std::string_view text);

// Builds one JSON object on a single line, keys in insertion order. Reals are
// written twice: `key` with six decimals and `key_hex` with every bit.
class JsonLine {
 public:
  JsonLine& add(std::string_view key, std::string_view value);
  JsonLine& add(std::string_view key, const char* value) { return add(key, std::string_view(value)); }
  JsonLine& add(std::string_view key, std::int64_t value);
  JsonLine& add(std::string_view key, int value) { return add(key, static_cast<std::int64_t>(value)); }
  JsonLine& add(std::string_view key, bool value);
  JsonLine& add_real(std::string_view key, double value);
  JsonLine& add_real(std::string_view key, const std::optional<double>& value);
  JsonLine& add_null(std::string_view key);

  // The object followed by '\n'.
  std::string str() const;

 private:
  void key(std::string_view k);
  std::string body_;
};

std::string text_stats_line(const TextStatsReport& report);
std::string pair_stats_line(const PairStatsReport& report);

}  // namespace mgt
