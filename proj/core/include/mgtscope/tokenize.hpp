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

#include <string>
#include <string_view>
#include <vector>

namespace mgt {

// Decodes UTF-8 into Unicode scalar values. Malformed sequences decode to
// U+FFFD one byte at a time.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

bool is_space(char32_t c);
// ASCII punctuation plus the General Punctuation block and a few common
// quotation marks.
bool is_punct(char32_t c);

// Word tokenization shared by every text statistic: whitespace-delimited
// tokens with all punctuation removed; tokens that become empty are dropped.
std::vector<std::string> word_tokens(std::string_view text);

// Words grouped by sentence. A whitespace token closes the current sentence
// when it ends in '.', '!', '?' or U+2026 (ignoring trailing closing quotes
// and brackets). Runs of terminators collapse, sentences without any word are
// discarded, and a trailing unterminated run of words is one sentence. Because
// boundaries only fall between tokens, every sentence holds at least one word.
std::vector<std::vector<std::string>> sentence_tokens(std::string_view text);

}  // namespace mgt
