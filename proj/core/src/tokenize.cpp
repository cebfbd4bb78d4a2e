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

#include "mgtscope/tokenize.hpp"

namespace mgt {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  while (i < text.size()) {
    const unsigned char b0 = byte(i);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const unsigned char b = byte(i + k);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    // Reject overlong forms, surrogates and out-of-range values.
    if (ok) {
      static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) ok = false;
    }
    if (!ok) {
      out.push_back(U'\uFFFD');
      ++i;
    } else {
      out.push_back(cp);
      i += len;
    }
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case U'\u00A0': case U'\u1680': case U'\u2028': case U'\u2029':
    case U'\u202F': case U'\u205F': case U'\u3000': case U'\u0085':
      return true;
    default:
      return c >= U'\u2000' && c <= U'\u200A';
  }
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case U'\u00A1': case U'\u00A7': case U'\u00AB': case U'\u00B6':
    case U'\u00B7': case U'\u00BB': case U'\u00BF':
      return true;
    default:
      return (c >= U'\u2010' && c <= U'\u2027') || (c >= U'\u2030' && c <= U'\u205E') ||
             (c >= U'\u3001' && c <= U'\u3003');
  }
}

namespace {

bool is_closer(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case U'}':
    case U'\u2019': case U'\u201D': case U'\u00BB':
      return true;
    default:
      return false;
  }
}

bool is_terminator(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == U'\u2026';
}

bool ends_sentence(std::u32string_view raw) {
  while (!raw.empty() && is_closer(raw.back())) raw.remove_suffix(1);
  return !raw.empty() && is_terminator(raw.back());
}

template <typename Fn>
void for_each_raw_token(std::u32string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) fn(text.substr(start, i - start));
  }
}

std::string strip_punct(std::u32string_view raw) {
  std::u32string kept;
  kept.reserve(raw.size());
  for (char32_t c : raw) {
    if (!is_punct(c)) kept.push_back(c);
  }
  return encode_utf8(kept);
}

}  // namespace

std::vector<std::string> word_tokens(std::string_view text) {
  const std::u32string decoded = decode_utf8(text);
  std::vector<std::string> words;
  for_each_raw_token(decoded, [&](std::u32string_view raw) {
    std::string w = strip_punct(raw);
    if (!w.empty()) words.push_back(std::move(w));
  });
  return words;
}

std::vector<std::vector<std::string>> sentence_tokens(std::string_view text) {
  const std::u32string decoded = decode_utf8(text);
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  for_each_raw_token(decoded, [&](std::u32string_view raw) {
    std::string w = strip_punct(raw);
    if (!w.empty()) current.push_back(std::move(w));
    if (ends_sentence(raw) && !current.empty()) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  });
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

}  // namespace mgt
