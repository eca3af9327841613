// Copyright 2026 The kepath Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "extract/text.hpp"

#include <array>
#include <cstdint>

#include "common/io.hpp"

namespace kepath {
namespace {

struct CodePoint {
  char32_t value = 0;
  std::size_t length = 1;
};

// Lenient UTF-8 decoder: malformed bytes decode as themselves (length 1).
CodePoint Decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  auto at = [&](std::size_t k) { return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F); };
  if ((b0 & 0xE0) == 0xC0 && cont(1)) return {(static_cast<char32_t>(b0 & 0x1F) << 6) | at(1), 2};
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    return {(static_cast<char32_t>(b0 & 0x0F) << 12) | (at(1) << 6) | at(2), 3};
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    return {(static_cast<char32_t>(b0 & 0x07) << 18) | (at(1) << 12) | (at(2) << 6) | at(3), 4};
  }
  return {b0, 1};
}

void AppendUtf8(std::string& out, char32_t cp) {
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

// ASCII replacements for U+00C0..U+00FF; nullptr keeps the code point.
constexpr std::array<const char*, 64> kLatin1Fold = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", nullptr, "o", "u", "u", "u", "u", "y", "th", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", nullptr, "o", "u", "u", "u", "u", "y", "th", "y"};

const char* FoldLatinExtendedA(char32_t cp) {
  struct Range {
    char32_t first, last;
    const char* base;
  };
  static constexpr Range kRanges[] = {
      {0x0100, 0x0105, "a"}, {0x0106, 0x010D, "c"}, {0x010E, 0x0111, "d"}, {0x0112, 0x011B, "e"},
      {0x011C, 0x0123, "g"}, {0x0124, 0x0127, "h"}, {0x0128, 0x0131, "i"}, {0x0132, 0x0133, "ij"},
      {0x0134, 0x0135, "j"}, {0x0136, 0x0138, "k"}, {0x0139, 0x0142, "l"}, {0x0143, 0x014B, "n"},
      {0x014C, 0x0151, "o"}, {0x0152, 0x0153, "oe"}, {0x0154, 0x0159, "r"}, {0x015A, 0x0161, "s"},
      {0x0162, 0x0167, "t"}, {0x0168, 0x0173, "u"}, {0x0174, 0x0175, "w"}, {0x0176, 0x0178, "y"},
      {0x0179, 0x017E, "z"}, {0x017F, 0x017F, "s"}};
  for (const auto& r : kRanges) {
    if (cp >= r.first && cp <= r.last) return r.base;
  }
  return nullptr;
}

char32_t ToLower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

bool IsUpper(char32_t cp) {
  return (cp >= 'A' && cp <= 'Z') || (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7);
}

bool IsSpace(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
         cp == 0xA0 || cp == 0x2009 || cp == 0x202F;
}

bool IsWordChar(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  if (cp >= 0xA0 && cp <= 0xBF) return false;  // Latin-1 punctuation and symbols
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // General Punctuation block
  return !IsSpace(cp);
}

bool IsInnerJoiner(char32_t cp) { return cp == '\'' || cp == 0x2019 || cp == '-'; }

bool IsTerminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool IsClosing(char c) { return c == '"' || c == '\'' || c == ')'; }

bool EndsWithAbbreviation(std::string_view text, std::size_t dot) {
  static constexpr std::string_view kAbbreviations[] = {"Mr", "Mrs", "Ms", "St", "Dr", "Mt"};
  std::size_t b = dot;
  while (b > 0) {
    const auto c = static_cast<unsigned char>(text[b - 1]);
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) break;
    --b;
  }
  const auto word = text.substr(b, dot - b);
  for (auto abbr : kAbbreviations) {
    if (word == abbr) return true;
  }
  return false;
}

}  // namespace

std::string FoldText(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) {
    const auto cp = Decode(utf8, i);
    i += cp.length;
    const char32_t c = cp.value;
    if (c < 0x80) {
      out.push_back(static_cast<char>(ToLower(c)));
    } else if (c >= 0xC0 && c <= 0xFF && kLatin1Fold[c - 0xC0] != nullptr) {
      out += kLatin1Fold[c - 0xC0];
    } else if (const char* base = FoldLatinExtendedA(c)) {
      out += base;
    } else {
      AppendUtf8(out, c);
    }
  }
  return out;
}

std::string NormalizeName(std::string_view name) {
  std::string key;
  for (const auto& tok : Tokenize(name)) {
    if (!key.empty()) key.push_back(' ');
    key += FoldText(tok.text);
  }
  return key;
}

std::vector<std::string> SegmentSentences(std::string_view text) {
  std::vector<std::string> sentences;
  auto emit = [&](std::size_t b, std::size_t e) {
    auto s = Trim(text.substr(b, e - b));
    if (!s.empty()) sentences.emplace_back(s);
  };
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsTerminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && IsTerminator(text[end])) ++end;
    while (end < text.size() && IsClosing(text[end])) ++end;
    std::size_t next = end;
    while (next < text.size()) {
      const auto cp = Decode(text, next);
      if (!IsSpace(cp.value)) break;
      next += cp.length;
    }
    bool split = false;
    if (next >= text.size()) {
      split = true;
    } else if (next > end && IsUpper(Decode(text, next).value)) {
      split = !(text[i] == '.' && end == i + 1 && EndsWithAbbreviation(text, i));
    }
    if (split) {
      emit(start, end);
      start = next;
    }
    i = end;
  }
  if (start < text.size()) emit(start, text.size());
  return sentences;
}

std::vector<Token> Tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    const auto cp = Decode(sentence, i);
    if (IsSpace(cp.value)) {
      i += cp.length;
      continue;
    }
    if (!IsWordChar(cp.value)) {
      Token t;
      t.begin = i;
      t.end = i + cp.length;
      t.text = std::string(sentence.substr(i, cp.length));
      t.is_word = false;
      tokens.push_back(std::move(t));
      i += cp.length;
      continue;
    }
    Token t;
    t.begin = i;
    std::size_t j = i;
    while (j < sentence.size()) {
      const auto c = Decode(sentence, j);
      if (IsWordChar(c.value)) {
        AppendUtf8(t.text, ToLower(c.value));
        j += c.length;
        continue;
      }
      if (IsInnerJoiner(c.value) && j + c.length < sentence.size() &&
          IsWordChar(Decode(sentence, j + c.length).value)) {
        AppendUtf8(t.text, c.value);
        j += c.length;
        continue;
      }
      break;
    }
    t.end = j;
    tokens.push_back(std::move(t));
    i = j;
  }
  return tokens;
}

}  // namespace kepath
