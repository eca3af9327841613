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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kepath {

struct Token {
  std::string text;       // lowercased
  std::size_t begin = 0;  // byte offsets into the source sentence
  std::size_t end = 0;
  bool is_word = true;

  friend bool operator==(const Token&, const Token&) = default;
};

// Lowercases and folds Latin-1 / Latin Extended-A letters to their ASCII base
// ("Café" -> "cafe", "Straße" -> "strasse"). Other code points pass through.
std::string FoldText(std::string_view utf8);

// Canonical lookup key for place names: fold, tokenize, join with one space.
std::string NormalizeName(std::string_view name);

// Splits on '.', '!' or '?' followed by whitespace and an uppercase letter, or
// by end of text. "Mr.", "Mrs.", "Ms.", "St.", "Dr." and "Mt." never end a
// sentence. Returned sentences are trimmed.
std::vector<std::string> SegmentSentences(std::string_view text);

// Word tokens keep inner apostrophes and hyphens ("d'hiver"); every other
// punctuation character becomes its own token.
std::vector<Token> Tokenize(std::string_view sentence);

}  // namespace kepath
