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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kepath {

std::string ReadFile(const std::filesystem::path& path);

// Writes through a temporary sibling and renames, so readers never observe a
// half-written artifact.
void WriteFile(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string_view> SplitLines(std::string_view text);
// The views point into `text`; refuse temporaries so they cannot dangle.
std::vector<std::string_view> SplitLines(std::string&& text) = delete;
template <std::size_t N>
std::vector<std::string_view> SplitLines(const char (&text)[N]) {
  return SplitLines(std::string_view(text));
}
std::vector<std::string_view> SplitTabs(std::string_view line);
std::string_view Trim(std::string_view s);

// True for blank lines and '#' comments.
bool IsSkippableLine(std::string_view line);

double ParseDouble(std::string_view field, std::string_view what, std::size_t line_no);
std::int64_t ParseInt(std::string_view field, std::string_view what, std::size_t line_no);

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double value);

// FNV-1a, used for content fingerprints in summaries.
std::uint64_t Fingerprint(std::string_view bytes);

}  // namespace kepath
