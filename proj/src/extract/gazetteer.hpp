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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geo/geo.hpp"

namespace kepath {

using PoiId = std::int64_t;

struct GazetteerEntry {
  std::string name;
  Coord coord;
  std::int64_t population = 0;
};

struct Poi {
  PoiId id = 0;
  std::string canonical_name;
  Coord coord;
};

// Name-normalized lookup over a gazetteer. When several entries share a
// normalized name the most populous one wins; ties go to the earlier row.
// A Poi's id is the 0-based data-row index of its winning entry.
class Gazetteer {
 public:
  Gazetteer() = default;

  // Bounds are enforced only in geodesic mode; planar gazetteers carry meters.
  static Gazetteer Load(const std::filesystem::path& path, DistanceMode mode);
  static Gazetteer Parse(std::string_view tsv, DistanceMode mode);
  static Gazetteer FromEntries(std::vector<GazetteerEntry> entries, DistanceMode mode);

  const Poi* Lookup(std::string_view normalized_name) const;
  const Poi* FindById(PoiId id) const;

  std::size_t size() const { return by_name_.size(); }
  bool empty() const { return by_name_.empty(); }
  const std::vector<GazetteerEntry>& entries() const { return entries_; }

 private:
  void Add(GazetteerEntry entry, std::size_t line_no, DistanceMode mode);

  std::vector<GazetteerEntry> entries_;
  std::unordered_map<std::string, Poi> by_name_;
  std::unordered_map<PoiId, std::string> name_of_id_;
};

}  // namespace kepath
