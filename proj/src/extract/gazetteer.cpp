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

#include "extract/gazetteer.hpp"

#include "common/error.hpp"
#include "common/io.hpp"
#include "extract/text.hpp"

namespace kepath {

Gazetteer Gazetteer::Load(const std::filesystem::path& path, DistanceMode mode) {
  return Parse(ReadFile(path), mode);
}

Gazetteer Gazetteer::Parse(std::string_view tsv, DistanceMode mode) {
  Gazetteer g;
  const auto lines = SplitLines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (IsSkippableLine(lines[n])) continue;
    const auto fields = SplitTabs(lines[n]);
    if (fields.size() < 3) {
      throw Error(ErrorCode::kParse, "gazetteer line " + std::to_string(line_no) +
                                         ": expected name, lat, lon[, population]");
    }
    if (g.entries_.empty() && Trim(fields[1]) == "lat") continue;  // header row
    GazetteerEntry e;
    e.name = std::string(Trim(fields[0]));
    e.coord.lat = ParseDouble(fields[1], "latitude", line_no);
    e.coord.lon = ParseDouble(fields[2], "longitude", line_no);
    if (fields.size() > 3 && !Trim(fields[3]).empty()) {
      e.population = ParseInt(fields[3], "population", line_no);
      if (e.population < 0) {
        throw Error(ErrorCode::kParse,
                    "gazetteer line " + std::to_string(line_no) + ": negative population");
      }
    }
    g.Add(std::move(e), line_no, mode);
  }
  return g;
}

Gazetteer Gazetteer::FromEntries(std::vector<GazetteerEntry> entries, DistanceMode mode) {
  Gazetteer g;
  for (std::size_t i = 0; i < entries.size(); ++i) g.Add(std::move(entries[i]), i + 1, mode);
  return g;
}

void Gazetteer::Add(GazetteerEntry entry, std::size_t line_no, DistanceMode mode) {
  if (mode == DistanceMode::kGeodesic && !InLatLonBounds(entry.coord)) {
    throw Error(ErrorCode::kCoordinateOutOfBounds,
                "gazetteer line " + std::to_string(line_no) + ": coordinate (" +
                    FormatDouble(entry.coord.lat) + ", " + FormatDouble(entry.coord.lon) +
                    ") out of bounds");
  }
  auto key = NormalizeName(entry.name);
  if (key.empty()) {
    throw Error(ErrorCode::kParse,
                "gazetteer line " + std::to_string(line_no) + ": empty name after normalization");
  }
  const auto id = static_cast<PoiId>(entries_.size());
  Poi poi{id, entry.name, entry.coord};
  const auto population = entry.population;
  entries_.push_back(std::move(entry));
  auto it = by_name_.find(key);
  if (it == by_name_.end()) {
    name_of_id_[id] = key;
    by_name_.emplace(std::move(key), std::move(poi));
    return;
  }
  if (population > entries_[static_cast<std::size_t>(it->second.id)].population) {
    name_of_id_.erase(it->second.id);
    name_of_id_[id] = key;
    it->second = std::move(poi);
  }
}

const Poi* Gazetteer::Lookup(std::string_view normalized_name) const {
  auto it = by_name_.find(std::string(normalized_name));
  return it == by_name_.end() ? nullptr : &it->second;
}

const Poi* Gazetteer::FindById(PoiId id) const {
  auto it = name_of_id_.find(id);
  return it == name_of_id_.end() ? nullptr : Lookup(it->second);
}

}  // namespace kepath
