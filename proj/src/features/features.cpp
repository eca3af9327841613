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

#include "features/features.hpp"

#include "common/error.hpp"
#include "common/io.hpp"
#include "common/log.hpp"

namespace kepath {

FeatureVector ComputeFeature(DistanceMode mode, const Coord& from, const Coord& to) {
  return {Distance(mode, from, to), Bearing(mode, from, to)};
}

FeatureExtraction BuildFeatureSets(const std::vector<RelationTriplet>& triplets, const PoiTable& pois,
                                   DistanceMode mode) {
  FeatureExtraction out;
  for (const auto& t : triplets) {
    auto a = pois.find(t.poi_a);
    auto b = pois.find(t.poi_b);
    if (a == pois.end() || b == pois.end()) {
      throw Error(ErrorCode::kInvalidArgument, "triplet references a PoI without coordinates (" +
                                                   std::to_string(t.poi_a) + ", " + std::to_string(t.poi_b) + ")");
    }
    if (a->second.coord == b->second.coord) {
      LogWarning("skipping triplet " + a->second.canonical_name + " / " + b->second.canonical_name +
                 ": coincident coordinates");
      ++out.skipped;
      continue;
    }
    const OrderedPair key{t.poi_a, t.poi_b};
    auto it = out.pair_features.find(key);
    if (it == out.pair_features.end()) {
      it = out.pair_features.emplace(key, ComputeFeature(mode, a->second.coord, b->second.coord)).first;
    }
    out.records.push_back({t.relation_index, it->second, t.poi_a, t.poi_b});
  }
  out.sets = GroupRecords(out.records);
  return out;
}

std::map<std::size_t, FeatureSet> GroupRecords(const std::vector<FeatureRecord>& records) {
  std::map<std::size_t, FeatureSet> sets;
  for (const auto& r : records) {
    auto& set = sets[r.relation_index];
    set.relation_index = r.relation_index;
    set.vectors.push_back(r.feature);
  }
  return sets;
}

std::string FeaturesToCsv(const std::vector<FeatureRecord>& records, const RelationLexicon& lexicon) {
  std::string out = "relation,distance_m,orientation_deg,poi_a,poi_b\n";
  for (const auto& r : records) {
    out += lexicon.surface(r.relation_index) + ',' + FormatDouble(r.feature.distance) + ',' +
           FormatDouble(r.feature.orientation) + ',' + std::to_string(r.poi_a) + ',' +
           std::to_string(r.poi_b) + '\n';
  }
  return out;
}

std::vector<FeatureRecord> FeaturesFromCsv(std::string_view csv, const RelationLexicon& lexicon) {
  std::vector<FeatureRecord> records;
  const auto lines = SplitLines(csv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (Trim(lines[n]).empty()) continue;
    if (n == 0 && lines[n].rfind("relation,", 0) == 0) continue;
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (std::size_t pos; (pos = lines[n].find(',', start)) != std::string_view::npos; start = pos + 1) {
      f.push_back(lines[n].substr(start, pos - start));
    }
    f.push_back(lines[n].substr(start));
    if (f.size() != 5) throw Error(ErrorCode::kParse, "features line " + std::to_string(n + 1) + ": expected 5 columns");
    FeatureRecord r;
    r.relation_index = lexicon.IndexOf(f[0]);
    if (r.relation_index == lexicon.size()) {
      throw Error(ErrorCode::kParse, "features line " + std::to_string(n + 1) + ": unknown relation '" +
                                         std::string(f[0]) + "'");
    }
    r.feature.distance = ParseDouble(f[1], "distance", n + 1);
    r.feature.orientation = ParseDouble(f[2], "orientation", n + 1);
    r.poi_a = ParseInt(f[3], "poi_a", n + 1);
    r.poi_b = ParseInt(f[4], "poi_b", n + 1);
    records.push_back(r);
  }
  return records;
}

}  // namespace kepath
