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
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "extract/extract.hpp"
#include "geo/geo.hpp"

namespace kepath {

// Straight-line distance in meters and bearing in degrees [0, 360) from the
// first PoI of an ordered pair to the second.
struct FeatureVector {
  double distance = 0.0;
  double orientation = 0.0;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector ComputeFeature(DistanceMode mode, const Coord& from, const Coord& to);

struct FeatureRecord {
  std::size_t relation_index = 0;
  FeatureVector feature;
  PoiId poi_a = 0;
  PoiId poi_b = 0;
};

struct FeatureSet {
  std::size_t relation_index = 0;
  std::vector<FeatureVector> vectors;
};

using OrderedPair = std::pair<PoiId, PoiId>;

struct FeatureExtraction {
  std::vector<FeatureRecord> records;                    // one per surviving triplet, input order
  std::map<std::size_t, FeatureSet> sets;                // only relations with observations
  std::map<OrderedPair, FeatureVector> pair_features;    // D_ij, stored once per ordered pair
  std::size_t skipped = 0;                               // coincident PoIs
};

// Triplets whose PoIs share coordinates are skipped with a warning.
FeatureExtraction BuildFeatureSets(const std::vector<RelationTriplet>& triplets, const PoiTable& pois,
                                   DistanceMode mode);

std::map<std::size_t, FeatureSet> GroupRecords(const std::vector<FeatureRecord>& records);

std::string FeaturesToCsv(const std::vector<FeatureRecord>& records, const RelationLexicon& lexicon);
std::vector<FeatureRecord> FeaturesFromCsv(std::string_view csv, const RelationLexicon& lexicon);

}  // namespace kepath
