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
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "closeness/closeness.hpp"
#include "network/enrich.hpp"
#include "routing/routing.hpp"

namespace kepath {

struct Photo {
  std::string id;
  Coord coord;
};

std::vector<Photo> PhotosFromTsv(std::string_view tsv, DistanceMode mode);

inline constexpr double kDefaultPopularityRadius = 20.0;

// Photo counts per dense vertex index. A photo credits every vertex within
// the radius, so one photo may count several times.
struct PopularityIndex {
  std::vector<std::int64_t> counts;

  std::int64_t at(std::size_t vertex) const { return counts.at(vertex); }
};

PopularityIndex BuildPopularityIndex(const std::vector<Photo>& photos, const RoadGraph& graph,
                                     double radius_m = kDefaultPopularityRadius);

// Sum over the path's distinct vertices.
std::int64_t PathPopularity(const Path& path, const PopularityIndex& index);

// Diagonal of the bounding box of all vertex coordinates.
double NetworkExtent(const RoadGraph& graph);

struct FractionRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct ExperimentConfig {
  std::size_t n_pairs = 100;
  std::vector<double> alphas{0.2, 0.4, 0.6, 0.8, 1.0};
  double beta = kDefaultDetourFactor;
  FractionRange setting_i_range{0.3, 0.5};
  std::vector<FractionRange> brackets{{0.1, 0.2}, {0.2, 0.3}, {0.3, 0.4}, {0.4, 0.5}, {0.5, 0.6}};
  double setting_ii_alpha = 1.0;
  std::uint64_t seed = 1;
  std::size_t max_draws = 1000000;
  unsigned threads = 1;

  void Validate() const;
};

using VertexPair = std::pair<std::size_t, std::size_t>;

// Seeded uniform vertex pairs whose straight-line separation lies within
// [lo, hi] * extent. Throws ErrorCode::kSamplingExhausted.
std::vector<VertexPair> SamplePairs(const RoadGraph& graph, FractionRange range, std::size_t n_pairs,
                                    std::uint64_t seed, std::size_t max_draws = 1000000);

// Relative drop of er against the baseline, in percent. Positive means the
// candidate runs over more strongly enriched edges.
double EnrichmentGain(double baseline_er, double candidate_er);

struct MetricRow {
  std::string setting;  // "i" or "ii"
  std::string param;    // alpha value or bracket label
  std::size_t pair_index = 0;
  VertexId source = 0;
  VertexId target = 0;
  Algorithm algorithm = Algorithm::kDijG;
  double length_m = 0.0;
  double cost = 0.0;
  double er = 1.0;
  std::int64_t popularity = 0;
  double delta_length_pct = 0.0;
  double delta_popularity_pct = 0.0;
  double enrichment_gain_pct = 0.0;
  bool fallback = false;
};

struct MetricAggregate {
  std::string setting;
  std::string param;
  Algorithm algorithm = Algorithm::kDijG;
  std::size_t n_pairs = 0;
  std::size_t n_fallback = 0;
  double mean_delta_length_pct = 0.0;
  double mean_delta_popularity_pct = 0.0;
  double mean_enrichment_gain_pct = 0.0;
  double mean_length_m = 0.0;
  double mean_popularity = 0.0;
  double mean_er = 0.0;
  bool flagged = false;
  std::string note;
};

struct MetricsReport {
  std::vector<MetricRow> rows;
  std::vector<MetricAggregate> aggregates;

  const MetricAggregate* Find(std::string_view setting, std::string_view param, Algorithm alg) const;
};

// Means per (setting, param, algorithm) over the matching rows.
std::vector<MetricAggregate> Aggregate(const std::vector<MetricRow>& rows);

struct EvaluationInputs {
  const RoadGraph* graph = nullptr;
  const RelationshipGraph* closeness_graph = nullptr;
  const PoiVertexMap* mapping = nullptr;
  const EdgeCoverage* coverage = nullptr;
  const PopularityIndex* popularity = nullptr;
};

// Setting i: one pair sample, every alpha in the grid.
MetricsReport RunSettingI(const EvaluationInputs& in, const ExperimentConfig& config);
// Setting ii: full weights, one pair sample per distance bracket. Brackets that
// cannot be filled are reported as flagged rows without data.
MetricsReport RunSettingII(const EvaluationInputs& in, const ExperimentConfig& config);

std::string AggregatesToCsv(const std::vector<MetricAggregate>& aggregates);
std::string RowsToJsonl(const std::vector<MetricRow>& rows);

}  // namespace kepath
