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
#include <vector>

#include "closeness/closeness.hpp"
#include "network/graph.hpp"

namespace kepath {

using PoiVertexMap = std::map<PoiId, std::size_t>;  // PoI id -> dense vertex index

// Nearest vertex by straight-line distance; ties go to the smallest vertex id.
std::size_t NearestVertex(const Coord& where, const RoadGraph& graph);
PoiVertexMap MapPoisToVertices(const PoiTable& pois, const RoadGraph& graph);

// Each edge lists the closeness scores of the PoI pairs whose shortest path
// under d runs over it. Independent of alpha, so an alpha sweep reuses it.
struct EdgeCoverage {
  std::vector<std::vector<double>> weights;  // per edge
  std::size_t unreachable_pairs = 0;
};

EdgeCoverage ComputeCoverage(const RoadGraph& graph, const RelationshipGraph& closeness_graph, const PoiVertexMap& mapping,
                             unsigned threads = 1);

inline constexpr double kMinCostFactor = 1e-6;

// Road graph with enriched costs: c(e) = d(e) * prod over covering pairs of
// (1 - alpha * closeness), each factor floored at kMinCostFactor.
struct EnrichedGraph {
  const RoadGraph* graph = nullptr;
  double alpha = 0.0;
  std::vector<double> length;  // d(e)
  std::vector<double> cost;    // c(e)
  std::vector<std::size_t> covering_pairs;
};

EnrichedGraph ApplyEnrichment(const RoadGraph& graph, const EdgeCoverage& coverage, double alpha);
EnrichedGraph Enrich(const RoadGraph& graph, const RelationshipGraph& closeness_graph, const PoiVertexMap& mapping,
                     double alpha, unsigned threads = 1);

// (1 / d(p)) * sum of c(e) over the path. Throws for zero-length paths.
double EnrichmentRatio(const Path& path, const EnrichedGraph& enriched);

std::string EnrichedGraphToTsv(const EnrichedGraph& enriched);
std::string PoiVertexMapToTsv(const PoiVertexMap& mapping, const RoadGraph& graph);

}  // namespace kepath
