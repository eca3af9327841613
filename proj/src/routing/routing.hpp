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

#include "closeness/closeness.hpp"
#include "network/enrich.hpp"
#include "network/graph.hpp"

namespace kepath {

enum class Algorithm { kDijG, kDijGStar, kDijHStar };

const char* AlgorithmName(Algorithm alg);
Algorithm ParseAlgorithm(std::string_view name);

inline constexpr double kDefaultDetourFactor = 1.6;

struct RouteResult {
  Algorithm algorithm = Algorithm::kDijG;
  Path path;
  double length = 0.0;  // d(p)
  double cost = 0.0;    // c(p)
  double er = 1.0;      // 1 for zero-length paths
  std::vector<PoiId> poi_sequence;  // PoI-hopping route only
  bool fallback = false;            // PoI-hopping fell back to the enriched shortest path
  std::string note;
};

// Shortest path under d; er measured against the enriched costs.
RouteResult DijG(const EnrichedGraph& enriched, std::size_t source, std::size_t target);
// Shortest path under c.
RouteResult DijGStar(const EnrichedGraph& enriched, std::size_t source, std::size_t target);

// PoIs P with |sP| + |Pt| <= beta * |st|, and the graph edges between them.
RelationshipGraph EllipseFilter(const RelationshipGraph& closeness_graph, const Coord& source, const Coord& target,
                                double beta, DistanceMode mode);

// PoI-hopping route: enter the filtered graph at the PoI nearest s, leave at
// the PoI nearest t, hop along its shortest path (edge weight = PoI
// separation), and join consecutive stops with shortest paths under c. Falls
// back to DijGStar when no PoI survives the filter or entry and exit are
// disconnected.
RouteResult DijHStar(const EnrichedGraph& enriched, const RelationshipGraph& closeness_graph,
                     const PoiVertexMap& mapping, std::size_t source, std::size_t target,
                     double beta = kDefaultDetourFactor);

std::string RouteToJson(const RouteResult& route, const RoadGraph& graph, std::size_t source, std::size_t target);
std::string RoutesToGeoJson(const std::vector<RouteResult>& routes, const RoadGraph& graph);

}  // namespace kepath
