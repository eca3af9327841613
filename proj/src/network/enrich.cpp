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

#include "network/enrich.hpp"

#include <algorithm>
#include <limits>

#include "common/error.hpp"
#include "common/io.hpp"
#include "common/log.hpp"
#include "common/parallel.hpp"

namespace kepath {

std::size_t NearestVertex(const Coord& where, const RoadGraph& graph) {
  if (graph.vertex_count() == 0) throw Error(ErrorCode::kInvalidArgument, "road graph has no vertices");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < graph.vertex_count(); ++i) {
    const double d = Distance(graph.mode(), where, graph.vertex(i).coord);
    if (d < best_d) {  // strict: the earlier (smaller id) vertex keeps ties
      best_d = d;
      best = i;
    }
  }
  return best;
}

PoiVertexMap MapPoisToVertices(const PoiTable& pois, const RoadGraph& graph) {
  PoiVertexMap mapping;
  for (const auto& [id, poi] : pois) mapping[id] = NearestVertex(poi.coord, graph);
  return mapping;
}

EdgeCoverage ComputeCoverage(const RoadGraph& graph, const RelationshipGraph& closeness_graph, const PoiVertexMap& mapping,
                             unsigned threads) {
  const auto lengths = graph.Lengths();
  std::vector<std::optional<Path>> paths(closeness_graph.edges.size());
  ParallelFor(closeness_graph.edges.size(), threads, [&](std::size_t n) {
    const auto& e = closeness_graph.edges[n];
    const std::size_t u = mapping.at(e.poi_i);
    const std::size_t v = mapping.at(e.poi_j);
    try {
      paths[n] = ShortestPath(graph.adjacency(), lengths, u, v);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kNoPath) throw;
    }
  });

  EdgeCoverage coverage;
  coverage.weights.assign(graph.edge_count(), {});
  for (std::size_t n = 0; n < paths.size(); ++n) {
    if (!paths[n]) {
      LogWarning("PoI pair (" + std::to_string(closeness_graph.edges[n].poi_i) + ", " + std::to_string(closeness_graph.edges[n].poi_j) +
                 ") unreachable in the road network; skipped");
      ++coverage.unreachable_pairs;
      continue;
    }
    for (auto e : paths[n]->edges) coverage.weights[e].push_back(closeness_graph.edges[n].weight);
  }
  return coverage;
}

EnrichedGraph ApplyEnrichment(const RoadGraph& graph, const EdgeCoverage& coverage, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kConfig, "alpha must lie in [0, 1]");
  if (coverage.weights.size() != graph.edge_count()) {
    throw Error(ErrorCode::kInvalidArgument, "coverage does not match the road graph");
  }
  EnrichedGraph g;
  g.graph = &graph;
  g.alpha = alpha;
  g.length = graph.Lengths();
  g.cost = g.length;
  g.covering_pairs.assign(graph.edge_count(), 0);
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    double factor = 1.0;
    for (double w : coverage.weights[e]) factor *= std::max(1.0 - alpha * w, kMinCostFactor);
    g.cost[e] = g.length[e] * factor;
    g.covering_pairs[e] = coverage.weights[e].size();
  }
  return g;
}

EnrichedGraph Enrich(const RoadGraph& graph, const RelationshipGraph& closeness_graph, const PoiVertexMap& mapping,
                     double alpha, unsigned threads) {
  return ApplyEnrichment(graph, ComputeCoverage(graph, closeness_graph, mapping, threads), alpha);
}

double EnrichmentRatio(const Path& path, const EnrichedGraph& enriched) {
  const double d = path.Sum(enriched.length);
  if (!(d > 0.0)) throw Error(ErrorCode::kInvalidArgument, "enrichment ratio undefined for a zero-length path");
  return path.Sum(enriched.cost) / d;
}

std::string EnrichedGraphToTsv(const EnrichedGraph& enriched) {
  std::string out = "# src\tdst\td_m\tc\tn_covering_pairs\n";
  const auto& g = *enriched.graph;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    out += std::to_string(g.vertex(edge.u).id) + '\t' + std::to_string(g.vertex(edge.v).id) + '\t' +
           FormatDouble(enriched.length[e]) + '\t' + FormatDouble(enriched.cost[e]) + '\t' +
           std::to_string(enriched.covering_pairs[e]) + '\n';
  }
  return out;
}

std::string PoiVertexMapToTsv(const PoiVertexMap& mapping, const RoadGraph& graph) {
  std::string out = "# poi_id\tvertex_id\n";
  for (const auto& [poi, v] : mapping) out += std::to_string(poi) + '\t' + std::to_string(graph.vertex(v).id) + '\n';
  return out;
}

}  // namespace kepath
