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

#include "routing/routing.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

#include "common/error.hpp"

namespace kepath {
namespace {

RouteResult Finish(Algorithm alg, Path path, const EnrichedGraph& enriched) {
  RouteResult r;
  r.algorithm = alg;
  r.path = std::move(path);
  r.length = r.path.Sum(enriched.length);
  r.cost = r.path.Sum(enriched.cost);
  r.er = r.length > 0.0 ? EnrichmentRatio(r.path, enriched) : 1.0;
  return r;
}

void Append(Path& into, const Path& segment) {
  if (segment.vertices.empty()) return;
  std::size_t skip = 0;
  if (!into.vertices.empty() && into.vertices.back() == segment.vertices.front()) skip = 1;
  into.vertices.insert(into.vertices.end(), segment.vertices.begin() + static_cast<std::ptrdiff_t>(skip),
                       segment.vertices.end());
  into.edges.insert(into.edges.end(), segment.edges.begin(), segment.edges.end());
}

RouteResult Fallback(const EnrichedGraph& enriched, std::size_t source, std::size_t target, std::string note) {
  RouteResult r = DijGStar(enriched, source, target);
  r.algorithm = Algorithm::kDijHStar;
  r.fallback = true;
  r.note = std::move(note);
  return r;
}

PoiId NearestPoi(const RelationshipGraph& h, const Coord& where, DistanceMode mode) {
  PoiId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& [id, poi] : h.pois) {  // ascending id; strict < keeps the smaller id on ties
    const double d = Distance(mode, where, poi.coord);
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  return best;
}

}  // namespace

const char* AlgorithmName(Algorithm alg) {
  switch (alg) {
    case Algorithm::kDijG: return "dij-g";
    case Algorithm::kDijGStar: return "dij-g-star";
    case Algorithm::kDijHStar: return "dij-h-star";
  }
  return "?";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "dij-g") return Algorithm::kDijG;
  if (name == "dij-g-star") return Algorithm::kDijGStar;
  if (name == "dij-h-star") return Algorithm::kDijHStar;
  throw Error(ErrorCode::kConfig, "unknown algorithm '" + std::string(name) + "'");
}

RouteResult DijG(const EnrichedGraph& enriched, std::size_t source, std::size_t target) {
  return Finish(Algorithm::kDijG, ShortestPath(enriched.graph->adjacency(), enriched.length, source, target), enriched);
}

RouteResult DijGStar(const EnrichedGraph& enriched, std::size_t source, std::size_t target) {
  return Finish(Algorithm::kDijGStar, ShortestPath(enriched.graph->adjacency(), enriched.cost, source, target),
                enriched);
}

RelationshipGraph EllipseFilter(const RelationshipGraph& closeness_graph, const Coord& source, const Coord& target,
                                double beta, DistanceMode mode) {
  if (!(beta > 1.0)) throw Error(ErrorCode::kConfig, "detour factor beta must exceed 1");
  const double bound = beta * Distance(mode, source, target);
  RelationshipGraph h;
  for (const auto& [id, poi] : closeness_graph.pois) {
    if (Distance(mode, source, poi.coord) + Distance(mode, poi.coord, target) <= bound) h.pois.emplace(id, poi);
  }
  for (const auto& e : closeness_graph.edges) {
    if (h.pois.count(e.poi_i) > 0 && h.pois.count(e.poi_j) > 0) h.edges.push_back(e);
  }
  return h;
}

RouteResult DijHStar(const EnrichedGraph& enriched, const RelationshipGraph& closeness_graph, const PoiVertexMap& mapping,
                     std::size_t source, std::size_t target, double beta) {
  const RoadGraph& g = *enriched.graph;
  if (source == target) return Fallback(enriched, source, target, "source equals target");
  const Coord s = g.vertex(source).coord;
  const Coord t = g.vertex(target).coord;
  if (s == t) return Fallback(enriched, source, target, "source and target coincide");

  const RelationshipGraph h = EllipseFilter(closeness_graph, s, t, beta, g.mode());
  if (h.pois.empty()) return Fallback(enriched, source, target, "no PoI inside the query ellipse");

  const PoiId entry = NearestPoi(h, s, g.mode());
  const PoiId exit = NearestPoi(h, t, g.mode());

  // Dense index over the retained PoIs in id order.
  std::vector<PoiId> ids;
  std::map<PoiId, std::size_t> index;
  for (const auto& [id, poi] : h.pois) {
    index[id] = ids.size();
    ids.push_back(id);
  }
  Adjacency hop;
  hop.arcs.assign(ids.size(), {});
  std::vector<double> hop_cost;
  for (const auto& e : h.edges) {
    const std::size_t a = index.at(e.poi_i);
    const std::size_t b = index.at(e.poi_j);
    hop.arcs[a].push_back({b, hop_cost.size()});
    hop.arcs[b].push_back({a, hop_cost.size()});
    hop_cost.push_back(e.distance_m);
  }
  Path hops;
  try {
    hops = ShortestPath(hop, hop_cost, index.at(entry), index.at(exit));
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kNoPath) throw;
    return Fallback(enriched, source, target, "entry and exit PoIs disconnected inside the ellipse");
  }

  std::vector<PoiId> sequence;
  std::vector<std::size_t> stops{source};
  for (auto k : hops.vertices) {
    sequence.push_back(ids[k]);
    stops.push_back(mapping.at(ids[k]));
  }
  stops.push_back(target);

  Path full;
  full.vertices.push_back(source);
  try {
    for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
      if (stops[k] == stops[k + 1]) continue;
      Append(full, ShortestPath(g.adjacency(), enriched.cost, stops[k], stops[k + 1]));
    }
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kNoPath) throw;
    return Fallback(enriched, source, target, "a PoI on the hop sequence is unreachable");
  }
  RouteResult r = Finish(Algorithm::kDijHStar, std::move(full), enriched);
  r.poi_sequence = std::move(sequence);
  return r;
}

std::string RouteToJson(const RouteResult& route, const RoadGraph& graph, std::size_t source, std::size_t target) {
  nlohmann::ordered_json j;
  j["algorithm"] = AlgorithmName(route.algorithm);
  j["source"] = graph.vertex(source).id;
  j["target"] = graph.vertex(target).id;
  auto vertices = nlohmann::ordered_json::array();
  for (auto v : route.path.vertices) vertices.push_back(graph.vertex(v).id);
  j["vertices"] = std::move(vertices);
  j["pois"] = route.poi_sequence;
  j["d_m"] = route.length;
  j["cost"] = route.cost;
  j["er"] = route.er;
  j["fallback"] = route.fallback;
  if (!route.note.empty()) j["note"] = route.note;
  return j.dump();
}

std::string RoutesToGeoJson(const std::vector<RouteResult>& routes, const RoadGraph& graph) {
  nlohmann::ordered_json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = nlohmann::ordered_json::array();
  for (const auto& r : routes) {
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"algorithm", AlgorithmName(r.algorithm)}, {"d_m", r.length}, {"er", r.er}};
    auto coords = nlohmann::ordered_json::array();
    for (auto v : r.path.vertices) coords.push_back({graph.vertex(v).coord.lon, graph.vertex(v).coord.lat});
    f["geometry"] = {{"type", "LineString"}, {"coordinates", std::move(coords)}};
    fc["features"].push_back(std::move(f));
  }
  return fc.dump(2) + "\n";
}

}  // namespace kepath
