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

#include "network/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>
#include <tuple>

#include "common/error.hpp"
#include "common/io.hpp"

namespace kepath {

RoadGraph RoadGraph::Build(std::vector<Vertex> vertices, const std::vector<EdgeSpec>& edges, DistanceMode mode,
                           bool directed) {
  RoadGraph g;
  g.mode_ = mode;
  g.directed_ = directed;
  std::sort(vertices.begin(), vertices.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i].id == vertices[i - 1].id) {
      throw Error(ErrorCode::kParse, "duplicate vertex id " + std::to_string(vertices[i].id));
    }
  }
  g.vertices_ = std::move(vertices);
  g.adjacency_.arcs.assign(g.vertices_.size(), {});
  g.edges_.reserve(edges.size());
  for (const auto& spec : edges) {
    const auto u = g.IndexOf(spec.src);
    const auto v = g.IndexOf(spec.dst);
    if (!u || !v) {
      throw Error(ErrorCode::kDanglingEdge, "edge (" + std::to_string(spec.src) + ", " + std::to_string(spec.dst) +
                                                ") references an unknown vertex");
    }
    if (*u == *v) {
      throw Error(ErrorCode::kInvalidArgument, "self-loop at vertex " + std::to_string(spec.src));
    }
    const double length =
        spec.length ? *spec.length : Distance(mode, g.vertices_[*u].coord, g.vertices_[*v].coord);
    if (!(length > 0.0)) {
      throw Error(ErrorCode::kNonpositiveLength, "edge (" + std::to_string(spec.src) + ", " +
                                                     std::to_string(spec.dst) + ") has nonpositive length " +
                                                     FormatDouble(length));
    }
    const std::size_t e = g.edges_.size();
    g.edges_.push_back({*u, *v, length});
    g.adjacency_.arcs[*u].push_back({*v, e});
    if (!directed) g.adjacency_.arcs[*v].push_back({*u, e});
  }
  return g;
}

RoadGraph RoadGraph::Parse(std::string_view nodes_tsv, std::string_view edges_tsv, DistanceMode mode,
                           bool directed) {
  std::vector<Vertex> vertices;
  const auto node_lines = SplitLines(nodes_tsv);
  for (std::size_t n = 0; n < node_lines.size(); ++n) {
    if (IsSkippableLine(node_lines[n])) continue;
    const auto f = SplitTabs(node_lines[n]);
    if (f.size() < 3) throw Error(ErrorCode::kParse, "nodes line " + std::to_string(n + 1) + ": expected id, lat, lon");
    if (vertices.empty() && Trim(f[0]) == "id") continue;
    Vertex v;
    v.id = ParseInt(f[0], "vertex id", n + 1);
    v.coord = {ParseDouble(f[1], "lat", n + 1), ParseDouble(f[2], "lon", n + 1)};
    if (mode == DistanceMode::kGeodesic && !InLatLonBounds(v.coord)) {
      throw Error(ErrorCode::kCoordinateOutOfBounds, "nodes line " + std::to_string(n + 1) + ": coordinate out of bounds");
    }
    vertices.push_back(v);
  }
  std::vector<EdgeSpec> edges;
  const auto edge_lines = SplitLines(edges_tsv);
  for (std::size_t n = 0; n < edge_lines.size(); ++n) {
    if (IsSkippableLine(edge_lines[n])) continue;
    const auto f = SplitTabs(edge_lines[n]);
    if (f.size() < 2) throw Error(ErrorCode::kParse, "edges line " + std::to_string(n + 1) + ": expected src, dst");
    if (edges.empty() && Trim(f[0]) == "src") continue;
    EdgeSpec e;
    e.src = ParseInt(f[0], "src", n + 1);
    e.dst = ParseInt(f[1], "dst", n + 1);
    if (f.size() > 2 && !Trim(f[2]).empty()) e.length = ParseDouble(f[2], "length_m", n + 1);
    edges.push_back(e);
  }
  return Build(std::move(vertices), edges, mode, directed);
}

RoadGraph RoadGraph::Load(const std::filesystem::path& nodes, const std::filesystem::path& edges,
                          DistanceMode mode, bool directed) {
  return Parse(ReadFile(nodes), ReadFile(edges), mode, directed);
}

std::optional<std::size_t> RoadGraph::IndexOf(VertexId id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const Vertex& v, VertexId x) { return v.id < x; });
  if (it == vertices_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t RoadGraph::RequireIndex(VertexId id) const {
  auto index = IndexOf(id);
  if (!index) throw Error(ErrorCode::kInvalidArgument, "unknown vertex id " + std::to_string(id));
  return *index;
}

std::vector<double> RoadGraph::Lengths() const {
  std::vector<double> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(e.length);
  return out;
}

double Path::Sum(std::span<const double> edge_values) const {
  double total = 0.0;
  for (auto e : edges) total += edge_values[e];
  return total;
}

Path ShortestPath(const Adjacency& graph, std::span<const double> edge_costs, std::size_t source,
                  std::size_t target) {
  const std::size_t n = graph.size();
  if (source >= n || target >= n) throw Error(ErrorCode::kInvalidArgument, "vertex index out of range");
  Path path;
  if (source == target) {
    path.vertices.push_back(source);
    return path;
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<double> dist(n, kInf);
  std::vector<std::size_t> pred(n, kNone);
  std::vector<std::size_t> pred_edge(n, kNone);
  std::vector<bool> settled(n, false);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d > dist[u]) continue;
    settled[u] = true;
    if (u == target) break;
    for (const auto& arc : graph.arcs[u]) {
      if (settled[arc.to]) continue;
      const double nd = d + edge_costs[arc.edge];
      const std::size_t v = arc.to;
      if (nd < dist[v]) {
        dist[v] = nd;
        pred[v] = u;
        pred_edge[v] = arc.edge;
        heap.push({nd, v});
      } else if (nd == dist[v] && std::tie(u, arc.edge) < std::tie(pred[v], pred_edge[v])) {
        pred[v] = u;
        pred_edge[v] = arc.edge;
      }
    }
  }
  if (!settled[target]) {
    throw Error(ErrorCode::kNoPath, "target unreachable from source");
  }
  for (std::size_t v = target; v != source; v = pred[v]) {
    path.vertices.push_back(v);
    path.edges.push_back(pred_edge[v]);
  }
  path.vertices.push_back(source);
  std::reverse(path.vertices.begin(), path.vertices.end());
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

}  // namespace kepath
