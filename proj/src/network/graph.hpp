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
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "geo/geo.hpp"

namespace kepath {

using VertexId = std::int64_t;

struct Vertex {
  VertexId id = 0;
  Coord coord;
};

struct Arc {
  std::size_t to = 0;
  std::size_t edge = 0;
};

// Outgoing arcs per vertex; an undirected edge appears once at each endpoint.
struct Adjacency {
  std::vector<std::vector<Arc>> arcs;

  std::size_t size() const { return arcs.size(); }
};

struct RoadEdge {
  std::size_t u = 0;  // dense vertex indices
  std::size_t v = 0;
  double length = 0.0;
};

struct EdgeSpec {
  VertexId src = 0;
  VertexId dst = 0;
  std::optional<double> length;
};

// Road network G = (V, E, d). Vertices are stored in ascending id order, so a
// dense index comparison is an id comparison.
class RoadGraph {
 public:
  RoadGraph() = default;

  static RoadGraph Build(std::vector<Vertex> vertices, const std::vector<EdgeSpec>& edges, DistanceMode mode,
                         bool directed = false);
  // Nodes TSV: id, lat, lon. Edges TSV: src, dst[, length_m]. '#' lines skipped.
  static RoadGraph Parse(std::string_view nodes_tsv, std::string_view edges_tsv, DistanceMode mode,
                         bool directed = false);
  static RoadGraph Load(const std::filesystem::path& nodes, const std::filesystem::path& edges,
                        DistanceMode mode, bool directed = false);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Vertex& vertex(std::size_t index) const { return vertices_.at(index); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const RoadEdge& edge(std::size_t index) const { return edges_.at(index); }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  const Adjacency& adjacency() const { return adjacency_; }
  std::optional<std::size_t> IndexOf(VertexId id) const;
  std::size_t RequireIndex(VertexId id) const;

  std::vector<double> Lengths() const;
  DistanceMode mode() const { return mode_; }
  bool directed() const { return directed_; }

 private:
  std::vector<Vertex> vertices_;
  std::vector<RoadEdge> edges_;
  Adjacency adjacency_;
  DistanceMode mode_ = DistanceMode::kGeodesic;
  bool directed_ = false;
};

struct Path {
  std::vector<std::size_t> vertices;  // dense indices, source first
  std::vector<std::size_t> edges;     // edges[i] joins vertices[i] and vertices[i + 1]

  bool empty() const { return edges.empty(); }
  double Sum(std::span<const double> edge_values) const;
};

// Minimum-cost path. Ties on tentative cost go to the predecessor with the
// smaller vertex index (then the smaller edge index), so results are
// reproducible. Costs must be positive. Throws ErrorCode::kNoPath.
Path ShortestPath(const Adjacency& graph, std::span<const double> edge_costs, std::size_t source,
                  std::size_t target);

}  // namespace kepath
