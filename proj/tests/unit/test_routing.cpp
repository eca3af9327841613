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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "common/error.hpp"
#include "routing/routing.hpp"

using namespace kepath;

namespace {

RelationshipGraph ClosenessGraph(const PoiTable& pois, std::vector<std::tuple<PoiId, PoiId, double>> edges) {
  RelationshipGraph g;
  g.pois = pois;
  for (auto [i, j, w] : edges) {
    RelationshipEdge e;
    e.poi_i = i;
    e.poi_j = j;
    e.weight = w;
    e.distance_m = Distance(DistanceMode::kPlanar, pois.at(i).coord, pois.at(j).coord);
    e.relations = {0};
    g.edges.push_back(e);
  }
  return g;
}

// rows x cols lattice with unit spacing; id = r * cols + c, coordinate (r, c).
RoadGraph Grid(int rows, int cols, double spacing = 1.0) {
  std::vector<Vertex> v;
  std::vector<EdgeSpec> e;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const VertexId id = r * cols + c;
      v.push_back({id, {r * spacing, c * spacing}});
      if (c + 1 < cols) e.push_back({id, id + 1, {}});
      if (r + 1 < rows) e.push_back({id, id + cols, {}});
    }
  }
  return RoadGraph::Build(v, e, DistanceMode::kPlanar);
}

void CheckWalk(const RouteResult& r, const RoadGraph& g, std::size_t s, std::size_t t) {
  REQUIRE(!r.path.vertices.empty());
  CHECK(r.path.vertices.front() == s);
  CHECK(r.path.vertices.back() == t);
  REQUIRE(r.path.vertices.size() == r.path.edges.size() + 1);
  for (std::size_t i = 0; i < r.path.edges.size(); ++i) {
    const auto& e = g.edge(r.path.edges[i]);
    const auto a = r.path.vertices[i];
    const auto b = r.path.vertices[i + 1];
    CHECK(((e.u == a && e.v == b) || (e.u == b && e.v == a)));
  }
}

}  // namespace

TEST_CASE("algorithm names") {
  for (auto a : {Algorithm::kDijG, Algorithm::kDijGStar, Algorithm::kDijHStar}) {
    CHECK(ParseAlgorithm(AlgorithmName(a)) == a);
  }
  CHECK_THROWS_AS(ParseAlgorithm("astar"), Error);
}

TEST_CASE("triangle: the enriched long edge wins under c") {
  // A-B = 1, B-C = 1, A-C = 3.
  const auto g = RoadGraph::Parse("0\t0\t0\n1\t0\t1\n2\t1\t1\n", "0\t1\t1\n1\t2\t1\n0\t2\t3\n", DistanceMode::kPlanar);
  EdgeCoverage cov;
  cov.weights = {{}, {}, {0.9}};
  const auto en = ApplyEnrichment(g, cov, 1.0);
  const auto plain = DijG(en, 0, 2);
  CHECK(plain.path.vertices == std::vector<std::size_t>{0, 1, 2});
  CHECK(plain.length == 2.0);
  CHECK(plain.er == 1.0);
  const auto rich = DijGStar(en, 0, 2);
  CHECK(rich.path.vertices == std::vector<std::size_t>{0, 2});
  CHECK(rich.length == 3.0);
  CHECK(rich.cost == doctest::Approx(0.3));
  CHECK(rich.er == doctest::Approx(0.1));
  // Under alpha = 0 the detour is not worth it.
  CHECK(DijGStar(ApplyEnrichment(g, cov, 0.0), 0, 2).length == 2.0);
}

TEST_CASE("ellipse filter") {
  PoiTable pois;
  pois[1] = Poi{1, "in", {2, 2}};      // 2.83 + 2.83 = 5.66 <= 6.4
  pois[2] = Poi{2, "out", {0, 3}};     // 3 + 5 = 8 > 6.4
  pois[3] = Poi{3, "edge", {2, 0}};    // on the segment
  pois[4] = Poi{4, "rim", {-1.2, 0}};  // 1.2 + 5.2 = 6.4, kept (inclusive)
  const auto h = ClosenessGraph(pois, {{1, 2, 0.5}, {1, 3, 0.5}, {3, 4, 0.5}});
  const auto f = EllipseFilter(h, {0, 0}, {4, 0}, 1.6, DistanceMode::kPlanar);
  CHECK(f.pois.count(1) == 1);
  CHECK(f.pois.count(2) == 0);
  CHECK(f.pois.count(3) == 1);
  CHECK(f.pois.count(4) == 1);
  CHECK(f.edges.size() == 2);
  for (const auto& e : f.edges) CHECK((e.poi_i != 2 && e.poi_j != 2));
  CHECK_THROWS_AS(EllipseFilter(h, {0, 0}, {4, 0}, 1.0, DistanceMode::kPlanar), Error);
  // Growing beta never removes PoIs.
  std::size_t prev = 0;
  for (double beta : {1.01, 1.2, 1.6, 2.0, 3.0}) {
    const auto n = EllipseFilter(h, {0, 0}, {4, 0}, beta, DistanceMode::kPlanar).pois.size();
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("Dij-H* through a single PoI") {
  const auto g = Grid(5, 5);
  PoiTable pois;
  pois[7] = Poi{7, "P", {1.1, 2.9}};  // nearest vertex (1, 3) = 8
  const auto h = ClosenessGraph(pois, {});
  const auto mapping = MapPoisToVertices(pois, g);
  CHECK(mapping.at(7) == 8);
  EdgeCoverage cov;
  cov.weights.assign(g.edge_count(), {});
  const auto en = ApplyEnrichment(g, cov, 1.0);
  const auto r = DijHStar(en, h, mapping, 0, 24);
  CHECK(!r.fallback);
  CHECK(r.poi_sequence == std::vector<PoiId>{7});
  CheckWalk(r, g, 0, 24);
  CHECK(std::find(r.path.vertices.begin(), r.path.vertices.end(), 8) != r.path.vertices.end());
  CHECK(r.length == doctest::Approx(8.0));  // (0,0)->(1,3)->(4,4) on the lattice
}

TEST_CASE("Dij-H* hops along a PoI corridor") {
  const auto g = Grid(10, 10);
  PoiTable pois;
  pois[1] = Poi{1, "a", {2, 2}};
  pois[2] = Poi{2, "b", {4, 5}};
  pois[3] = Poi{3, "c", {7, 7}};
  pois[4] = Poi{4, "x", {9, 0}};  // outside the ellipse
  const auto h = ClosenessGraph(pois, {{1, 2, 0.6}, {2, 3, 0.6}, {1, 4, 0.9}, {3, 4, 0.9}});
  const auto mapping = MapPoisToVertices(pois, g);
  const auto en = Enrich(g, h, mapping, 1.0);
  const std::size_t s = 0;
  const std::size_t t = 99;
  const auto r = DijHStar(en, h, mapping, s, t);
  CHECK(!r.fallback);
  CHECK(r.poi_sequence == std::vector<PoiId>{1, 2, 3});
  CheckWalk(r, g, s, t);
  for (PoiId p : {1, 2, 3}) {
    CHECK(std::find(r.path.vertices.begin(), r.path.vertices.end(), mapping.at(p)) != r.path.vertices.end());
  }
  // Segments are shortest under c, so the route cost is the segment sum.
  double cost = 0.0;
  std::vector<std::size_t> stops{s, mapping.at(1), mapping.at(2), mapping.at(3), t};
  for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
    cost += ShortestPath(g.adjacency(), en.cost, stops[k], stops[k + 1]).Sum(en.cost);
  }
  CHECK(r.cost == doctest::Approx(cost).epsilon(1e-12));
  CHECK(r.length >= DijG(en, s, t).length - 1e-9);
}

TEST_CASE("Dij-H* fallbacks") {
  const auto g = Grid(6, 6);
  EdgeCoverage cov;
  cov.weights.assign(g.edge_count(), {});
  const auto en = ApplyEnrichment(g, cov, 1.0);
  SUBCASE("no PoI in the ellipse") {
    PoiTable pois;
    pois[1] = Poi{1, "far", {5, 0}};
    const auto r = DijHStar(en, ClosenessGraph(pois, {}), MapPoisToVertices(pois, g), 0, 5);
    CHECK(r.fallback);
    CHECK(r.algorithm == Algorithm::kDijHStar);
    CHECK(r.path.vertices == DijGStar(en, 0, 5).path.vertices);
    CHECK(!r.note.empty());
  }
  SUBCASE("entry and exit disconnected") {
    PoiTable pois;
    pois[1] = Poi{1, "near s", {0, 1}};
    pois[2] = Poi{2, "near t", {5, 4}};
    const auto r = DijHStar(en, ClosenessGraph(pois, {}), MapPoisToVertices(pois, g), 0, 35);
    CHECK(r.fallback);
    CHECK(r.poi_sequence.empty());
  }
  SUBCASE("source equals target") {
    const auto r = DijHStar(en, ClosenessGraph({}, {}), {}, 3, 3);
    CHECK(r.fallback);
    CHECK(r.length == 0.0);
    CHECK(r.er == 1.0);
  }
}

TEST_CASE("optimality invariants on random enrichment") {
  const auto g = Grid(12, 12, 50.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 550), w(0, 1);
  PoiTable pois;
  for (PoiId p = 0; p < 20; ++p) pois[p] = Poi{p, "p", {u(rng), u(rng)}};
  std::vector<std::tuple<PoiId, PoiId, double>> pairs;
  for (PoiId a = 0; a < 20; ++a) {
    for (PoiId b = a + 1; b < 20; ++b) {
      if (rng() % 5 == 0) pairs.emplace_back(a, b, w(rng));
    }
  }
  const auto h = ClosenessGraph(pois, pairs);
  const auto mapping = MapPoisToVertices(pois, g);
  const auto cov = ComputeCoverage(g, h, mapping);
  for (double alpha : {0.0, 0.5, 1.0}) {
    const auto en = ApplyEnrichment(g, cov, alpha);
    for (int q = 0; q < 15; ++q) {
      const std::size_t s = rng() % g.vertex_count();
      std::size_t t = rng() % g.vertex_count();
      if (s == t) t = (t + 1) % g.vertex_count();
      const auto a = DijG(en, s, t);
      const auto b = DijGStar(en, s, t);
      const auto c = DijHStar(en, h, mapping, s, t);
      CheckWalk(a, g, s, t);
      CheckWalk(b, g, s, t);
      CheckWalk(c, g, s, t);
      CHECK(a.length <= b.length + 1e-9);
      CHECK(a.length <= c.length + 1e-9);
      CHECK(b.cost <= a.cost + 1e-9);
      CHECK(b.cost <= c.cost + 1e-9);
      CHECK(b.er <= a.er + 1e-12);
      for (const auto* r : {&a, &b, &c}) {
        CHECK(r->er > 0.0);
        CHECK(r->er <= 1.0 + 1e-12);
      }
      if (alpha == 0.0) CHECK(b.length == doctest::Approx(a.length));
    }
  }
}

TEST_CASE("route serialization") {
  const auto g = Grid(3, 3);
  EdgeCoverage cov;
  cov.weights.assign(g.edge_count(), {});
  const auto en = ApplyEnrichment(g, cov, 1.0);
  const auto r = DijG(en, 0, 8);
  const auto j = nlohmann::json::parse(RouteToJson(r, g, 0, 8));
  CHECK(j["algorithm"] == "dij-g");
  CHECK(j["vertices"].size() == 5);
  CHECK(j["d_m"].get<double>() == 4.0);
  const auto geo = nlohmann::json::parse(RoutesToGeoJson({r}, g));
  CHECK(geo["features"][0]["geometry"]["coordinates"].size() == 5);
}
