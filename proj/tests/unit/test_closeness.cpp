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
#include <numbers>
#include <random>
#include <set>

#include "closeness/closeness.hpp"
#include "common/error.hpp"

using namespace kepath;

namespace {

constexpr std::size_t kLexicon = 6;

// One Gaussian in raw feature units: identity standardization.
RelationModel Model(std::size_t k, double md, double mo, double sd, double so) {
  RelationModel m;
  m.relation_index = k;
  m.relation = "r" + std::to_string(k);
  m.n_samples = 10;
  m.mixture.components.push_back({1.0, {md, mo}, {sd * sd, 0.0, so * so}});
  return m;
}

ModelBundle Bundle() {
  ModelBundle b;
  b.models.push_back(Model(0, 80, 90, 40, 60));
  b.models.push_back(Model(1, 250, 180, 100, 80));
  b.models.push_back(Model(2, 600, 200, 250, 100));
  return b;
}

double Normal2(double x, double y, double mx, double my, double sx, double sy) {
  const double zx = (x - mx) / sx;
  const double zy = (y - my) / sy;
  return std::exp(-0.5 * (zx * zx + zy * zy)) / (2.0 * std::numbers::pi * sx * sy);
}

// Brute-force posterior: direct ratio of prior-weighted densities.
std::map<std::size_t, double> OraclePosteriors(const PairObservation& p) {
  const double params[3][4] = {{80, 90, 40, 60}, {250, 180, 100, 80}, {600, 200, 250, 100}};
  std::map<std::size_t, double> num;
  double den = 0.0;
  for (std::size_t k : p.relations) {
    if (k > 2 || num.count(k)) continue;
    double count = 0;
    for (std::size_t r : p.relations) count += (r == k);
    const double prior = count / static_cast<double>(p.relations.size());
    const double v = prior * Normal2(p.features.distance, p.features.orientation, params[k][0], params[k][1],
                                     params[k][2], params[k][3]);
    num[k] = v;
    den += v;
  }
  for (auto& [k, v] : num) v /= den;
  return num;
}

PairObservation Pair(PoiId i, PoiId j, std::vector<std::size_t> rel, double d, double o) {
  PairObservation p;
  p.poi_i = i;
  p.poi_j = j;
  std::sort(rel.begin(), rel.end());
  p.relations = rel;
  p.features = {d, o};
  return p;
}

}  // namespace

TEST_CASE("relation prior is the multiset frequency") {
  const auto p = Pair(0, 1, {2, 2, 4}, 100, 0);
  CHECK(RelationPrior(p, 2) == doctest::Approx(2.0 / 3.0));
  CHECK(RelationPrior(p, 4) == doctest::Approx(1.0 / 3.0));
  CHECK(RelationPrior(p, 0) == 0.0);
  CHECK(p.DistinctRelations() == std::vector<std::size_t>{2, 4});
}

TEST_CASE("pair aggregation merges both orientations") {
  PoiTable pois;
  pois[3] = Poi{3, "A", {0, 0}};
  pois[7] = Poi{7, "B", {0, 100}};
  pois[9] = Poi{9, "C", {0, 100}};
  std::vector<RelationTriplet> t(4);
  t[0].poi_a = 7, t[0].poi_b = 3, t[0].relation_index = 2;
  t[1].poi_a = 3, t[1].poi_b = 7, t[1].relation_index = 0;
  t[2].poi_a = 3, t[2].poi_b = 7, t[2].relation_index = 2;
  t[3].poi_a = 7, t[3].poi_b = 9, t[3].relation_index = 1;  // coincident
  const auto pairs = AggregatePairs(t, pois, DistanceMode::kPlanar);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].poi_i == 3);
  CHECK(pairs[0].poi_j == 7);
  CHECK(pairs[0].relations == std::vector<std::size_t>{0, 2, 2});
  CHECK(pairs[0].features.distance == 100.0);
  CHECK(pairs[0].features.orientation == doctest::Approx(90.0));
}

TEST_CASE("posteriors agree with a direct computation") {
  const auto models = Bundle();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(1, 900), o(0, 360);
  for (int n = 0; n < 300; ++n) {
    std::vector<std::size_t> rel;
    const std::size_t m = 1 + rng() % 4;
    for (std::size_t i = 0; i < m; ++i) rel.push_back(rng() % 4);  // 3 has no model
    const auto p = Pair(0, 1, rel, d(rng), o(rng));
    const auto got = Posteriors(p, models);
    const auto want = OraclePosteriors(p);
    REQUIRE(got.size() == want.size());
    double s = 0.0;
    for (const auto& [k, v] : want) {
      CHECK(got.at(k) == doctest::Approx(v).epsilon(1e-10));
      CHECK(Posterior(p, k, models) == got.at(k));
      s += got.at(k);
    }
    if (!got.empty()) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Posterior(p, 5, models) == 0.0);
  }
}

TEST_CASE("a single observed relation has posterior one") {
  const auto models = Bundle();
  CHECK(Posterior(Pair(0, 1, {1, 1}, 10000, 5), 1, models) == 1.0);
  CHECK(Posteriors(Pair(0, 1, {3, 5}, 100, 5), models).empty());
}

TEST_CASE("closeness score matches the brute-force formula") {
  const auto models = Bundle();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(1, 900), o(0, 360);
  std::vector<PairObservation> pairs;
  for (PoiId n = 0; n < 80; ++n) {
    std::vector<std::size_t> rel;
    const std::size_t m = 1 + rng() % 3;
    for (std::size_t i = 0; i < m; ++i) rel.push_back(rng() % 3);
    pairs.push_back(Pair(2 * n, 2 * n + 1, rel, d(rng), o(rng)));
  }
  std::map<std::size_t, double> maxima;
  for (const auto& p : pairs) {
    for (const auto& [k, v] : OraclePosteriors(p)) maxima[k] = std::max(maxima[k], v);
  }
  const auto got_max = GlobalMaxPosteriors(pairs, models);
  for (const auto& [k, v] : maxima) CHECK(got_max.at(k) == doctest::Approx(v).epsilon(1e-10));

  PoiTable pois;
  for (const auto& p : pairs) {
    pois[p.poi_i] = Poi{p.poi_i, "a", {0, 0}};
    pois[p.poi_j] = Poi{p.poi_j, "b", {0, p.features.distance}};
  }
  const auto graph = BuildRelationshipGraph(pairs, models, pois, kLexicon, DistanceMode::kPlanar, 3);
  REQUIRE(graph.edges.size() == pairs.size());
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    double want = 0.0;
    for (const auto& [k, v] : OraclePosteriors(pairs[n])) want += v / maxima.at(k);
    want /= static_cast<double>(kLexicon);
    const double w = ClosenessScore(pairs[n], models, got_max, kLexicon);
    CHECK(w == doctest::Approx(want).epsilon(1e-10));
    CHECK(graph.edges[n].weight == doctest::Approx(w).epsilon(1e-15));
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    CHECK(graph.edges[n].distance_m == doctest::Approx(pairs[n].features.distance));
  }
}

TEST_CASE("score is invariant to adding a constant to a relation's log-likelihood") {
  // Scaling one model's density by a constant leaves the score unchanged when
  // that relation is the only one observed: posterior stays 1, maximum stays 1.
  auto models = Bundle();
  const auto p = Pair(0, 1, {2}, 300, 100);
  std::map<std::size_t, double> maxima{{2, 1.0}};
  const double before = ClosenessScore(p, models, maxima, kLexicon);
  models.models[2].standardization.scale = {3.0, 3.0};
  CHECK(ClosenessScore(p, models, maxima, kLexicon) == before);
  CHECK(before == doctest::Approx(1.0 / kLexicon));
}

TEST_CASE("unmodeled-only pairs score zero; bad inputs throw") {
  const auto models = Bundle();
  const auto p = Pair(0, 1, {4}, 10, 10);
  CHECK(ClosenessScore(p, models, {}, kLexicon) == 0.0);
  CHECK_THROWS_AS(ClosenessScore(Pair(0, 1, {0}, 10, 10), models, {}, kLexicon), Error);
  CHECK_THROWS_AS(ClosenessScore(p, models, {}, 0), Error);
}

TEST_CASE("H* JSONL round-trip") {
  const auto lex = RelationLexicon::Default();
  const auto models = Bundle();
  std::vector<PairObservation> pairs{Pair(1, 2, {0, 2}, 100, 90), Pair(1, 5, {1}, 300, 270)};
  PoiTable pois;
  pois[1] = Poi{1, "A", {0, 0}};
  pois[2] = Poi{2, "B", {0, 100}};
  pois[5] = Poi{5, "C", {0, -300}};
  const auto g = BuildRelationshipGraph(pairs, models, pois, lex.size(), DistanceMode::kPlanar);
  const auto text = RelationshipGraphToJsonl(g, lex);
  const auto back = RelationshipGraphFromJsonl(text, lex, pois);
  REQUIRE(back.edges.size() == 2);
  for (std::size_t n = 0; n < 2; ++n) {
    CHECK(back.edges[n].weight == g.edges[n].weight);
    CHECK(back.edges[n].distance_m == g.edges[n].distance_m);
    CHECK(back.edges[n].relations == g.edges[n].relations);
  }
  CHECK(back.pois.size() == 3);
  CHECK(RelationshipGraphToJsonl(back, lex) == text);
  PoiTable missing{{1, pois[1]}};
  CHECK_THROWS_AS(RelationshipGraphFromJsonl(text, lex, missing), Error);
}

TEST_CASE("small closed-form cases") {
  ModelBundle twins;
  twins.models.push_back(Model(0, 100, 90, 50, 50));
  twins.models.push_back(Model(1, 100, 90, 50, 50));
  const auto p = Pair(0, 1, {0, 1}, 120, 80);
  const auto post = Posteriors(p, twins);
  CHECK(post.at(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(post.at(1) == doctest::Approx(0.5).epsilon(1e-15));

  ModelBundle one;
  one.models.push_back(Model(0, 100, 90, 50, 50));
  const auto single = Pair(0, 1, {0}, 120, 80);
  const auto maxima = GlobalMaxPosteriors({single}, one);
  CHECK(maxima.at(0) == 1.0);
  CHECK(ClosenessScore(single, one, maxima, 1) == 1.0);
  CHECK(ClosenessScore(single, one, maxima, 4) == 0.25);
  CHECK(GlobalMaxPosteriors({}, one).empty());
}

TEST_CASE("posteriors survive far tails") {
  // Unit Gaussians at (0, 0) and (0.001, 0), evaluated 1000 units out: both
  // densities underflow, their ratio is exp(0.9999995).
  ModelBundle m;
  m.models.push_back(Model(0, 0.0, 0.0, 1.0, 1.0));
  m.models.push_back(Model(1, 0.001, 0.0, 1.0, 1.0));
  const auto p = Pair(0, 1, {0, 1}, 1000.0, 0.0);
  CHECK(m.models[0].Density(p.features) == 0.0);
  const auto post = Posteriors(p, m);
  CHECK(post.at(0) == doctest::Approx(1.0 / (1.0 + std::exp(0.9999995))).epsilon(1e-9));
  CHECK(post.at(0) + post.at(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("graph shape and score bound") {
  // Four PoIs, six observed pairs: the complete graph.
  PoiTable pois;
  pois[0] = Poi{0, "a", {0, 0}};
  pois[1] = Poi{1, "b", {0, 300}};
  pois[2] = Poi{2, "c", {300, 0}};
  pois[3] = Poi{3, "d", {300, 300}};
  std::vector<RelationTriplet> t;
  std::size_t k = 0;
  for (PoiId a = 0; a < 4; ++a) {
    for (PoiId b = a + 1; b < 4; ++b) {
      RelationTriplet x;
      x.poi_a = (k % 2) ? a : b;  // both orientations occur
      x.poi_b = (k % 2) ? b : a;
      x.relation_index = k % 3;
      t.push_back(x);
      x.relation_index = (k + 1) % 3;
      t.push_back(x);
      ++k;
    }
  }
  const auto models = Bundle();
  const auto pairs = AggregatePairs(t, pois, DistanceMode::kPlanar);
  REQUIRE(pairs.size() == 6);
  const auto g = BuildRelationshipGraph(pairs, models, pois, kLexicon, DistanceMode::kPlanar);
  CHECK(g.edges.size() == 6);
  CHECK(g.pois.size() == 4);
  for (const auto& e : g.edges) {
    CHECK(e.poi_i < e.poi_j);
    const double distinct = static_cast<double>(std::set<std::size_t>(e.relations.begin(), e.relations.end()).size());
    CHECK(e.weight <= distinct / kLexicon + 1e-12);
  }
  CHECK(BuildRelationshipGraph({}, models, pois, kLexicon, DistanceMode::kPlanar).edges.empty());
}
