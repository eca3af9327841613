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

#include "common/error.hpp"
#include "mixture/mixture.hpp"

using namespace kepath;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Vec2> Blobs(std::uint64_t seed, std::vector<Vec2> centers, std::size_t per, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sd);
  std::vector<Vec2> out;
  for (const auto& c : centers) {
    for (std::size_t i = 0; i < per; ++i) out.push_back({c.x + n(rng), c.y + n(rng)});
  }
  return out;
}

// Independent bivariate normal pdf written out from the textbook formula.
double Bivariate(Vec2 d, Vec2 mu, double sxx, double sxy, double syy) {
  const double det = sxx * syy - sxy * sxy;
  const double dx = d.x - mu.x;
  const double dy = d.y - mu.y;
  const double q = (syy * dx * dx - 2.0 * sxy * dx * dy + sxx * dy * dy) / det;
  return std::exp(-0.5 * q) / (2.0 * kPi * std::sqrt(det));
}

void CheckInvariants(const Mixture& m, double floor) {
  double sum = 0.0;
  for (const auto& c : m.components) {
    CHECK(c.weight > 0.0);
    sum += c.weight;
    double lo = 0.0;
    double hi = 0.0;
    c.cov.Eigenvalues(&lo, &hi);
    CHECK(lo >= floor * (1.0 - 1e-9));
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

}  // namespace

TEST_CASE("component density closed forms") {
  const GaussianComponent unit{1.0, {2.0, -1.0}, Sym2::Identity()};
  CHECK(ComponentDensity({2.0, -1.0}, unit) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
  CHECK(ComponentDensity({3.0, -1.0}, unit) == doctest::Approx(std::exp(-0.5) / (2.0 * kPi)).epsilon(1e-14));
  CHECK(ComponentDensity({3.0, -1.0}, unit) == doctest::Approx(0.09653).epsilon(1e-4));
  const GaussianComponent skew{1.0, {0.5, 0.25}, {2.0, 0.7, 0.9}};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 200; ++i) {
    const Vec2 d{u(rng), u(rng)};
    CHECK(ComponentDensity(d, skew) == doctest::Approx(Bivariate(d, skew.mean, 2.0, 0.7, 0.9)).epsilon(1e-12));
    // Reflection through the mean.
    const Vec2 r{2.0 * skew.mean.x - d.x, 2.0 * skew.mean.y - d.y};
    CHECK(ComponentDensity(r, skew) == doctest::Approx(ComponentDensity(d, skew)).epsilon(1e-12));
    CHECK(LogComponentDensity(d, skew) == doctest::Approx(std::log(ComponentDensity(d, skew))).epsilon(1e-12));
  }
}

TEST_CASE("mixture density") {
  const GaussianComponent a{1.0, {0, 0}, {1.0, 0.2, 0.5}};
  const GaussianComponent b{1.0, {3, 1}, {0.3, 0.0, 2.0}};
  Mixture one{{a}};
  Mixture twins{{{0.3, a.mean, a.cov}, {0.7, a.mean, a.cov}}};
  Mixture mix{{{0.4, a.mean, a.cov}, {0.6, b.mean, b.cov}}};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const Vec2 d{u(rng), u(rng)};
    CHECK(MixtureDensity(d, one) == doctest::Approx(ComponentDensity(d, a)).epsilon(1e-14));
    CHECK(MixtureDensity(d, twins) == doctest::Approx(ComponentDensity(d, a)).epsilon(1e-14));
    const double p = MixtureDensity(d, mix);
    CHECK(p > 0.0);
    CHECK(p <= std::max(ComponentDensity(d, a), ComponentDensity(d, b)) * (1 + 1e-14));
    CHECK(p == doctest::Approx(0.4 * ComponentDensity(d, a) + 0.6 * ComponentDensity(d, b)).epsilon(1e-13));
  }
  // Far tails stay finite in log space.
  CHECK(std::isfinite(LogMixtureDensity({1e4, -1e4}, mix)));
}

TEST_CASE("log-likelihood") {
  Mixture unit{{{1.0, {1, 1}, Sym2::Identity()}}};
  const std::vector<Vec2> one{{1, 1}};
  CHECK(LogLikelihood(one, unit) == doctest::Approx(std::log(1.0 / (2.0 * kPi))).epsilon(1e-14));
  CHECK(LogLikelihood(one, unit) == doctest::Approx(-1.8379).epsilon(1e-4));
  const auto data = Blobs(4, {{0, 0}, {3, 3}}, 50);
  auto doubled = data;
  doubled.insert(doubled.end(), data.begin(), data.end());
  CHECK(LogLikelihood(doubled, unit) == doctest::Approx(2.0 * LogLikelihood(data, unit)).epsilon(1e-13));
  const std::vector<Vec2> far{{1e6, 1e6}};
  CHECK(std::isfinite(LogLikelihood(far, unit)));
}

TEST_CASE("single EM step, hand-computed") {
  const double eps = 1e-6;
  const std::vector<Vec2> data{{0, 0}, {2, 0}};
  const Mixture start{{{1.0, {5, 5}, Sym2::Identity()}}};
  const auto next = EmStep(data, start, eps);
  REQUIRE(next.size() == 1);
  const auto& c = next.components[0];
  CHECK(c.weight == 1.0);
  CHECK(c.mean.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.mean.y == 0.0);
  // ML covariance [[1, 0], [0, 0]] plus the ridge, then floored.
  CHECK(c.cov.xx == doctest::Approx(1.0 + eps).epsilon(1e-15));
  CHECK(c.cov.xy == 0.0);
  CHECK(c.cov.yy == doctest::Approx(eps).epsilon(1e-12));
}

TEST_CASE("responsibilities sum to one") {
  const auto data = Blobs(5, {{0, 0}, {4, 0}, {0, 4}}, 40);
  Mixture m{{{0.2, {0, 0}, Sym2::Identity()}, {0.5, {4, 0}, {2, 0.3, 1}}, {0.3, {1, 5}, {0.5, 0, 0.5}}}};
  for (const auto& row : Responsibilities(data, m)) {
    double s = 0.0;
    for (double r : row) {
      CHECK(r >= 0.0);
      s += r;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("EM never decreases the likelihood (random data, random starts)") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-6, 6);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t k = 1 + rng() % 4;
    std::vector<Vec2> centers;
    for (std::size_t i = 0; i < k; ++i) centers.push_back({u(rng), u(rng)});
    const auto data = Blobs(100 + trial, centers, 30 + rng() % 50, 0.5 + (rng() % 10) / 5.0);
    Mixture m;
    const std::size_t start_m = 1 + rng() % 5;
    for (std::size_t i = 0; i < start_m; ++i) {
      m.components.push_back({1.0 / start_m, data[rng() % data.size()], {1.0 + i, 0.1, 1.5}});
    }
    double prev = LogLikelihood(data, m);
    for (int it = 0; it < 40; ++it) {
      m = EmStep(data, m, 1e-6);
      const double ll = LogLikelihood(data, m);
      CHECK(ll >= prev - 1e-9);
      prev = ll;
      CheckInvariants(m, 1e-6);
    }
  }
}

TEST_CASE("FitEm stops on convergence") {
  const auto data = Blobs(8, {{0, 0}}, 200);
  EmConfig cfg;
  const Mixture start{{{1.0, SampleMean(data), SampleCovariance(data, SampleMean(data))}}};
  const auto first = FitEm(data, start, cfg);
  CHECK(first.trace.size() == first.iterations + 1);
  // Starting from the converged model needs exactly one more step.
  const auto again = FitEm(data, first.mixture, cfg);
  CHECK(again.iterations == 1);
  for (std::size_t i = 1; i < first.trace.size(); ++i) CHECK(first.trace[i] >= first.trace[i - 1] - 1e-9);
  cfg.max_iterations = 3;
  const Mixture poor{{{1.0, {10, 10}, Sym2::Identity()}}};
  CHECK(FitEm(data, poor, cfg).iterations <= 3);
}

TEST_CASE("greedy growth contract") {
  EmConfig cfg;
  SUBCASE("single point cannot grow") {
    const std::vector<Vec2> one{{3, 4}};
    const auto fit = GreedyFitMixture(one, cfg);
    CHECK(fit.mixture.size() == 1);
    CHECK(fit.mixture.components[0].mean == Vec2{3, 4});
  }
  SUBCASE("cap and strictly increasing acceptance") {
    const auto data = Blobs(12, {{0, 0}, {6, 0}, {0, 6}, {6, 6}}, 60);
    for (std::size_t cap : {1u, 2u, 3u, 8u}) {
      cfg.max_components = cap;
      const auto fit = GreedyFitMixture(data, cfg);
      CHECK(fit.mixture.size() <= cap);
      CHECK(fit.em_traces.size() == fit.accepted_log_likelihoods.size());
      for (std::size_t i = 1; i < fit.accepted_log_likelihoods.size(); ++i) {
        CHECK(fit.accepted_log_likelihoods[i] > fit.accepted_log_likelihoods[i - 1]);
      }
      for (const auto& trace : fit.em_traces) {
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-9);
      }
      CHECK(fit.log_likelihood == fit.accepted_log_likelihoods.back());
      CheckInvariants(fit.mixture, cfg.covariance_floor);
    }
  }
  SUBCASE("two clusters, two components") {
    const auto data = Blobs(42, {{0, 0}, {10, 10}}, 500);
    cfg.max_components = 2;
    const auto fit = GreedyFitMixture(data, cfg);
    REQUIRE(fit.mixture.size() == 2);
    CHECK(fit.accepted_log_likelihoods[1] > fit.accepted_log_likelihoods[0]);
    const std::span<const Vec2> all(data);
    const Vec2 m0 = SampleMean(all.subspan(0, 500));
    const Vec2 m1 = SampleMean(all.subspan(500));
    auto near = [](Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y) < 0.5; };
    const auto& c = fit.mixture.components;
    const bool ok = (near(c[0].mean, m0) && near(c[1].mean, m1)) || (near(c[0].mean, m1) && near(c[1].mean, m0));
    CHECK(ok);
  }
  SUBCASE("deterministic") {
    const auto data = Blobs(3, {{0, 0}, {5, 2}}, 80);
    const auto a = GreedyFitMixture(data, cfg);
    const auto b = GreedyFitMixture(data, cfg);
    REQUIRE(a.mixture.size() == b.mixture.size());
    for (std::size_t i = 0; i < a.mixture.size(); ++i) {
      CHECK(a.mixture.components[i].weight == b.mixture.components[i].weight);
      CHECK(a.mixture.components[i].mean == b.mixture.components[i].mean);
    }
  }
  CHECK_THROWS_AS(GreedyFitMixture(std::vector<Vec2>{}, cfg), Error);
}

TEST_CASE("relation models evaluate in raw feature units") {
  FeatureSet set{0, {}};
  std::mt19937_64 rng(6);
  std::normal_distribution<double> d(800.0, 120.0), o(200.0, 40.0);
  for (int i = 0; i < 150; ++i) set.vectors.push_back({d(rng), o(rng)});
  const auto model = TrainRelationModel(set, "near", EmConfig{});
  CHECK(model.n_samples == 150);
  const auto& st = model.standardization;
  CHECK(st.scale.x > 50.0);
  // Density = standardized density divided by the scale product.
  const FeatureVector f{750.0, 180.0};
  const Vec2 z{(f.distance - st.mean.x) / st.scale.x, (f.orientation - st.mean.y) / st.scale.y};
  CHECK(model.Density(f) == doctest::Approx(MixtureDensity(z, model.mixture) / (st.scale.x * st.scale.y)).epsilon(1e-12));
  double ll = 0.0;
  for (const auto& v : set.vectors) ll += model.LogDensity(v);
  CHECK(model.log_likelihood == doctest::Approx(ll).epsilon(1e-10));
  // Constant feature falls back to unit scale instead of dividing by zero.
  FeatureSet flat{1, {{100, 5}, {100, 6}, {100, 7}}};
  const auto fm = TrainRelationModel(flat, "at", EmConfig{});
  CHECK(fm.standardization.scale.x == 1.0);
  CHECK(std::isfinite(fm.LogDensity({100, 6})));
  CHECK_THROWS_AS(TrainRelationModel(FeatureSet{2, {}}, "in", EmConfig{}), Error);
}

TEST_CASE("model persistence is lossless") {
  FeatureSet set{3, {}};
  std::mt19937_64 rng(10);
  std::normal_distribution<double> d(300.0, 50.0), o(90.0, 30.0);
  for (int i = 0; i < 60; ++i) set.vectors.push_back({d(rng) + (i % 2) * 400.0, o(rng)});
  ModelBundle bundle;
  bundle.models.push_back(TrainRelationModel(set, "close to", EmConfig{}));
  bundle.skipped.emplace_back("at", 2);
  const auto text = ModelsToJson(bundle);
  const auto back = ModelsFromJson(text);
  REQUIRE(back.models.size() == 1);
  const auto& a = bundle.models[0];
  const auto& b = back.models[0];
  CHECK(b.relation == "close to");
  CHECK(b.relation_index == 3);
  CHECK(b.log_likelihood == a.log_likelihood);
  CHECK(b.standardization.mean == a.standardization.mean);
  CHECK(b.standardization.scale == a.standardization.scale);
  REQUIRE(b.mixture.size() == a.mixture.size());
  for (std::size_t i = 0; i < a.mixture.size(); ++i) {
    CHECK(b.mixture.components[i].weight == a.mixture.components[i].weight);
    CHECK(b.mixture.components[i].mean == a.mixture.components[i].mean);
    CHECK(b.mixture.components[i].cov.xx == a.mixture.components[i].cov.xx);
    CHECK(b.mixture.components[i].cov.xy == a.mixture.components[i].cov.xy);
    CHECK(b.mixture.components[i].cov.yy == a.mixture.components[i].cov.yy);
  }
  CHECK(back.skipped == bundle.skipped);
  CHECK(ModelsToJson(back) == text);
  CHECK(back.Find(3) != nullptr);
  CHECK(back.Find(0) == nullptr);

  const std::string bad_weights =
      R"({"models":[{"relation":"near","relation_index":0,"standardization":{"mean":[0,0],"scale":[1,1]},)"
      R"("components":[{"weight":0.5,"mean":[0,0],"cov":[[1,0],[0,1]]}],"log_likelihood":0}]})";
  CHECK_THROWS_AS(ModelsFromJson(bad_weights), Error);
  const std::string not_pd =
      R"({"models":[{"relation":"near","relation_index":0,"standardization":{"mean":[0,0],"scale":[1,1]},)"
      R"("components":[{"weight":1,"mean":[0,0],"cov":[[1,2],[2,1]]}],"log_likelihood":0}]})";
  CHECK_THROWS_AS(ModelsFromJson(not_pd), Error);
  const std::string asym =
      R"({"models":[{"relation":"near","relation_index":0,"standardization":{"mean":[0,0],"scale":[1,1]},)"
      R"("components":[{"weight":1,"mean":[0,0],"cov":[[1,0.1],[0.2,1]]}],"log_likelihood":0}]})";
  CHECK_THROWS_AS(ModelsFromJson(asym), Error);
  CHECK_THROWS_AS(ModelsFromJson("{"), Error);
}
