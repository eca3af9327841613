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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "features/features.hpp"
#include "mixture/linalg.hpp"

namespace kepath {

struct GaussianComponent {
  double weight = 1.0;
  Vec2 mean;
  Sym2 cov = Sym2::Identity();
};

struct Mixture {
  std::vector<GaussianComponent> components;

  std::size_t size() const { return components.size(); }
};

struct EmConfig {
  std::size_t max_components = 8;
  std::size_t max_iterations = 200;
  double rel_tolerance = 1e-6;
  double covariance_floor = 1e-6;
  // Carried for reproducibility records; the insertion heuristic is itself
  // deterministic and draws no random numbers.
  std::uint64_t seed = 0;
};

// Components with weight below this are dropped after an EM step.
inline constexpr double kMinComponentWeight = 1e-8;

double ComponentDensity(Vec2 d, const GaussianComponent& comp);
double LogComponentDensity(Vec2 d, const GaussianComponent& comp);
double MixtureDensity(Vec2 d, const Mixture& mixture);
double LogMixtureDensity(Vec2 d, const Mixture& mixture);
double LogLikelihood(std::span<const Vec2> data, const Mixture& mixture);

// responsibilities[j][i] = P(i | D_j).
std::vector<std::vector<double>> Responsibilities(std::span<const Vec2> data, const Mixture& mixture);

// One E + M pass. Covariances get floor * I added, are symmetrized, and have
// eigenvalues kept >= floor; components that lose their weight are removed.
Mixture EmStep(std::span<const Vec2> data, const Mixture& mixture, double covariance_floor);

struct EmFit {
  Mixture mixture;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  std::vector<double> trace;  // log-likelihood of the start model, then after every step
};

// Iterates EmStep until |dL| / |L| < rel_tolerance or max_iterations.
EmFit FitEm(std::span<const Vec2> data, const Mixture& start, const EmConfig& config);

struct GreedyFit {
  Mixture mixture;
  double log_likelihood = 0.0;
  std::vector<double> accepted_log_likelihoods;  // one per accepted model size
  // EM trace of each accepted fit. Insertion lowers the likelihood, so traces
  // are monotone individually but not end to end.
  std::vector<std::vector<double>> em_traces;
};

// Starts from one component at the sample mean/covariance and keeps inserting a
// component at the worst-explained point while the log-likelihood improves.
GreedyFit GreedyFitMixture(std::span<const Vec2> data, const EmConfig& config);

Vec2 SampleMean(std::span<const Vec2> data);
Sym2 SampleCovariance(std::span<const Vec2> data, Vec2 mean);

// Per-dimension z-scoring fitted on one relation's feature set.
struct Standardization {
  Vec2 mean;
  Vec2 scale{1.0, 1.0};

  Vec2 Apply(const FeatureVector& f) const {
    return {(f.distance - mean.x) / scale.x, (f.orientation - mean.y) / scale.y};
  }
  static Standardization Fit(std::span<const FeatureVector> data);
};

// A trained density over raw (distance, orientation) features. The mixture
// lives in standardized space; Density() includes the Jacobian so values are
// proper densities in raw feature units and comparable across relations.
struct RelationModel {
  std::size_t relation_index = 0;
  std::string relation;
  std::size_t n_samples = 0;
  Standardization standardization;
  Mixture mixture;
  double log_likelihood = 0.0;  // of the training set, raw feature space

  double Density(const FeatureVector& f) const;
  double LogDensity(const FeatureVector& f) const;
};

RelationModel TrainRelationModel(const FeatureSet& set, std::string relation, const EmConfig& config);

struct ModelBundle {
  std::vector<RelationModel> models;  // ascending relation_index
  std::vector<std::pair<std::string, std::size_t>> skipped;  // relation, sample count

  const RelationModel* Find(std::size_t relation_index) const;
};

std::string ModelsToJson(const ModelBundle& bundle);
ModelBundle ModelsFromJson(std::string_view json);

}  // namespace kepath
