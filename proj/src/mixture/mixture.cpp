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

#include "mixture/mixture.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "common/error.hpp"

namespace kepath {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2 * pi)

double LogSumExp(std::span<const double> values) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

Sym2 RegularizeCovariance(Sym2 cov, double floor) {
  cov = cov + floor * Sym2::Identity();
  return FloorEigenvalues(cov, floor);
}

}  // namespace

double LogComponentDensity(Vec2 d, const GaussianComponent& comp) {
  const Vec2 diff = d - comp.mean;
  const double q = comp.cov.Inverse().Quadratic(diff);
  return -kLog2Pi - 0.5 * std::log(comp.cov.det()) - 0.5 * q;
}

double ComponentDensity(Vec2 d, const GaussianComponent& comp) {
  return std::exp(LogComponentDensity(d, comp));
}

double LogMixtureDensity(Vec2 d, const Mixture& mixture) {
  std::vector<double> terms;
  terms.reserve(mixture.size());
  for (const auto& c : mixture.components) terms.push_back(std::log(c.weight) + LogComponentDensity(d, c));
  return LogSumExp(terms);
}

double MixtureDensity(Vec2 d, const Mixture& mixture) {
  double p = 0.0;
  for (const auto& c : mixture.components) p += c.weight * ComponentDensity(d, c);
  return p;
}

double LogLikelihood(std::span<const Vec2> data, const Mixture& mixture) {
  double ll = 0.0;
  for (const auto& d : data) ll += LogMixtureDensity(d, mixture);
  return ll;
}

std::vector<std::vector<double>> Responsibilities(std::span<const Vec2> data, const Mixture& mixture) {
  const std::size_t m = mixture.size();
  std::vector<std::vector<double>> resp(data.size(), std::vector<double>(m));
  std::vector<double> terms(m);
  for (std::size_t j = 0; j < data.size(); ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto& c = mixture.components[i];
      terms[i] = std::log(c.weight) + LogComponentDensity(data[j], c);
    }
    const double log_p = LogSumExp(terms);
    for (std::size_t i = 0; i < m; ++i) resp[j][i] = std::exp(terms[i] - log_p);
  }
  return resp;
}

Mixture EmStep(std::span<const Vec2> data, const Mixture& mixture, double covariance_floor) {
  if (data.empty()) throw Error(ErrorCode::kInvalidArgument, "EM step needs at least one data point");
  const auto resp = Responsibilities(data, mixture);
  const double n = static_cast<double>(data.size());

  Mixture next;
  double total_weight = 0.0;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    double mass = 0.0;
    Vec2 weighted_sum;
    for (std::size_t j = 0; j < data.size(); ++j) {
      mass += resp[j][i];
      weighted_sum = weighted_sum + resp[j][i] * data[j];
    }
    const double weight = mass / n;
    if (weight < kMinComponentWeight) continue;
    GaussianComponent c;
    c.weight = weight;
    c.mean = (1.0 / mass) * weighted_sum;
    Sym2 scatter{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < data.size(); ++j) {
      scatter = scatter + resp[j][i] * Sym2::Outer(data[j] - c.mean);
    }
    c.cov = RegularizeCovariance((1.0 / mass) * scatter, covariance_floor);
    total_weight += weight;
    next.components.push_back(c);
  }
  for (auto& c : next.components) c.weight /= total_weight;
  return next;
}

EmFit FitEm(std::span<const Vec2> data, const Mixture& start, const EmConfig& config) {
  if (data.empty()) throw Error(ErrorCode::kInvalidArgument, "EM fit needs at least one data point");
  EmFit fit;
  fit.mixture = start;
  fit.log_likelihood = LogLikelihood(data, start);
  fit.trace.push_back(fit.log_likelihood);
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    Mixture next = EmStep(data, fit.mixture, config.covariance_floor);
    const double ll = LogLikelihood(data, next);
    const double delta = std::abs(ll - fit.log_likelihood);
    fit.mixture = std::move(next);
    fit.log_likelihood = ll;
    fit.trace.push_back(ll);
    ++fit.iterations;
    if (delta == 0.0 || delta < config.rel_tolerance * std::abs(ll)) break;
  }
  return fit;
}

Vec2 SampleMean(std::span<const Vec2> data) {
  Vec2 sum;
  for (const auto& d : data) sum = sum + d;
  return (1.0 / static_cast<double>(data.size())) * sum;
}

Sym2 SampleCovariance(std::span<const Vec2> data, Vec2 mean) {
  Sym2 s{0.0, 0.0, 0.0};
  for (const auto& d : data) s = s + Sym2::Outer(d - mean);
  return (1.0 / static_cast<double>(data.size())) * s;
}

GreedyFit GreedyFitMixture(std::span<const Vec2> data, const EmConfig& config) {
  if (data.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot fit a mixture to an empty data set");
  if (config.max_components == 0) throw Error(ErrorCode::kConfig, "max_components must be positive");
  const Vec2 mean = SampleMean(data);
  const Sym2 global_cov = SampleCovariance(data, mean);

  Mixture start;
  start.components.push_back({1.0, mean, RegularizeCovariance(global_cov, config.covariance_floor)});
  EmFit current = FitEm(data, start, config);

  GreedyFit out;
  out.accepted_log_likelihoods.push_back(current.log_likelihood);
  out.em_traces.push_back(current.trace);

  const Sym2 insert_cov = RegularizeCovariance(0.5 * global_cov, config.covariance_floor);
  for (std::size_t attempt = 1; attempt < config.max_components; ++attempt) {
    const std::size_t m = current.mixture.size();
    if (m >= config.max_components) break;

    std::size_t worst = 0;
    double worst_density = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < data.size(); ++j) {
      const double lp = LogMixtureDensity(data[j], current.mixture);
      if (lp < worst_density) {
        worst_density = lp;
        worst = j;
      }
    }

    Mixture grown = current.mixture;
    const double keep = static_cast<double>(m) / static_cast<double>(m + 1);
    for (auto& c : grown.components) c.weight *= keep;
    grown.components.push_back({1.0 / static_cast<double>(m + 1), data[worst], insert_cov});

    EmFit candidate = FitEm(data, grown, config);
    if (!(candidate.log_likelihood > current.log_likelihood) ||
        candidate.mixture.size() > config.max_components) {
      break;
    }
    current = std::move(candidate);
    out.accepted_log_likelihoods.push_back(current.log_likelihood);
    out.em_traces.push_back(current.trace);
  }
  out.mixture = std::move(current.mixture);
  out.log_likelihood = current.log_likelihood;
  return out;
}

Standardization Standardization::Fit(std::span<const FeatureVector> data) {
  Standardization s;
  if (data.empty()) return s;
  const double n = static_cast<double>(data.size());
  for (const auto& f : data) {
    s.mean.x += f.distance;
    s.mean.y += f.orientation;
  }
  s.mean = (1.0 / n) * s.mean;
  double vx = 0.0;
  double vy = 0.0;
  for (const auto& f : data) {
    vx += (f.distance - s.mean.x) * (f.distance - s.mean.x);
    vy += (f.orientation - s.mean.y) * (f.orientation - s.mean.y);
  }
  const double sx = std::sqrt(vx / n);
  const double sy = std::sqrt(vy / n);
  s.scale.x = sx > 1e-12 * (std::abs(s.mean.x) + 1.0) ? sx : 1.0;
  s.scale.y = sy > 1e-12 * (std::abs(s.mean.y) + 1.0) ? sy : 1.0;
  return s;
}

double RelationModel::LogDensity(const FeatureVector& f) const {
  return LogMixtureDensity(standardization.Apply(f), mixture) -
         std::log(standardization.scale.x * standardization.scale.y);
}

double RelationModel::Density(const FeatureVector& f) const { return std::exp(LogDensity(f)); }

RelationModel TrainRelationModel(const FeatureSet& set, std::string relation, const EmConfig& config) {
  if (set.vectors.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "relation '" + relation + "' has no feature vectors");
  }
  RelationModel model;
  model.relation_index = set.relation_index;
  model.relation = std::move(relation);
  model.n_samples = set.vectors.size();
  model.standardization = Standardization::Fit(set.vectors);
  std::vector<Vec2> z;
  z.reserve(set.vectors.size());
  for (const auto& f : set.vectors) z.push_back(model.standardization.Apply(f));
  auto fit = GreedyFitMixture(z, config);
  model.mixture = std::move(fit.mixture);
  model.log_likelihood =
      fit.log_likelihood - static_cast<double>(z.size()) *
                               std::log(model.standardization.scale.x * model.standardization.scale.y);
  return model;
}

const RelationModel* ModelBundle::Find(std::size_t relation_index) const {
  for (const auto& m : models) {
    if (m.relation_index == relation_index) return &m;
  }
  return nullptr;
}

std::string ModelsToJson(const ModelBundle& bundle) {
  using Json = nlohmann::ordered_json;
  Json root;
  root["models"] = Json::array();
  for (const auto& m : bundle.models) {
    Json jm;
    jm["relation"] = m.relation;
    jm["relation_index"] = m.relation_index;
    jm["n_samples"] = m.n_samples;
    jm["standardization"] = {{"mean", {m.standardization.mean.x, m.standardization.mean.y}},
                             {"scale", {m.standardization.scale.x, m.standardization.scale.y}}};
    Json comps = Json::array();
    for (const auto& c : m.mixture.components) {
      Json jc;
      jc["weight"] = c.weight;
      jc["mean"] = {c.mean.x, c.mean.y};
      jc["cov"] = {{c.cov.xx, c.cov.xy}, {c.cov.xy, c.cov.yy}};
      comps.push_back(std::move(jc));
    }
    jm["components"] = std::move(comps);
    jm["log_likelihood"] = m.log_likelihood;
    root["models"].push_back(std::move(jm));
  }
  root["skipped"] = Json::array();
  for (const auto& [relation, count] : bundle.skipped) {
    root["skipped"].push_back({{"relation", relation}, {"n_samples", count}});
  }
  return root.dump(2) + "\n";
}

ModelBundle ModelsFromJson(std::string_view json) {
  ModelBundle bundle;
  try {
    const auto root = nlohmann::json::parse(json);
    for (const auto& jm : root.at("models")) {
      RelationModel m;
      m.relation = jm.at("relation").get<std::string>();
      m.relation_index = jm.at("relation_index").get<std::size_t>();
      m.n_samples = jm.value("n_samples", std::size_t{0});
      const auto& st = jm.at("standardization");
      m.standardization.mean = {st.at("mean").at(0).get<double>(), st.at("mean").at(1).get<double>()};
      m.standardization.scale = {st.at("scale").at(0).get<double>(), st.at("scale").at(1).get<double>()};
      double weight_sum = 0.0;
      for (const auto& jc : jm.at("components")) {
        GaussianComponent c;
        c.weight = jc.at("weight").get<double>();
        c.mean = {jc.at("mean").at(0).get<double>(), jc.at("mean").at(1).get<double>()};
        const auto& cov = jc.at("cov");
        c.cov = {cov.at(0).at(0).get<double>(), cov.at(0).at(1).get<double>(), cov.at(1).at(1).get<double>()};
        if (cov.at(1).at(0).get<double>() != c.cov.xy) {
          throw Error(ErrorCode::kParse, "model '" + m.relation + "': covariance not symmetric");
        }
        if (!(c.weight > 0.0) || !(c.cov.xx > 0.0) || !(c.cov.det() > 0.0)) {
          throw Error(ErrorCode::kParse, "model '" + m.relation + "': invalid component");
        }
        weight_sum += c.weight;
        m.mixture.components.push_back(c);
      }
      if (m.mixture.components.empty() || std::abs(weight_sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::kParse, "model '" + m.relation + "': weights do not sum to 1");
      }
      if (!(m.standardization.scale.x > 0.0) || !(m.standardization.scale.y > 0.0)) {
        throw Error(ErrorCode::kParse, "model '" + m.relation + "': nonpositive standardization scale");
      }
      m.log_likelihood = jm.at("log_likelihood").get<double>();
      bundle.models.push_back(std::move(m));
    }
    if (root.contains("skipped")) {
      for (const auto& js : root.at("skipped")) {
        bundle.skipped.emplace_back(js.at("relation").get<std::string>(), js.at("n_samples").get<std::size_t>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("models file: ") + e.what());
  }
  return bundle;
}

}  // namespace kepath
