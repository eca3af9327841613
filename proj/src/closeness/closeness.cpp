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

#include "closeness/closeness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "common/error.hpp"
#include "common/io.hpp"
#include "common/log.hpp"
#include "common/parallel.hpp"

namespace kepath {

std::vector<std::size_t> PairObservation::DistinctRelations() const {
  std::vector<std::size_t> out = relations;
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<PairObservation> AggregatePairs(const std::vector<RelationTriplet>& triplets,
                                            const PoiTable& pois, DistanceMode mode) {
  std::map<std::pair<PoiId, PoiId>, PairObservation> merged;
  for (const auto& t : triplets) {
    if (t.poi_a == t.poi_b) continue;
    const PoiId lo = std::min(t.poi_a, t.poi_b);
    const PoiId hi = std::max(t.poi_a, t.poi_b);
    auto& obs = merged[{lo, hi}];
    obs.poi_i = lo;
    obs.poi_j = hi;
    obs.relations.push_back(t.relation_index);
  }
  std::vector<PairObservation> out;
  out.reserve(merged.size());
  for (auto& [key, obs] : merged) {
    auto a = pois.find(obs.poi_i);
    auto b = pois.find(obs.poi_j);
    if (a == pois.end() || b == pois.end()) {
      throw Error(ErrorCode::kInvalidArgument, "pair (" + std::to_string(obs.poi_i) + ", " +
                                                   std::to_string(obs.poi_j) + ") has a PoI without coordinates");
    }
    if (a->second.coord == b->second.coord) {
      LogWarning("skipping pair " + a->second.canonical_name + " / " + b->second.canonical_name +
                 ": coincident coordinates");
      continue;
    }
    obs.features = ComputeFeature(mode, a->second.coord, b->second.coord);
    std::sort(obs.relations.begin(), obs.relations.end());
    out.push_back(std::move(obs));
  }
  return out;
}

double RelationPrior(const PairObservation& pair, std::size_t k) {
  if (pair.relations.empty()) return 0.0;
  const auto count = std::count(pair.relations.begin(), pair.relations.end(), k);
  return static_cast<double>(count) / static_cast<double>(pair.relations.size());
}

std::map<std::size_t, double> Posteriors(const PairObservation& pair, const ModelBundle& models) {
  std::vector<std::size_t> ks;
  std::vector<double> log_terms;
  for (std::size_t k : pair.DistinctRelations()) {
    const RelationModel* model = models.Find(k);
    if (model == nullptr) continue;
    ks.push_back(k);
    log_terms.push_back(model->LogDensity(pair.features) + std::log(RelationPrior(pair, k)));
  }
  std::map<std::size_t, double> out;
  if (ks.empty()) return out;
  const double shift = *std::max_element(log_terms.begin(), log_terms.end());
  if (!std::isfinite(shift)) {
    throw Error(ErrorCode::kDegenerate, "all relation likelihoods vanish for pair (" +
                                            std::to_string(pair.poi_i) + ", " + std::to_string(pair.poi_j) + ")");
  }
  double total = 0.0;
  for (double& v : log_terms) {
    v = std::exp(v - shift);
    total += v;
  }
  for (std::size_t n = 0; n < ks.size(); ++n) out[ks[n]] = log_terms[n] / total;
  return out;
}

double Posterior(const PairObservation& pair, std::size_t k, const ModelBundle& models) {
  const auto post = Posteriors(pair, models);
  auto it = post.find(k);
  return it == post.end() ? 0.0 : it->second;
}

std::map<std::size_t, double> GlobalMaxPosteriors(const std::vector<PairObservation>& pairs,
                                                  const ModelBundle& models) {
  std::map<std::size_t, double> maxima;
  for (const auto& pair : pairs) {
    for (const auto& [k, p] : Posteriors(pair, models)) {
      auto [it, inserted] = maxima.emplace(k, p);
      if (!inserted) it->second = std::max(it->second, p);
    }
  }
  return maxima;
}

namespace {

double ScoreFromPosteriors(const std::map<std::size_t, double>& posteriors,
                           const std::map<std::size_t, double>& maxima, std::size_t lexicon_size) {
  if (lexicon_size == 0) throw Error(ErrorCode::kInvalidArgument, "lexicon size must be positive");
  double sum = 0.0;
  for (const auto& [k, p] : posteriors) {
    auto it = maxima.find(k);
    if (it == maxima.end()) {
      throw Error(ErrorCode::kInvalidArgument, "no global maximum for relation " + std::to_string(k));
    }
    if (it->second > 0.0) sum += p / it->second;
  }
  return std::clamp(sum / static_cast<double>(lexicon_size), 0.0, 1.0);
}

}  // namespace

double ClosenessScore(const PairObservation& pair, const ModelBundle& models,
                      const std::map<std::size_t, double>& maxima, std::size_t lexicon_size) {
  return ScoreFromPosteriors(Posteriors(pair, models), maxima, lexicon_size);
}

RelationshipGraph BuildRelationshipGraph(const std::vector<PairObservation>& pairs, const ModelBundle& models,
                                         const PoiTable& pois, std::size_t lexicon_size, DistanceMode mode,
                                         unsigned threads) {
  std::vector<std::map<std::size_t, double>> posteriors(pairs.size());
  ParallelFor(pairs.size(), threads, [&](std::size_t n) { posteriors[n] = Posteriors(pairs[n], models); });

  std::map<std::size_t, double> maxima;
  for (const auto& post : posteriors) {
    for (const auto& [k, p] : post) {
      auto [it, inserted] = maxima.emplace(k, p);
      if (!inserted) it->second = std::max(it->second, p);
    }
  }

  RelationshipGraph graph;
  std::size_t unscored = 0;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const auto& pair = pairs[n];
    const auto& a = pois.at(pair.poi_i);
    const auto& b = pois.at(pair.poi_j);
    RelationshipEdge e;
    e.poi_i = pair.poi_i;
    e.poi_j = pair.poi_j;
    e.relations = pair.relations;
    e.distance_m = Distance(mode, a.coord, b.coord);
    e.weight = ScoreFromPosteriors(posteriors[n], maxima, lexicon_size);
    if (posteriors[n].empty()) ++unscored;
    graph.pois.emplace(a.id, a);
    graph.pois.emplace(b.id, b);
    graph.edges.push_back(std::move(e));
  }
  if (unscored > 0) {
    LogWarning(std::to_string(unscored) + " pair(s) observed only relations without a trained model; weight 0");
  }
  return graph;
}

std::string RelationshipGraphToJsonl(const RelationshipGraph& graph, const RelationLexicon& lexicon) {
  std::string out;
  for (const auto& e : graph.edges) {
    nlohmann::ordered_json j;
    j["poi_i"] = e.poi_i;
    j["poi_j"] = e.poi_j;
    j["w"] = e.weight;
    j["d_m"] = e.distance_m;
    auto rel = nlohmann::ordered_json::array();
    for (auto k : e.relations) rel.push_back(lexicon.surface(k));
    j["relations"] = std::move(rel);
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

RelationshipGraph RelationshipGraphFromJsonl(std::string_view jsonl, const RelationLexicon& lexicon,
                                             const PoiTable& pois) {
  RelationshipGraph graph;
  const auto lines = SplitLines(jsonl);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (Trim(lines[n]).empty()) continue;
    const std::string where = "closeness graph line " + std::to_string(n + 1);
    try {
      const auto j = nlohmann::json::parse(lines[n]);
      RelationshipEdge e;
      e.poi_i = j.at("poi_i").get<PoiId>();
      e.poi_j = j.at("poi_j").get<PoiId>();
      e.weight = j.at("w").get<double>();
      e.distance_m = j.at("d_m").get<double>();
      for (const auto& r : j.at("relations")) {
        const auto k = lexicon.IndexOf(r.get<std::string>());
        if (k == lexicon.size()) throw Error(ErrorCode::kParse, where + ": unknown relation");
        e.relations.push_back(k);
      }
      if (e.relations.empty()) throw Error(ErrorCode::kParse, where + ": empty relation set");
      if (!(e.weight >= 0.0 && e.weight <= 1.0)) throw Error(ErrorCode::kParse, where + ": weight outside [0, 1]");
      for (PoiId id : {e.poi_i, e.poi_j}) {
        auto it = pois.find(id);
        if (it == pois.end()) throw Error(ErrorCode::kParse, where + ": unknown PoI " + std::to_string(id));
        graph.pois.emplace(id, it->second);
      }
      graph.edges.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::kParse, where + ": " + ex.what());
    }
  }
  return graph;
}

}  // namespace kepath
