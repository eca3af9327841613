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

#include "evaluation/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "common/error.hpp"
#include "common/io.hpp"
#include "common/log.hpp"
#include "common/parallel.hpp"

namespace kepath {
namespace {

// Local metric projection used only for grid bucketing.
struct Projector {
  DistanceMode mode;
  double cos_lat = 1.0;

  double X(const Coord& c) const {
    return mode == DistanceMode::kPlanar ? c.lon : kEarthRadiusMeters * c.lon * std::numbers::pi / 180.0 * cos_lat;
  }
  double Y(const Coord& c) const {
    return mode == DistanceMode::kPlanar ? c.lat : kEarthRadiusMeters * c.lat * std::numbers::pi / 180.0;
  }
};

std::string PercentLabel(double fraction) {
  const double pct = fraction * 100.0;
  const double rounded = std::round(pct);
  return std::abs(pct - rounded) < 1e-9 ? std::to_string(static_cast<long long>(rounded)) : FormatDouble(pct);
}

std::vector<MetricRow> EvaluatePairs(const EvaluationInputs& in, const EnrichedGraph& enriched,
                                     const std::vector<VertexPair>& pairs, const std::string& setting,
                                     const std::string& param, double beta, unsigned threads) {
  const RoadGraph& g = *in.graph;
  std::vector<std::vector<MetricRow>> slots(pairs.size());
  ParallelFor(pairs.size(), threads, [&](std::size_t n) {
    const auto [s, t] = pairs[n];
    std::vector<RouteResult> routes;
    try {
      routes.push_back(DijG(enriched, s, t));
      routes.push_back(DijGStar(enriched, s, t));
      routes.push_back(DijHStar(enriched, *in.closeness_graph, *in.mapping, s, t, beta));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kNoPath) throw;
      LogWarning("pair " + std::to_string(g.vertex(s).id) + " -> " + std::to_string(g.vertex(t).id) +
                 " unreachable; excluded");
      return;
    }
    const auto& base = routes.front();
    const auto base_pop = PathPopularity(base.path, *in.popularity);
    for (const auto& r : routes) {
      MetricRow row;
      row.setting = setting;
      row.param = param;
      row.pair_index = n;
      row.source = g.vertex(s).id;
      row.target = g.vertex(t).id;
      row.algorithm = r.algorithm;
      row.length_m = r.length;
      row.cost = r.cost;
      row.er = r.er;
      row.popularity = PathPopularity(r.path, *in.popularity);
      row.delta_length_pct = (r.length - base.length) / base.length * 100.0;
      row.delta_popularity_pct = static_cast<double>(row.popularity - base_pop) /
                                 static_cast<double>(std::max<std::int64_t>(base_pop, 1)) * 100.0;
      row.enrichment_gain_pct = EnrichmentGain(base.er, r.er);
      row.fallback = r.fallback;
      slots[n].push_back(std::move(row));
    }
  });
  std::vector<MetricRow> rows;
  for (auto& s : slots) {
    for (auto& r : s) rows.push_back(std::move(r));
  }
  return rows;
}

void CheckInputs(const EvaluationInputs& in) {
  if (!in.graph || !in.closeness_graph || !in.mapping || !in.coverage || !in.popularity) {
    throw Error(ErrorCode::kInvalidArgument, "evaluation inputs incomplete");
  }
}

}  // namespace

std::vector<Photo> PhotosFromTsv(std::string_view tsv, DistanceMode mode) {
  std::vector<Photo> photos;
  const auto lines = SplitLines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (IsSkippableLine(lines[n])) continue;
    const auto f = SplitTabs(lines[n]);
    if (f.size() < 3) throw Error(ErrorCode::kParse, "photos line " + std::to_string(n + 1) + ": expected id, lat, lon");
    if (photos.empty() && Trim(f[1]) == "lat") continue;
    Photo p;
    p.id = std::string(Trim(f[0]));
    p.coord = {ParseDouble(f[1], "lat", n + 1), ParseDouble(f[2], "lon", n + 1)};
    if (mode == DistanceMode::kGeodesic && !InLatLonBounds(p.coord)) {
      throw Error(ErrorCode::kCoordinateOutOfBounds, "photos line " + std::to_string(n + 1) + ": coordinate out of bounds");
    }
    photos.push_back(std::move(p));
  }
  return photos;
}

PopularityIndex BuildPopularityIndex(const std::vector<Photo>& photos, const RoadGraph& graph, double radius_m) {
  if (!(radius_m > 0.0)) throw Error(ErrorCode::kInvalidArgument, "popularity radius must be positive");
  PopularityIndex index;
  index.counts.assign(graph.vertex_count(), 0);
  if (graph.vertex_count() == 0) return index;

  Projector proj{graph.mode()};
  if (graph.mode() == DistanceMode::kGeodesic) {
    double lat_sum = 0.0;
    for (const auto& v : graph.vertices()) lat_sum += v.coord.lat;
    proj.cos_lat = std::cos(lat_sum / static_cast<double>(graph.vertex_count()) * std::numbers::pi / 180.0);
  }
  // Slightly oversized cells absorb projection error; exact distances decide.
  const double cell = radius_m * 1.05;
  auto cell_of = [&](const Coord& c) {
    return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor(proj.X(c) / cell)),
                                                 static_cast<std::int64_t>(std::floor(proj.Y(c) / cell))};
  };
  struct PairHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
      return std::hash<std::int64_t>()(p.first * 73856093LL ^ p.second * 19349663LL);
    }
  };
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>, PairHash> buckets;
  for (std::size_t i = 0; i < graph.vertex_count(); ++i) buckets[cell_of(graph.vertex(i).coord)].push_back(i);

  for (const auto& photo : photos) {
    const auto [cx, cy] = cell_of(photo.coord);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find({cx + dx, cy + dy});
        if (it == buckets.end()) continue;
        for (auto v : it->second) {
          if (Distance(graph.mode(), photo.coord, graph.vertex(v).coord) <= radius_m) ++index.counts[v];
        }
      }
    }
  }
  return index;
}

std::int64_t PathPopularity(const Path& path, const PopularityIndex& index) {
  std::vector<std::size_t> distinct = path.vertices;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::int64_t total = 0;
  for (auto v : distinct) total += index.at(v);
  return total;
}

double NetworkExtent(const RoadGraph& graph) {
  if (graph.vertex_count() == 0) return 0.0;
  Coord lo = graph.vertex(0).coord;
  Coord hi = lo;
  for (const auto& v : graph.vertices()) {
    lo.lat = std::min(lo.lat, v.coord.lat);
    lo.lon = std::min(lo.lon, v.coord.lon);
    hi.lat = std::max(hi.lat, v.coord.lat);
    hi.lon = std::max(hi.lon, v.coord.lon);
  }
  return Distance(graph.mode(), lo, hi);
}

void ExperimentConfig::Validate() const {
  auto check = [](FractionRange r, const std::string& what) {
    if (!(r.lo > 0.0 && r.lo < r.hi && r.hi < 1.0)) {
      throw Error(ErrorCode::kConfig, what + " must satisfy 0 < lo < hi < 1");
    }
  };
  if (n_pairs == 0) throw Error(ErrorCode::kConfig, "n_pairs must be positive");
  check(setting_i_range, "setting i range");
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    check(brackets[b], "bracket " + std::to_string(b));
    if (b > 0 && brackets[b].lo < brackets[b - 1].hi) throw Error(ErrorCode::kConfig, "brackets overlap");
  }
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::kConfig, "alpha grid values must lie in [0, 1]");
  }
  if (!(setting_ii_alpha >= 0.0 && setting_ii_alpha <= 1.0)) throw Error(ErrorCode::kConfig, "setting ii alpha outside [0, 1]");
  if (!(beta > 1.0)) throw Error(ErrorCode::kConfig, "beta must exceed 1");
}

std::vector<VertexPair> SamplePairs(const RoadGraph& graph, FractionRange range, std::size_t n_pairs,
                                    std::uint64_t seed, std::size_t max_draws) {
  const std::size_t n = graph.vertex_count();
  if (n < 2) throw Error(ErrorCode::kSamplingExhausted, "graph has fewer than two vertices");
  const double extent = NetworkExtent(graph);
  const double lo = range.lo * extent;
  const double hi = range.hi * extent;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<VertexPair> pairs;
  double widest = 0.0;
  std::size_t draws = 0;
  while (pairs.size() < n_pairs && draws < max_draws) {
    ++draws;
    const std::size_t s = pick(rng);
    const std::size_t t = pick(rng);
    if (s == t) continue;
    const double d = Distance(graph.mode(), graph.vertex(s).coord, graph.vertex(t).coord);
    widest = std::max(widest, d);
    if (d >= lo && d <= hi) pairs.emplace_back(s, t);
  }
  if (pairs.size() < n_pairs) {
    throw Error(ErrorCode::kSamplingExhausted,
                "found " + std::to_string(pairs.size()) + " of " + std::to_string(n_pairs) + " pairs in " +
                    std::to_string(draws) + " draws for separation " + PercentLabel(range.lo) + "-" +
                    PercentLabel(range.hi) + "% of extent " + FormatDouble(extent) +
                    " m; widest pair seen was " + PercentLabel(extent > 0 ? widest / extent : 0.0) + "%");
  }
  return pairs;
}

double EnrichmentGain(double baseline_er, double candidate_er) {
  if (!(baseline_er > 0.0)) throw Error(ErrorCode::kInvalidArgument, "baseline enrichment ratio must be positive");
  return (baseline_er - candidate_er) / baseline_er * 100.0;
}

const MetricAggregate* MetricsReport::Find(std::string_view setting, std::string_view param, Algorithm alg) const {
  for (const auto& a : aggregates) {
    if (a.setting == setting && a.param == param && a.algorithm == alg) return &a;
  }
  return nullptr;
}

std::vector<MetricAggregate> Aggregate(const std::vector<MetricRow>& rows) {
  std::vector<MetricAggregate> out;
  std::map<std::tuple<std::string, std::string, int>, std::size_t> slot;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.setting, r.param, static_cast<int>(r.algorithm));
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, out.size()).first;
      MetricAggregate a;
      a.setting = r.setting;
      a.param = r.param;
      a.algorithm = r.algorithm;
      out.push_back(a);
    }
    auto& a = out[it->second];
    ++a.n_pairs;
    if (r.fallback) ++a.n_fallback;
    a.mean_delta_length_pct += r.delta_length_pct;
    a.mean_delta_popularity_pct += r.delta_popularity_pct;
    a.mean_enrichment_gain_pct += r.enrichment_gain_pct;
    a.mean_length_m += r.length_m;
    a.mean_popularity += static_cast<double>(r.popularity);
    a.mean_er += r.er;
  }
  for (auto& a : out) {
    const double n = static_cast<double>(a.n_pairs);
    a.mean_delta_length_pct /= n;
    a.mean_delta_popularity_pct /= n;
    a.mean_enrichment_gain_pct /= n;
    a.mean_length_m /= n;
    a.mean_popularity /= n;
    a.mean_er /= n;
  }
  return out;
}

MetricsReport RunSettingI(const EvaluationInputs& in, const ExperimentConfig& config) {
  CheckInputs(in);
  config.Validate();
  const auto pairs = SamplePairs(*in.graph, config.setting_i_range, config.n_pairs, config.seed, config.max_draws);
  MetricsReport report;
  for (double alpha : config.alphas) {
    const auto enriched = ApplyEnrichment(*in.graph, *in.coverage, alpha);
    auto rows = EvaluatePairs(in, enriched, pairs, "i", FormatDouble(alpha), config.beta, config.threads);
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }
  report.aggregates = Aggregate(report.rows);
  return report;
}

MetricsReport RunSettingII(const EvaluationInputs& in, const ExperimentConfig& config) {
  CheckInputs(in);
  config.Validate();
  const auto enriched = ApplyEnrichment(*in.graph, *in.coverage, config.setting_ii_alpha);
  MetricsReport report;
  std::vector<std::pair<std::string, std::string>> flagged;  // label, note
  std::vector<std::string> order;
  for (std::size_t b = 0; b < config.brackets.size(); ++b) {
    const auto& br = config.brackets[b];
    const std::string label = PercentLabel(br.lo) + "-" + PercentLabel(br.hi);
    order.push_back(label);
    std::vector<VertexPair> pairs;
    try {
      pairs = SamplePairs(*in.graph, br, config.n_pairs, config.seed + 1 + b, config.max_draws);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kSamplingExhausted) throw;
      LogWarning("bracket " + label + ": " + err.what());
      flagged.emplace_back(label, err.what());
      continue;
    }
    auto rows = EvaluatePairs(in, enriched, pairs, "ii", label, config.beta, config.threads);
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }
  auto computed = Aggregate(report.rows);
  for (const auto& label : order) {
    auto f = std::find_if(flagged.begin(), flagged.end(), [&](const auto& p) { return p.first == label; });
    for (Algorithm alg : {Algorithm::kDijG, Algorithm::kDijGStar, Algorithm::kDijHStar}) {
      if (f != flagged.end()) {
        MetricAggregate a;
        a.setting = "ii";
        a.param = label;
        a.algorithm = alg;
        a.flagged = true;
        a.note = f->second;
        report.aggregates.push_back(std::move(a));
        continue;
      }
      for (const auto& a : computed) {
        if (a.param == label && a.algorithm == alg) report.aggregates.push_back(a);
      }
    }
  }
  return report;
}

std::string AggregatesToCsv(const std::vector<MetricAggregate>& aggregates) {
  std::string out =
      "setting,param,algorithm,n_pairs,n_fallback,mean_delta_length_pct,mean_delta_popularity_pct,"
      "mean_enrichment_gain_pct,mean_length_m,mean_popularity,mean_er,flagged,note\n";
  for (const auto& a : aggregates) {
    std::string note = a.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '"', '\'');
    out += a.setting + ',' + a.param + ',' + AlgorithmName(a.algorithm) + ',' + std::to_string(a.n_pairs) + ',' +
           std::to_string(a.n_fallback) + ',' + FormatDouble(a.mean_delta_length_pct) + ',' +
           FormatDouble(a.mean_delta_popularity_pct) + ',' + FormatDouble(a.mean_enrichment_gain_pct) + ',' +
           FormatDouble(a.mean_length_m) + ',' + FormatDouble(a.mean_popularity) + ',' + FormatDouble(a.mean_er) +
           ',' + (a.flagged ? "1" : "0") + ',' + note + '\n';
  }
  return out;
}

std::string RowsToJsonl(const std::vector<MetricRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["setting"] = r.setting;
    j["param"] = r.param;
    j["pair_index"] = r.pair_index;
    j["source"] = r.source;
    j["target"] = r.target;
    j["algorithm"] = AlgorithmName(r.algorithm);
    j["length_m"] = r.length_m;
    j["cost"] = r.cost;
    j["er"] = r.er;
    j["popularity"] = r.popularity;
    j["delta_length_pct"] = r.delta_length_pct;
    j["delta_popularity_pct"] = r.delta_popularity_pct;
    j["enrichment_gain_pct"] = r.enrichment_gain_pct;
    j["fallback"] = r.fallback;
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace kepath
