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

#include "pipeline/stages.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "closeness/closeness.hpp"
#include "common/error.hpp"
#include "common/io.hpp"
#include "common/log.hpp"
#include "common/parallel.hpp"
#include "evaluation/evaluation.hpp"
#include "extract/extract.hpp"
#include "features/features.hpp"
#include "mixture/mixture.hpp"
#include "network/enrich.hpp"
#include "pipeline/fixture.hpp"
#include "routing/routing.hpp"

namespace kepath {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void RequireInput(const fs::path& path, const std::string& what) {
  if (path.empty()) throw Error(ErrorCode::kConfig, what + " path not configured");
  if (!fs::exists(path)) throw Error(ErrorCode::kConfig, what + " not found: " + path.string());
}

void RequireArtifact(const PipelineConfig& config, const char* name, const char* producer) {
  const auto p = config.out_dir / name;
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kConfig, std::string(name) + " not found in " + config.out_dir.string() + "; run '" +
                                        producer + "' first");
  }
}

std::string ReadArtifact(const PipelineConfig& config, const char* name) { return ReadFile(config.out_dir / name); }

void WriteArtifact(const PipelineConfig& config, const char* name, const std::string& contents, Json& summary) {
  WriteFile(config.out_dir / name, contents);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(Fingerprint(contents)));
  summary["outputs"][name] = hex;
}

RelationLexicon LoadLexicon(const PipelineConfig& config) {
  if (!config.relations.empty()) RequireInput(config.relations, "relation lexicon");
  if (!config.verbs.empty()) RequireInput(config.verbs, "verbs list");
  return RelationLexicon::Load(config.relations, config.verbs);
}

RoadGraph LoadRoadGraph(const PipelineConfig& config) {
  RequireInput(config.nodes, "nodes file");
  RequireInput(config.edges, "edges file");
  return RoadGraph::Load(config.nodes, config.edges, config.mode, config.directed);
}

PoiTable LoadPois(const PipelineConfig& config) { return PoisFromTsv(ReadArtifact(config, artifact::kPois)); }

RelationshipGraph LoadClosenessGraph(const PipelineConfig& config, const RelationLexicon& lex) {
  RequireArtifact(config, artifact::kClosenessGraph, "score");
  RequireArtifact(config, artifact::kPois, "extract");
  return RelationshipGraphFromJsonl(ReadArtifact(config, artifact::kClosenessGraph), lex, LoadPois(config));
}

double Quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

Json StageGenFixture(const PipelineConfig& config) {
  const fs::path dir = config.fixture_dir.empty() ? config.out_dir : config.fixture_dir;
  const auto bundle = BuildFixture(config.fixture, config.seed);
  WriteFixture(bundle, dir);
  Json s;
  s["stage"] = "gen-fixture";
  s["dir"] = dir.string();
  s["vertices"] = bundle.vertex_count;
  s["edges"] = bundle.edge_count;
  s["pois"] = bundle.poi_count;
  s["corridor_pois"] = bundle.corridor_pois;
  s["sentences"] = bundle.sentence_count;
  s["relation_mentions"] = bundle.relation_mentions;
  s["photos"] = bundle.photo_count;
  s["route_source"] = bundle.route_source;
  s["route_target"] = bundle.route_target;
  std::string all = bundle.nodes_tsv + bundle.edges_tsv + bundle.gazetteer_tsv + bundle.corpus_jsonl +
                    bundle.photos_tsv + bundle.manifest;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(Fingerprint(all)));
  s["bundle_hash"] = hex;
  return s;
}

Json StageExtract(const PipelineConfig& config) {
  RequireInput(config.gazetteer, "gazetteer");
  RequireInput(config.corpus, "corpus");
  const auto lex = LoadLexicon(config);
  const auto gaz = Gazetteer::Load(config.gazetteer, config.mode);
  const auto docs = LoadCorpus(config.corpus);
  const auto triplets = ExtractDocuments(docs, gaz, lex, config.threads);
  const auto pois = ReferencedPois(triplets, gaz);

  Json s;
  s["stage"] = "extract";
  s["documents"] = docs.size();
  s["triplets"] = triplets.size();
  s["pois"] = pois.size();
  Json hist = Json::object();
  for (const auto& r : lex.surfaces()) hist[r] = 0;
  for (const auto& t : triplets) hist[lex.surface(t.relation_index)] = hist[lex.surface(t.relation_index)].get<int>() + 1;
  s["histogram"] = hist;
  WriteArtifact(config, artifact::kTriplets, TripletsToJsonl(triplets, lex, &gaz), s);
  WriteArtifact(config, artifact::kPois, PoisToTsv(pois), s);
  return s;
}

Json StageFeatures(const PipelineConfig& config) {
  RequireArtifact(config, artifact::kTriplets, "extract");
  RequireArtifact(config, artifact::kPois, "extract");
  const auto lex = LoadLexicon(config);
  const auto triplets = TripletsFromJsonl(ReadArtifact(config, artifact::kTriplets), lex);
  const auto fx = BuildFeatureSets(triplets, LoadPois(config), config.mode);
  Json s;
  s["stage"] = "features";
  s["records"] = fx.records.size();
  s["skipped_coincident"] = fx.skipped;
  Json per = Json::object();
  for (const auto& [k, set] : fx.sets) per[lex.surface(k)] = set.vectors.size();
  s["per_relation"] = per;
  WriteArtifact(config, artifact::kFeatures, FeaturesToCsv(fx.records, lex), s);
  return s;
}

Json StageTrain(const PipelineConfig& config) {
  RequireArtifact(config, artifact::kFeatures, "features");
  const auto lex = LoadLexicon(config);
  const auto sets = GroupRecords(FeaturesFromCsv(ReadArtifact(config, artifact::kFeatures), lex));
  std::vector<std::size_t> trainable;
  ModelBundle bundle;
  for (std::size_t k = 0; k < lex.size(); ++k) {
    auto it = sets.find(k);
    const std::size_t n = it == sets.end() ? 0 : it->second.vectors.size();
    if (n < config.min_samples) {
      bundle.skipped.emplace_back(lex.surface(k), n);
      if (n > 0) {
        LogWarning("relation '" + lex.surface(k) + "' has " + std::to_string(n) + " samples (< " +
                   std::to_string(config.min_samples) + "); skipped");
      }
      continue;
    }
    trainable.push_back(k);
  }
  std::vector<RelationModel> models(trainable.size());
  ParallelFor(trainable.size(), config.threads, [&](std::size_t n) {
    const auto k = trainable[n];
    models[n] = TrainRelationModel(sets.at(k), lex.surface(k), config.em);
  });
  bundle.models = std::move(models);

  Json s;
  s["stage"] = "train";
  Json list = Json::array();
  for (const auto& m : bundle.models) {
    Json j;
    j["relation"] = m.relation;
    j["samples"] = m.n_samples;
    j["components"] = m.mixture.size();
    j["log_likelihood"] = m.log_likelihood;
    list.push_back(j);
  }
  s["models"] = list;
  Json skipped = Json::array();
  for (const auto& [name, n] : bundle.skipped) skipped.push_back({{"relation", name}, {"samples", n}});
  s["skipped"] = skipped;
  WriteArtifact(config, artifact::kModels, ModelsToJson(bundle), s);
  return s;
}

Json StageScore(const PipelineConfig& config) {
  RequireArtifact(config, artifact::kTriplets, "extract");
  RequireArtifact(config, artifact::kPois, "extract");
  RequireArtifact(config, artifact::kModels, "train");
  const auto lex = LoadLexicon(config);
  const auto triplets = TripletsFromJsonl(ReadArtifact(config, artifact::kTriplets), lex);
  const auto pois = LoadPois(config);
  const auto models = ModelsFromJson(ReadArtifact(config, artifact::kModels));
  const auto pairs = AggregatePairs(triplets, pois, config.mode);
  const auto closeness_graph = BuildRelationshipGraph(pairs, models, pois, lex.size(), config.mode, config.threads);

  std::vector<double> w;
  for (const auto& e : closeness_graph.edges) w.push_back(e.weight);
  std::sort(w.begin(), w.end());
  Json s;
  s["stage"] = "score";
  s["pairs"] = pairs.size();
  s["edges"] = closeness_graph.edges.size();
  s["w_quantiles"] = {{"min", Quantile(w, 0.0)},  {"q25", Quantile(w, 0.25)}, {"median", Quantile(w, 0.5)},
                      {"q75", Quantile(w, 0.75)}, {"max", Quantile(w, 1.0)}};
  WriteArtifact(config, artifact::kClosenessGraph, RelationshipGraphToJsonl(closeness_graph, lex), s);
  return s;
}

Json StageEnrich(const PipelineConfig& config) {
  const auto lex = LoadLexicon(config);
  const auto graph = LoadRoadGraph(config);
  const auto closeness_graph = LoadClosenessGraph(config, lex);
  const auto mapping = MapPoisToVertices(closeness_graph.pois, graph);
  const auto coverage = ComputeCoverage(graph, closeness_graph, mapping, config.threads);
  const auto enriched = ApplyEnrichment(graph, coverage, config.alpha);
  std::size_t touched = 0;
  for (auto n : enriched.covering_pairs) touched += n > 0;
  Json s;
  s["stage"] = "enrich";
  s["alpha"] = config.alpha;
  s["vertices"] = graph.vertex_count();
  s["edges"] = graph.edge_count();
  s["enriched_edges"] = touched;
  s["unreachable_pairs"] = coverage.unreachable_pairs;
  WriteArtifact(config, artifact::kEnriched, EnrichedGraphToTsv(enriched), s);
  WriteArtifact(config, artifact::kPoiVertices, PoiVertexMapToTsv(mapping, graph), s);
  return s;
}

Json StageRoute(const PipelineConfig& config) {
  if (!config.route_source || !config.route_target) {
    throw Error(ErrorCode::kConfig, "route needs a source and a target vertex id");
  }
  const auto lex = LoadLexicon(config);
  const auto graph = LoadRoadGraph(config);
  const auto closeness_graph = LoadClosenessGraph(config, lex);
  const auto s_idx = graph.IndexOf(*config.route_source);
  const auto t_idx = graph.IndexOf(*config.route_target);
  if (!s_idx || !t_idx) throw Error(ErrorCode::kConfig, "route source or target is not a vertex of the road graph");
  const auto mapping = MapPoisToVertices(closeness_graph.pois, graph);
  const auto enriched = Enrich(graph, closeness_graph, mapping, config.alpha, config.threads);

  std::vector<Algorithm> algs;
  if (config.route_algorithm == "all") {
    algs = {Algorithm::kDijG, Algorithm::kDijGStar, Algorithm::kDijHStar};
  } else {
    algs = {ParseAlgorithm(config.route_algorithm)};
  }
  std::vector<RouteResult> routes;
  for (auto alg : algs) {
    switch (alg) {
      case Algorithm::kDijG: routes.push_back(DijG(enriched, *s_idx, *t_idx)); break;
      case Algorithm::kDijGStar: routes.push_back(DijGStar(enriched, *s_idx, *t_idx)); break;
      case Algorithm::kDijHStar:
        routes.push_back(DijHStar(enriched, closeness_graph, mapping, *s_idx, *t_idx, config.beta));
        break;
    }
  }
  std::string jsonl;
  Json s;
  s["stage"] = "route";
  s["source"] = *config.route_source;
  s["target"] = *config.route_target;
  s["alpha"] = config.alpha;
  Json list = Json::array();
  for (const auto& r : routes) {
    jsonl += RouteToJson(r, graph, *s_idx, *t_idx) + '\n';
    Json j;
    j["algorithm"] = AlgorithmName(r.algorithm);
    j["d_m"] = r.length;
    j["cost"] = r.cost;
    j["er"] = r.er;
    j["pois"] = r.poi_sequence.size();
    j["fallback"] = r.fallback;
    if (r.fallback) LogWarning(std::string(AlgorithmName(r.algorithm)) + " fell back: " + r.note);
    list.push_back(j);
  }
  s["routes"] = list;
  WriteArtifact(config, artifact::kRoutes, jsonl, s);
  if (config.route_geojson) WriteArtifact(config, artifact::kRoutesGeoJson, RoutesToGeoJson(routes, graph), s);
  return s;
}

Json Brief(const std::vector<MetricAggregate>& aggregates) {
  Json list = Json::array();
  for (const auto& a : aggregates) {
    Json j;
    j["param"] = a.param;
    j["algorithm"] = AlgorithmName(a.algorithm);
    j["n_pairs"] = a.n_pairs;
    if (a.flagged) {
      j["flagged"] = a.note;
    } else {
      j["delta_length_pct"] = a.mean_delta_length_pct;
      j["delta_popularity_pct"] = a.mean_delta_popularity_pct;
      j["enrichment_gain_pct"] = a.mean_enrichment_gain_pct;
    }
    list.push_back(j);
  }
  return list;
}

Json StageEval(const PipelineConfig& config) {
  RequireInput(config.photos, "photos file");
  const auto lex = LoadLexicon(config);
  const auto graph = LoadRoadGraph(config);
  const auto closeness_graph = LoadClosenessGraph(config, lex);
  const auto mapping = MapPoisToVertices(closeness_graph.pois, graph);
  const auto coverage = ComputeCoverage(graph, closeness_graph, mapping, config.threads);
  const auto photos = PhotosFromTsv(ReadFile(config.photos), config.mode);
  const auto popularity = BuildPopularityIndex(photos, graph, config.popularity_radius_m);
  EvaluationInputs in{&graph, &closeness_graph, &mapping, &coverage, &popularity};

  Json s;
  s["stage"] = "eval";
  s["photos"] = photos.size();
  if (config.eval_setting == "i" || config.eval_setting == "both") {
    const auto report = RunSettingI(in, config.experiment);
    s["setting_i"] = Brief(report.aggregates);
    WriteArtifact(config, artifact::kReportICsv, AggregatesToCsv(report.aggregates), s);
    WriteArtifact(config, artifact::kReportIJsonl, RowsToJsonl(report.rows), s);
  }
  if (config.eval_setting == "ii" || config.eval_setting == "both") {
    const auto report = RunSettingII(in, config.experiment);
    s["setting_ii"] = Brief(report.aggregates);
    WriteArtifact(config, artifact::kReportIICsv, AggregatesToCsv(report.aggregates), s);
    WriteArtifact(config, artifact::kReportIIJsonl, RowsToJsonl(report.rows), s);
  }
  return s;
}

Json StageAll(const PipelineConfig& config) {
  Json s;
  s["stage"] = "all";
  Json stages = Json::array();
  for (auto* fn : {&StageExtract, &StageFeatures, &StageTrain, &StageScore, &StageEnrich}) stages.push_back(fn(config));
  if (config.route_source && config.route_target) {
    stages.push_back(StageRoute(config));
  } else {
    LogInfo("no route.source/route.target configured; route stage skipped");
  }
  if (!config.photos.empty()) {
    stages.push_back(StageEval(config));
  } else {
    LogInfo("no photos configured; eval stage skipped");
  }
  s["stages"] = stages;
  return s;
}

}  // namespace

const std::vector<std::string>& StageNames() {
  static const std::vector<std::string> names{"gen-fixture", "extract", "features", "train", "score",
                                              "enrich",      "route",   "eval",     "all"};
  return names;
}

Json RunStage(const PipelineConfig& config, std::string_view stage) {
  config.Validate();
  if (stage == "gen-fixture") return StageGenFixture(config);
  if (stage == "extract") return StageExtract(config);
  if (stage == "features") return StageFeatures(config);
  if (stage == "train") return StageTrain(config);
  if (stage == "score") return StageScore(config);
  if (stage == "enrich") return StageEnrich(config);
  if (stage == "route") return StageRoute(config);
  if (stage == "eval") return StageEval(config);
  if (stage == "all") return StageAll(config);
  throw Error(ErrorCode::kConfig, "unknown stage: " + std::string(stage));
}

}  // namespace kepath
