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

// kepath: command-line driver over the C API.

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "kepath/kepath.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int ExitCodeFor(kep_status status) {
  if (status == KEP_OK) return 0;
  return status == KEP_ERR_CONFIG ? kExitUsage : kExitRuntime;
}

int Report(kep_status status, const char* what) {
  std::fprintf(stderr, "kepath: %s failed: %s (%s)\n", what, kep_last_error(), kep_status_string(status));
  return ExitCodeFor(status);
}

struct Overrides {
  std::vector<std::pair<std::string, std::string>> items;

  // Values stay text so the library parses every key the same way.
  void Add(const std::string& key, const std::optional<std::string>& value) {
    if (value) items.emplace_back(key, *value);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closeness-enriched routing pipeline"};
  app.require_subcommand(1);

  std::string manifest;
  std::vector<std::string> sets;
  std::optional<std::string> seed, mode, alpha, beta, threads, out_dir;
  bool verbose = false;
  bool quiet = false;
  app.add_option("--manifest", manifest, "Pipeline manifest (key = value)");
  app.add_option("--set", sets, "Override one manifest key, key=value")->take_all();
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--mode", mode, "Distance mode")->check(CLI::IsMember({"geodesic", "planar"}));
  app.add_option("--alpha", alpha, "Closeness scaling in [0, 1]");
  app.add_option("--beta", beta, "Ellipse detour factor (> 1)");
  app.add_option("--threads", threads, "Worker threads");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("-v,--verbose", verbose, "Log progress");
  app.add_flag("-q,--quiet", quiet, "Only log errors");

  auto* gen = app.add_subcommand("gen-fixture", "Write the synthetic city bundle");
  std::optional<std::string> fixture_dir;
  gen->add_option("--dir", fixture_dir, "Bundle directory (defaults to --out)");

  app.add_subcommand("extract", "Extract relation triplets from the corpus");
  app.add_subcommand("features", "Compute distance/orientation features");
  auto* train = app.add_subcommand("train", "Fit one mixture per relation");
  std::optional<std::string> min_samples, max_components;
  train->add_option("--min-samples", min_samples, "Minimum observations per relation");
  train->add_option("--max-components", max_components, "Mixture size cap");
  app.add_subcommand("score", "Build the weighted relationship graph");
  app.add_subcommand("enrich", "Write the enriched road network");

  auto* route = app.add_subcommand("route", "Route between two vertices");
  std::optional<std::string> source, target, alg;
  bool geojson = false;
  route->add_option("--source,-s", source, "Source vertex id");
  route->add_option("--target,-t", target, "Target vertex id");
  route->add_option("--alg", alg, "Algorithm")->check(CLI::IsMember({"all", "dij-g", "dij-g-star", "dij-h-star"}));
  route->add_flag("--geojson", geojson, "Also write routes.geojson");

  auto* eval = app.add_subcommand("eval", "Run the evaluation settings");
  std::optional<std::string> setting, pairs;
  eval->add_option("--setting", setting, "i, ii or both")->check(CLI::IsMember({"i", "ii", "both"}));
  eval->add_option("--pairs", pairs, "Pairs per parameter point");

  app.add_subcommand("all", "Run extract through eval");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  kep_set_log_level(verbose ? KEP_LOG_INFO : (quiet ? KEP_LOG_ERROR : KEP_LOG_WARNING));

  kep_pipeline* pipeline = nullptr;
  if (auto st = kep_pipeline_create(&pipeline); st != KEP_OK) return Report(st, "setup");
  struct Closer {
    kep_pipeline* p;
    ~Closer() { kep_pipeline_destroy(p); }
  } closer{pipeline};

  if (!manifest.empty()) {
    if (auto st = kep_pipeline_load_manifest(pipeline, manifest.c_str()); st != KEP_OK) return Report(st, "manifest");
  }

  Overrides o;
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "kepath: --set expects key=value, got '%s'\n", kv.c_str());
      return kExitUsage;
    }
    o.items.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  o.Add("seed", seed);
  o.Add("mode", mode);
  o.Add("alpha", alpha);
  o.Add("beta", beta);
  o.Add("threads", threads);
  o.Add("out_dir", out_dir);
  o.Add("fixture_dir", fixture_dir);
  o.Add("min_samples", min_samples);
  o.Add("em.max_components", max_components);
  o.Add("route.source", source);
  o.Add("route.target", target);
  o.Add("route.algorithm", alg);
  if (geojson) o.items.emplace_back("route.geojson", "true");
  o.Add("eval.setting", setting);
  o.Add("eval.n_pairs", pairs);
  for (const auto& [k, v] : o.items) {
    if (auto st = kep_pipeline_set(pipeline, k.c_str(), v.c_str()); st != KEP_OK) return Report(st, ("--" + k).c_str());
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  char* summary = nullptr;
  if (auto st = kep_pipeline_run(pipeline, stage.c_str(), &summary); st != KEP_OK) return Report(st, stage.c_str());
  std::printf("%s\n", summary);
  kep_string_free(summary);
  return 0;
}
