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
#include <string>
#include <string_view>

#include "evaluation/evaluation.hpp"
#include "geo/geo.hpp"
#include "mixture/mixture.hpp"

namespace kepath {

struct FixtureConfig {
  std::size_t rows = 50;
  std::size_t cols = 50;
  double spacing_m = 100.0;
  std::size_t corridor_pois = 40;
  std::size_t scattered_pois = 20;
  std::size_t background_photos = 4000;
  double photo_sigma_m = 30.0;
};

// Everything a pipeline stage needs. Loaded from a key = value manifest;
// individual keys can be overridden afterwards with Set().
struct PipelineConfig {
  std::filesystem::path gazetteer;
  std::filesystem::path corpus;
  std::filesystem::path relations;  // optional, built-in lexicon otherwise
  std::filesystem::path verbs;      // optional
  std::filesystem::path nodes;
  std::filesystem::path edges;
  std::filesystem::path photos;
  std::filesystem::path out_dir = "kepath_out";
  std::filesystem::path fixture_dir;  // gen-fixture target, defaults to out_dir

  DistanceMode mode = DistanceMode::kGeodesic;
  bool directed = false;
  double alpha = 1.0;
  double beta = kDefaultDetourFactor;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t min_samples = 5;
  double popularity_radius_m = kDefaultPopularityRadius;

  EmConfig em;
  ExperimentConfig experiment;
  std::string eval_setting = "both";  // i | ii | both

  std::optional<VertexId> route_source;
  std::optional<VertexId> route_target;
  std::string route_algorithm = "all";
  bool route_geojson = false;

  FixtureConfig fixture;

  // Unknown keys and malformed values throw ErrorCode::kConfig. Relative paths
  // are resolved against `base`.
  void Set(std::string_view key, std::string_view value, const std::filesystem::path& base = {});
  // Checks the numeric invariants; file existence is checked per stage.
  void Validate() const;
};

// Manifest syntax: `key = value` lines, '#' comments, optional `[section]`
// headers that prefix following keys with "section.". Values may be quoted.
PipelineConfig ParseManifest(std::string_view text, const std::filesystem::path& base = {});
PipelineConfig LoadManifest(const std::filesystem::path& path);
void ApplyManifest(PipelineConfig& config, std::string_view text, const std::filesystem::path& base);

}  // namespace kepath
