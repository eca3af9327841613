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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pipeline/config.hpp"

namespace kepath {

// Artifact file names inside out_dir.
namespace artifact {
inline constexpr const char* kTriplets = "triplets.jsonl";
inline constexpr const char* kPois = "pois.tsv";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kModels = "models.json";
inline constexpr const char* kClosenessGraph = "closeness_graph.jsonl";
inline constexpr const char* kEnriched = "enriched.tsv";
inline constexpr const char* kPoiVertices = "poi_vertices.tsv";
inline constexpr const char* kRoutes = "routes.jsonl";
inline constexpr const char* kRoutesGeoJson = "routes.geojson";
inline constexpr const char* kReportICsv = "report_setting_i.csv";
inline constexpr const char* kReportIJsonl = "report_setting_i.jsonl";
inline constexpr const char* kReportIICsv = "report_setting_ii.csv";
inline constexpr const char* kReportIIJsonl = "report_setting_ii.jsonl";
}  // namespace artifact

// gen-fixture, extract, features, train, score, enrich, route, eval, all.
const std::vector<std::string>& StageNames();

// Runs one stage and returns its summary. Missing inputs and bad settings
// throw ErrorCode::kConfig before any work is done.
nlohmann::ordered_json RunStage(const PipelineConfig& config, std::string_view stage);

}  // namespace kepath
