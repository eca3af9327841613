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
#include <string>

#include "network/graph.hpp"
#include "pipeline/config.hpp"

namespace kepath {

// A planar grid city with a diagonal corridor of densely mentioned,
// photogenic PoIs, a scatter of quieter PoIs, and the text that relates them.
struct FixtureBundle {
  std::string nodes_tsv;
  std::string edges_tsv;
  std::string gazetteer_tsv;
  std::string corpus_jsonl;
  std::string photos_tsv;
  std::string manifest;

  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t poi_count = 0;
  std::size_t corridor_pois = 0;
  std::size_t sentence_count = 0;
  std::size_t relation_mentions = 0;
  std::size_t photo_count = 0;
  VertexId route_source = 0;
  VertexId route_target = 0;
};

FixtureBundle BuildFixture(const FixtureConfig& config, std::uint64_t seed);

// Writes nodes.tsv, edges.tsv, gazetteer.tsv, corpus.jsonl, photos.tsv and
// manifest.toml into `dir`. The manifest points the pipeline at `dir`/run.
void WriteFixture(const FixtureBundle& bundle, const std::filesystem::path& dir);

}  // namespace kepath
