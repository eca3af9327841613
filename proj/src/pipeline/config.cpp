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

#include "pipeline/config.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "common/error.hpp"
#include "common/io.hpp"

namespace kepath {
namespace {

std::string Unquote(std::string_view v) {
  v = Trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

std::vector<std::string> SplitList(std::string_view v) {
  v = Trim(v);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    auto comma = v.find(',', start);
    if (comma == std::string_view::npos) comma = v.size();
    auto item = Unquote(v.substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

double ToDouble(std::string_view key, std::string_view v) {
  try {
    return ParseDouble(Unquote(v), key, 0);
  } catch (const Error&) {
    throw Error(ErrorCode::kConfig, std::string(key) + ": not a number: " + std::string(v));
  }
}

std::int64_t ToInt(std::string_view key, std::string_view v) {
  try {
    return ParseInt(Unquote(v), key, 0);
  } catch (const Error&) {
    throw Error(ErrorCode::kConfig, std::string(key) + ": not an integer: " + std::string(v));
  }
}

std::size_t ToCount(std::string_view key, std::string_view v) {
  const auto n = ToInt(key, v);
  if (n < 0) throw Error(ErrorCode::kConfig, std::string(key) + " must be non-negative");
  return static_cast<std::size_t>(n);
}

bool ToBool(std::string_view key, std::string_view v) {
  const auto s = Unquote(v);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorCode::kConfig, std::string(key) + ": expected true or false");
}

// "0.1-0.2", "0.1:0.2", or percent as in the report labels ("10-20").
FractionRange ToRange(std::string_view key, std::string_view v) {
  const auto s = Unquote(v);
  const auto sep = s.find_first_of("-:", 1);
  if (sep == std::string::npos) throw Error(ErrorCode::kConfig, std::string(key) + ": expected lo-hi, got " + s);
  FractionRange r{ToDouble(key, s.substr(0, sep)), ToDouble(key, s.substr(sep + 1))};
  if (r.hi > 1.0) {
    r.lo /= 100.0;
    r.hi /= 100.0;
  }
  return r;
}

}  // namespace

void PipelineConfig::Set(std::string_view key_in, std::string_view value, const std::filesystem::path& base) {
  const std::string key(Trim(key_in));
  auto path = [&](std::filesystem::path& dst) {
    std::filesystem::path p = Unquote(value);
    dst = (p.is_relative() && !base.empty() && !p.empty()) ? base / p : p;
  };
  using Setter = std::function<void()>;
  const std::map<std::string, Setter> setters{
      {"gazetteer", [&] { path(gazetteer); }},
      {"corpus", [&] { path(corpus); }},
      {"relations", [&] { path(relations); }},
      {"verbs", [&] { path(verbs); }},
      {"nodes", [&] { path(nodes); }},
      {"edges", [&] { path(edges); }},
      {"photos", [&] { path(photos); }},
      {"out_dir", [&] { path(out_dir); }},
      {"fixture_dir", [&] { path(fixture_dir); }},
      {"mode",
       [&] {
         try {
           mode = ParseDistanceMode(Unquote(value));
         } catch (const Error& e) {
           throw Error(ErrorCode::kConfig, e.what());
         }
       }},
      {"directed", [&] { directed = ToBool(key, value); }},
      {"alpha", [&] { alpha = ToDouble(key, value); }},
      {"beta",
       [&] {
         beta = ToDouble(key, value);
         experiment.beta = beta;
       }},
      {"seed",
       [&] {
         seed = static_cast<std::uint64_t>(ToInt(key, value));
         em.seed = seed;
         experiment.seed = seed;
       }},
      {"threads",
       [&] {
         threads = static_cast<unsigned>(std::max<std::size_t>(1, ToCount(key, value)));
         experiment.threads = threads;
       }},
      {"min_samples", [&] { min_samples = ToCount(key, value); }},
      {"popularity_radius", [&] { popularity_radius_m = ToDouble(key, value); }},
      {"em.max_components", [&] { em.max_components = ToCount(key, value); }},
      {"em.max_iterations", [&] { em.max_iterations = ToCount(key, value); }},
      {"em.rel_tolerance", [&] { em.rel_tolerance = ToDouble(key, value); }},
      {"em.covariance_floor", [&] { em.covariance_floor = ToDouble(key, value); }},
      {"eval.setting", [&] { eval_setting = Unquote(value); }},
      {"eval.n_pairs", [&] { experiment.n_pairs = ToCount(key, value); }},
      {"eval.alphas",
       [&] {
         experiment.alphas.clear();
         for (const auto& a : SplitList(value)) experiment.alphas.push_back(ToDouble(key, a));
       }},
      {"eval.range", [&] { experiment.setting_i_range = ToRange(key, value); }},
      {"eval.brackets",
       [&] {
         experiment.brackets.clear();
         for (const auto& b : SplitList(value)) experiment.brackets.push_back(ToRange(key, b));
       }},
      {"eval.setting_ii_alpha", [&] { experiment.setting_ii_alpha = ToDouble(key, value); }},
      {"eval.max_draws", [&] { experiment.max_draws = ToCount(key, value); }},
      {"route.source", [&] { route_source = ToInt(key, value); }},
      {"route.target", [&] { route_target = ToInt(key, value); }},
      {"route.algorithm", [&] { route_algorithm = Unquote(value); }},
      {"route.geojson", [&] { route_geojson = ToBool(key, value); }},
      {"fixture.rows", [&] { fixture.rows = ToCount(key, value); }},
      {"fixture.cols", [&] { fixture.cols = ToCount(key, value); }},
      {"fixture.spacing", [&] { fixture.spacing_m = ToDouble(key, value); }},
      {"fixture.corridor_pois", [&] { fixture.corridor_pois = ToCount(key, value); }},
      {"fixture.scattered_pois", [&] { fixture.scattered_pois = ToCount(key, value); }},
      {"fixture.background_photos", [&] { fixture.background_photos = ToCount(key, value); }},
      {"fixture.photo_sigma", [&] { fixture.photo_sigma_m = ToDouble(key, value); }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) throw Error(ErrorCode::kConfig, "unknown configuration key: " + key);
  it->second();
}

void PipelineConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kConfig, "alpha must lie in [0, 1]");
  if (!(beta > 1.0)) throw Error(ErrorCode::kConfig, "beta must exceed 1");
  if (!(popularity_radius_m > 0.0)) throw Error(ErrorCode::kConfig, "popularity_radius must be positive");
  if (em.max_components == 0 || em.max_iterations == 0) throw Error(ErrorCode::kConfig, "em limits must be positive");
  if (!(em.rel_tolerance > 0.0) || !(em.covariance_floor > 0.0)) {
    throw Error(ErrorCode::kConfig, "em tolerance and covariance floor must be positive");
  }
  if (min_samples == 0) throw Error(ErrorCode::kConfig, "min_samples must be positive");
  if (eval_setting != "i" && eval_setting != "ii" && eval_setting != "both") {
    throw Error(ErrorCode::kConfig, "eval.setting must be i, ii or both");
  }
  if (route_algorithm != "all") ParseAlgorithm(route_algorithm);
  if (out_dir.empty()) throw Error(ErrorCode::kConfig, "out_dir is empty");
  experiment.Validate();
}

void ApplyManifest(PipelineConfig& config, std::string_view text, const std::filesystem::path& base) {
  std::string section;
  const auto lines = SplitLines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = Trim(lines[n]);
    if (IsSkippableLine(line)) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::kConfig, "manifest line " + std::to_string(n + 1) + ": bad section");
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, "manifest line " + std::to_string(n + 1) + ": expected key = value");
    }
    std::string key(Trim(line.substr(0, eq)));
    auto value = Trim(line.substr(eq + 1));
    // Trailing comments outside quotes.
    std::size_t from = 0;
    if (!value.empty() && (value.front() == '"' || value.front() == '\'')) {
      const auto close = value.find(value.front(), 1);
      if (close != std::string_view::npos) from = close;
    }
    const auto hash = value.find(" #", from);
    if (hash != std::string_view::npos) value = Trim(value.substr(0, hash));
    if (!section.empty() && section != "paths" && section != "pipeline") key = section + "." + key;
    config.Set(key, value, base);
  }
}

PipelineConfig ParseManifest(std::string_view text, const std::filesystem::path& base) {
  PipelineConfig config;
  ApplyManifest(config, text, base);
  return config;
}

PipelineConfig LoadManifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kConfig, "manifest not found: " + path.string());
  return ParseManifest(ReadFile(path), path.parent_path());
}

}  // namespace kepath
