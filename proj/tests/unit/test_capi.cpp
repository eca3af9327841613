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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "kepath/kepath.h"

namespace fs = std::filesystem;

namespace {

std::string Run(kep_pipeline* p, const char* stage) {
  char* out = nullptr;
  const kep_status st = kep_pipeline_run(p, stage, &out);
  REQUIRE_MESSAGE(st == KEP_OK, kep_last_error());
  REQUIRE(out != nullptr);
  std::string s(out);
  kep_string_free(out);
  return s;
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::string(kep_version()).size() > 0);
  CHECK(std::string(kep_status_string(KEP_OK)) == "ok");
  CHECK(std::string(kep_status_string(KEP_ERR_NO_PATH)).size() > 0);
  CHECK(kep_set_log_level(KEP_LOG_ERROR) == KEP_OK);
}

TEST_CASE("distance") {
  double d = 0.0;
  CHECK(kep_distance(1, 0, 0, 3, 4, &d) == KEP_OK);
  CHECK(d == 5.0);
  CHECK(kep_distance(0, 0, 0, 0, 1, &d) == KEP_OK);
  CHECK(d == doctest::Approx(111194.93).epsilon(1e-6));
  CHECK(kep_distance(0, 91, 0, 0, 0, &d) == KEP_ERR_COORDINATE_OUT_OF_BOUNDS);
  CHECK(std::string(kep_last_error()).size() > 0);
  CHECK(kep_distance(1, 0, 0, 1, 1, nullptr) == KEP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("pipeline handle") {
  CHECK(kep_pipeline_create(nullptr) == KEP_ERR_INVALID_ARGUMENT);
  kep_pipeline* p = nullptr;
  REQUIRE(kep_pipeline_create(&p) == KEP_OK);
  CHECK(kep_pipeline_set(p, "no_such_key", "1") == KEP_ERR_CONFIG);
  CHECK(kep_pipeline_set(p, "alpha", "0.5") == KEP_OK);
  CHECK(kep_pipeline_load_manifest(p, "/nonexistent/manifest.toml") == KEP_ERR_CONFIG);
  char* out = nullptr;
  CHECK(kep_pipeline_run(p, "extract", &out) == KEP_ERR_CONFIG);
  CHECK(out == nullptr);
  CHECK(kep_pipeline_run(nullptr, "extract", &out) == KEP_ERR_INVALID_ARGUMENT);

  const auto dir = fs::temp_directory_path() / "kepath_test_capi";
  fs::remove_all(dir);
  REQUIRE(kep_pipeline_set(p, "fixture_dir", dir.c_str()) == KEP_OK);
  const auto gen = Run(p, "gen-fixture");
  CHECK(gen.find("\"vertices\": 2500") != std::string::npos);

  kep_pipeline* q = nullptr;
  REQUIRE(kep_pipeline_create(&q) == KEP_OK);
  REQUIRE(kep_pipeline_load_manifest(q, (dir / "manifest.toml").c_str()) == KEP_OK);
  Run(q, "extract");
  Run(q, "features");
  const auto train = Run(q, "train");
  CHECK(train.find("\"near\"") != std::string::npos);

  kep_mixture* m = nullptr;
  const auto models = (dir / "run" / "models.json").string();
  CHECK(kep_mixture_load(models.c_str(), "in", &m) == KEP_ERR_INVALID_ARGUMENT);
  REQUIRE(kep_mixture_load(models.c_str(), "near", &m) == KEP_OK);
  std::size_t k = 0;
  CHECK(kep_mixture_component_count(m, &k) == KEP_OK);
  CHECK(k >= 1);
  double density = -1.0;
  CHECK(kep_mixture_density(m, 300.0, 45.0, &density) == KEP_OK);
  CHECK(density >= 0.0);
  CHECK(std::isfinite(density));
  kep_mixture_destroy(m);
  kep_mixture_destroy(nullptr);

  kep_pipeline_destroy(q);
  kep_pipeline_destroy(p);
  kep_pipeline_destroy(nullptr);
  fs::remove_all(dir);
}
