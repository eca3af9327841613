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

#include "kepath/kepath.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <string>

#include "common/error.hpp"
#include "common/io.hpp"
#include "common/log.hpp"
#include "geo/geo.hpp"
#include "mixture/mixture.hpp"
#include "pipeline/config.hpp"
#include "pipeline/stages.hpp"

struct kep_pipeline {
  kepath::PipelineConfig config;
};

struct kep_mixture {
  kepath::RelationModel model;
};

namespace {

thread_local std::string g_last_error;

kep_status Fail(kep_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating library exceptions into status codes.
template <typename Fn>
kep_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return KEP_OK;
  } catch (const kepath::Error& e) {
    return Fail(static_cast<kep_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(KEP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(KEP_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(KEP_ERR_INTERNAL, "unknown failure");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* kep_version(void) { return "0.1.0"; }

const char* kep_status_string(kep_status status) {
  if (status == KEP_OK) return "ok";
  if (status < KEP_ERR_INVALID_ARGUMENT || status > KEP_ERR_INTERNAL) return "unknown status";
  return kepath::ErrorCodeName(static_cast<kepath::ErrorCode>(static_cast<int>(status)));
}

const char* kep_last_error(void) { return g_last_error.c_str(); }

kep_status kep_set_log_level(kep_log_level level) {
  if (level < KEP_LOG_DEBUG || level > KEP_LOG_OFF) return Fail(KEP_ERR_INVALID_ARGUMENT, "unknown log level");
  kepath::SetLogLevel(static_cast<kepath::LogLevel>(static_cast<int>(level)));
  return KEP_OK;
}

kep_status kep_pipeline_create(kep_pipeline** out) {
  if (out == nullptr) return Fail(KEP_ERR_INVALID_ARGUMENT, "null output handle");
  *out = nullptr;
  return Guard([&] { *out = new kep_pipeline(); });
}

void kep_pipeline_destroy(kep_pipeline* pipeline) { delete pipeline; }

kep_status kep_pipeline_load_manifest(kep_pipeline* pipeline, const char* path) {
  if (pipeline == nullptr || path == nullptr) return Fail(KEP_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    const std::filesystem::path p(path);
    if (!std::filesystem::exists(p)) throw kepath::Error(kepath::ErrorCode::kConfig, "manifest not found: " + p.string());
    // Apply to a copy so a bad manifest leaves the handle untouched.
    auto config = pipeline->config;
    kepath::ApplyManifest(config, kepath::ReadFile(p), p.parent_path());
    pipeline->config = std::move(config);
  });
}

kep_status kep_pipeline_set(kep_pipeline* pipeline, const char* key, const char* value) {
  if (pipeline == nullptr || key == nullptr || value == nullptr) return Fail(KEP_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    auto config = pipeline->config;
    config.Set(key, value);
    pipeline->config = std::move(config);
  });
}

kep_status kep_pipeline_run(kep_pipeline* pipeline, const char* stage, char** summary_json) {
  if (summary_json != nullptr) *summary_json = nullptr;
  if (pipeline == nullptr || stage == nullptr) return Fail(KEP_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    const auto summary = kepath::RunStage(pipeline->config, stage);
    if (summary_json != nullptr) *summary_json = CopyString(summary.dump(2));
  });
}

void kep_string_free(char* s) { std::free(s); }

kep_status kep_mixture_load(const char* models_path, const char* relation, kep_mixture** out) {
  if (out == nullptr || models_path == nullptr || relation == nullptr) {
    return Fail(KEP_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&] {
    const auto bundle = kepath::ModelsFromJson(kepath::ReadFile(models_path));
    for (const auto& m : bundle.models) {
      if (m.relation == relation) {
        *out = new kep_mixture{m};
        return;
      }
    }
    throw kepath::Error(kepath::ErrorCode::kInvalidArgument, std::string("no model for relation '") + relation + "'");
  });
}

void kep_mixture_destroy(kep_mixture* mixture) { delete mixture; }

kep_status kep_mixture_density(const kep_mixture* mixture, double distance_m, double orientation_deg, double* out) {
  if (mixture == nullptr || out == nullptr) return Fail(KEP_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] { *out = mixture->model.Density({distance_m, orientation_deg}); });
}

kep_status kep_mixture_component_count(const kep_mixture* mixture, size_t* out) {
  if (mixture == nullptr || out == nullptr) return Fail(KEP_ERR_INVALID_ARGUMENT, "null argument");
  *out = mixture->model.mixture.size();
  return KEP_OK;
}

kep_status kep_distance(int planar, double lat1, double lon1, double lat2, double lon2, double* out) {
  if (out == nullptr) return Fail(KEP_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    const auto mode = planar ? kepath::DistanceMode::kPlanar : kepath::DistanceMode::kGeodesic;
    if (!planar && (!kepath::InLatLonBounds({lat1, lon1}) || !kepath::InLatLonBounds({lat2, lon2}))) {
      throw kepath::Error(kepath::ErrorCode::kCoordinateOutOfBounds, "coordinate out of bounds");
    }
    *out = kepath::Distance(mode, {lat1, lon1}, {lat2, lon2});
  });
}

}  // extern "C"
