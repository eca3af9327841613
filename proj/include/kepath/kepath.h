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

#ifndef KEPATH_KEPATH_H_
#define KEPATH_KEPATH_H_

#include <stddef.h>

#if defined(_WIN32)
#define KEPATH_API __declspec(dllexport)
#else
#define KEPATH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kep_status {
  KEP_OK = 0,
  KEP_ERR_INVALID_ARGUMENT = 1,
  KEP_ERR_CONFIG = 2,
  KEP_ERR_IO = 3,
  KEP_ERR_PARSE = 4,
  KEP_ERR_COORDINATE_OUT_OF_BOUNDS = 5,
  KEP_ERR_DANGLING_EDGE = 6,
  KEP_ERR_NONPOSITIVE_LENGTH = 7,
  KEP_ERR_UNDEFINED_BEARING = 8,
  KEP_ERR_NO_PATH = 9,
  KEP_ERR_SAMPLING_EXHAUSTED = 10,
  KEP_ERR_DEGENERATE = 11,
  KEP_ERR_INTERNAL = 12
} kep_status;

typedef enum kep_log_level {
  KEP_LOG_DEBUG = 0,
  KEP_LOG_INFO = 1,
  KEP_LOG_WARNING = 2,
  KEP_LOG_ERROR = 3,
  KEP_LOG_OFF = 4
} kep_log_level;

typedef struct kep_pipeline kep_pipeline;
typedef struct kep_mixture kep_mixture;

KEPATH_API const char* kep_version(void);
KEPATH_API const char* kep_status_string(kep_status status);
/* Message of the last failed call on this thread; "" if none. */
KEPATH_API const char* kep_last_error(void);
KEPATH_API kep_status kep_set_log_level(kep_log_level level);

/* Pipeline configuration plus stage execution. */
KEPATH_API kep_status kep_pipeline_create(kep_pipeline** out);
KEPATH_API void kep_pipeline_destroy(kep_pipeline* pipeline);
/* Applies a manifest on top of the current settings. Relative paths resolve
   against the manifest's directory. */
KEPATH_API kep_status kep_pipeline_load_manifest(kep_pipeline* pipeline, const char* path);
/* Sets one manifest key, e.g. ("alpha", "0.4") or ("route.source", "12"). */
KEPATH_API kep_status kep_pipeline_set(kep_pipeline* pipeline, const char* key, const char* value);
/* Runs gen-fixture, extract, features, train, score, enrich, route, eval or
   all. On success *summary_json (if non-null) receives a JSON string owned by
   the caller; release it with kep_string_free. */
KEPATH_API kep_status kep_pipeline_run(kep_pipeline* pipeline, const char* stage, char** summary_json);
KEPATH_API void kep_string_free(char* s);

/* Trained relation densities read back from a models file. */
KEPATH_API kep_status kep_mixture_load(const char* models_path, const char* relation, kep_mixture** out);
KEPATH_API void kep_mixture_destroy(kep_mixture* mixture);
KEPATH_API kep_status kep_mixture_density(const kep_mixture* mixture, double distance_m, double orientation_deg,
                                          double* out);
KEPATH_API kep_status kep_mixture_component_count(const kep_mixture* mixture, size_t* out);

/* Straight-line distance in meters; planar != 0 treats (lat, lon) as (y, x). */
KEPATH_API kep_status kep_distance(int planar, double lat1, double lon1, double lat2, double lon2, double* out);

#ifdef __cplusplus
}
#endif

#endif  // KEPATH_KEPATH_H_
