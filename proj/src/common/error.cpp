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

#include "common/error.hpp"

namespace kepath {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kConfig: return "configuration error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kCoordinateOutOfBounds: return "coordinate out of bounds";
    case ErrorCode::kDanglingEdge: return "dangling edge";
    case ErrorCode::kNonpositiveLength: return "nonpositive edge length";
    case ErrorCode::kUndefinedBearing: return "undefined bearing";
    case ErrorCode::kNoPath: return "no path";
    case ErrorCode::kSamplingExhausted: return "sampling exhausted";
    case ErrorCode::kDegenerate: return "degenerate input";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

}  // namespace kepath
