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

#include <string_view>

namespace kepath {

inline constexpr double kEarthRadiusMeters = 6371000.0;

// In geodesic mode `lat`/`lon` are WGS84 degrees. In planar mode they carry
// northing/easting in meters (lat = y, lon = x), which is how the synthetic
// fixtures are laid out.
struct Coord {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

enum class DistanceMode { kGeodesic, kPlanar };

DistanceMode ParseDistanceMode(std::string_view name);
const char* DistanceModeName(DistanceMode mode);

bool InLatLonBounds(const Coord& c);

// Haversine great-circle distance in meters.
double GeodesicDistance(const Coord& a, const Coord& b);
double PlanarDistance(const Coord& a, const Coord& b);
double Distance(DistanceMode mode, const Coord& a, const Coord& b);

// Initial bearing from a to b in degrees, clockwise from north, in [0, 360).
// Throws ErrorCode::kUndefinedBearing when a == b.
double GeodesicBearing(const Coord& a, const Coord& b);
double PlanarBearing(const Coord& a, const Coord& b);
double Bearing(DistanceMode mode, const Coord& a, const Coord& b);

}  // namespace kepath
