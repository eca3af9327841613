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

#include "geo/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "common/error.hpp"

namespace kepath {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double NormalizeDegrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative value can round back up to exactly 360.
  if (r >= 360.0) r = 0.0;
  return r;
}

}  // namespace

DistanceMode ParseDistanceMode(std::string_view name) {
  if (name == "geodesic") return DistanceMode::kGeodesic;
  if (name == "planar") return DistanceMode::kPlanar;
  throw Error(ErrorCode::kConfig, "unknown distance mode '" + std::string(name) +
                                      "' (expected geodesic|planar)");
}

const char* DistanceModeName(DistanceMode mode) {
  return mode == DistanceMode::kGeodesic ? "geodesic" : "planar";
}

bool InLatLonBounds(const Coord& c) {
  return c.lat >= -90.0 && c.lat <= 90.0 && c.lon >= -180.0 && c.lon <= 180.0;
}

double GeodesicDistance(const Coord& a, const Coord& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(h));
}

double PlanarDistance(const Coord& a, const Coord& b) {
  return std::hypot(b.lon - a.lon, b.lat - a.lat);
}

double Distance(DistanceMode mode, const Coord& a, const Coord& b) {
  return mode == DistanceMode::kGeodesic ? GeodesicDistance(a, b) : PlanarDistance(a, b);
}

double GeodesicBearing(const Coord& a, const Coord& b) {
  if (a == b) throw Error(ErrorCode::kUndefinedBearing, "bearing undefined for identical points");
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double y = std::sin(dlambda) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
  return NormalizeDegrees(std::atan2(y, x) / kDegToRad);
}

double PlanarBearing(const Coord& a, const Coord& b) {
  if (a == b) throw Error(ErrorCode::kUndefinedBearing, "bearing undefined for identical points");
  // atan2(east, north) measures clockwise from the +y axis.
  return NormalizeDegrees(std::atan2(b.lon - a.lon, b.lat - a.lat) / kDegToRad);
}

double Bearing(DistanceMode mode, const Coord& a, const Coord& b) {
  return mode == DistanceMode::kGeodesic ? GeodesicBearing(a, b) : PlanarBearing(a, b);
}

}  // namespace kepath
