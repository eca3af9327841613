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

#include <algorithm>
#include <cmath>

namespace kepath {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  static Sym2 Identity() { return {1.0, 0.0, 1.0}; }
  static Sym2 Outer(Vec2 v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

  double det() const { return xx * yy - xy * xy; }

  Sym2 Inverse() const {
    const double d = det();
    return {yy / d, -xy / d, xx / d};
  }

  // v^T M v
  double Quadratic(Vec2 v) const { return xx * v.x * v.x + 2.0 * xy * v.x * v.y + yy * v.y * v.y; }

  // Eigenvalues, smaller first.
  void Eigenvalues(double* lo, double* hi) const {
    const double mean = 0.5 * (xx + yy);
    const double r = std::hypot(0.5 * (xx - yy), xy);
    *lo = mean - r;
    *hi = mean + r;
  }

  friend Sym2 operator+(Sym2 a, Sym2 b) { return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy}; }
  friend Sym2 operator*(double s, Sym2 a) { return {s * a.xx, s * a.xy, s * a.yy}; }
  friend bool operator==(const Sym2&, const Sym2&) = default;
};

// Raises every eigenvalue below `floor` to `floor`, keeping eigenvectors.
inline Sym2 FloorEigenvalues(Sym2 m, double floor) {
  double lo = 0.0;
  double hi = 0.0;
  m.Eigenvalues(&lo, &hi);
  if (lo >= floor) return m;
  const double new_lo = std::max(lo, floor);
  const double new_hi = std::max(hi, floor);
  // Eigenvector of the larger eigenvalue.
  double vx = m.xy;
  double vy = hi - m.xx;
  double norm = std::hypot(vx, vy);
  if (norm < 1e-300) {
    vx = hi - m.yy;
    vy = m.xy;
    norm = std::hypot(vx, vy);
  }
  if (norm < 1e-300) {
    vx = 1.0;
    vy = 0.0;
    norm = 1.0;
  }
  vx /= norm;
  vy /= norm;
  // M = hi * v v^T + lo * u u^T with u = (-vy, vx).
  return {new_hi * vx * vx + new_lo * vy * vy, (new_hi - new_lo) * vx * vy,
          new_hi * vy * vy + new_lo * vx * vx};
}

}  // namespace kepath
