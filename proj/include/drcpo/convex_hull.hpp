// Copyright 2026 The drcpo Authors
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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace drcpo {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Sign of det[a-d; b-d; c-d]: positive when d lies below the plane through
/// a, b, c (counter-clockwise seen from above). Exact for all finite inputs.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

struct Hull {
  /// Outward-oriented triangles over input indices.
  std::vector<std::array<std::uint32_t, 3>> faces;
  /// Sorted indices of the points that are hull vertices.
  std::vector<std::uint32_t> vertices;
  /// True when the input was affinely degenerate and had to be perturbed.
  bool jittered = false;
};

/// 3D quickhull with exact orientation tests. Inputs with fewer than four
/// points return every point as a vertex; flat or collinear inputs are
/// perturbed by at most `jitter` per coordinate (deterministically) first.
Hull convex_hull(std::span<const Vec3> points, double jitter = 1e-7);

/// Shorthand for convex_hull(points, jitter).vertices.
std::vector<std::uint32_t> convex_hull_vertices(std::span<const Vec3> points, double jitter = 1e-7);

}  // namespace drcpo
