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

#include "drcpo/convex_hull.hpp"
#include "drcpo/kitti_io.hpp"

namespace drcpo {

/// Hidden point removal parameters: flip radius and viewpoint.
struct HprParams {
  double radius = 100000.0;
  Vec3 viewpoint{};
  double jitter = 1e-7;
};

/// Reflects each point along its ray from `viewpoint` to distance
/// 2R - |p - C|. Throws kPointAtViewpoint for points within 1e-9 of the
/// viewpoint and kPointBeyondRadius for points farther than R.
std::vector<Vec3> spherical_flip(std::span<const Point> points, const Vec3& viewpoint, double radius);

/// Indices (ascending) of the points whose flipped image is a vertex of the
/// hull of the flipped set plus the viewpoint. Exact duplicates share one
/// visibility decision.
std::vector<std::uint32_t> hpr_visible(std::span<const Point> points, const HprParams& params);

/// Per-object self occlusion.
struct SHprConfig {
  std::array<double, 3> radius_multiplier = {200.0, 200.0, 200.0};  // times box diagonal, per class
  Vec3 lidar_origin{};
};

struct SHprResult {
  LabeledObject object;
  bool empty = false;  // every point was removed; callers drop the object
};

SHprResult s_hpr(const LabeledObject& placed, const SHprConfig& config = {});

/// Whole-frame external occlusion.
struct EHprParams {
  double radius = 100000.0;
  double z = 0.0;
  std::uint32_t min_points_per_label = 5;
  double jitter = 1e-7;
};

struct EHprResult {
  Frame frame;
  std::uint32_t deleted_labels = 0;
};

/// Runs one visibility pass over background and object points together from
/// (0, 0, z). Labels left with fewer than min_points_per_label points are
/// removed together with those points. Points at the viewpoint or beyond the
/// radius are treated as hidden.
EHprResult e_hpr(const Frame& frame, const EHprParams& params = {});

}  // namespace drcpo
