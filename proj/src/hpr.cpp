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

#include "drcpo/hpr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "drcpo/error.hpp"
#include "drcpo/rng.hpp"
#include "flat_set.hpp"

namespace drcpo {

namespace {

constexpr double kViewpointTolerance = 1e-9;

struct PointKey {
  double x = 0.0, y = 0.0, z = 0.0;
  bool operator==(const PointKey&) const = default;
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const noexcept {
    auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); };
    return static_cast<std::size_t>(mix64(bits(k.x) ^ mix64(bits(k.y) ^ mix64(bits(k.z)))));
  }
};

}  // namespace

std::vector<Vec3> spherical_flip(std::span<const Point> points, const Vec3& viewpoint, double radius) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    const double vx = p.x - viewpoint.x;
    const double vy = p.y - viewpoint.y;
    const double vz = p.z - viewpoint.z;
    const double norm = std::sqrt(vx * vx + vy * vy + vz * vz);
    if (norm < kViewpointTolerance) throw Error(ErrorCode::kPointAtViewpoint, "point coincides with viewpoint");
    if (norm > radius) {
      throw Error(ErrorCode::kPointBeyondRadius,
                  "point at distance " + std::to_string(norm) + " exceeds R=" + std::to_string(radius));
    }
    const double s = 2.0 * (radius - norm) / norm;
    out.push_back({p.x + s * vx, p.y + s * vy, p.z + s * vz});
  }
  return out;
}

std::vector<std::uint32_t> hpr_visible(std::span<const Point> points, const HprParams& params) {
  std::vector<Vec3> cloud = spherical_flip(points, params.viewpoint, params.radius);
  cloud.push_back(params.viewpoint);
  const auto vertices = convex_hull_vertices(cloud, params.jitter);

  std::vector<char> visible(points.size(), 0);
  for (std::uint32_t v : vertices) {
    if (v < points.size()) visible[v] = 1;
  }
  // At most one copy of a repeated point can be a hull vertex; its twins
  // inherit its visibility.
  detail::FlatSet<PointKey, PointKeyHash> seen(vertices.size());
  for (std::uint32_t v : vertices) {
    if (v < points.size()) seen.insert({points[v].x, points[v].y, points[v].z});
  }
  std::vector<std::uint32_t> out;
  out.reserve(vertices.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    if (visible[i] || seen.contains({points[i].x, points[i].y, points[i].z})) out.push_back(i);
  }
  return out;
}

SHprResult s_hpr(const LabeledObject& placed, const SHprConfig& config) {
  SHprResult result;
  result.object.cls = placed.cls;
  result.object.box = placed.box;
  if (placed.points.empty()) {
    result.empty = true;
    return result;
  }
  const HprParams params{config.radius_multiplier[class_index(placed.cls)] * box_diagonal(placed.box),
                         config.lidar_origin};
  const auto visible = hpr_visible(placed.points, params);
  result.object.points.reserve(visible.size());
  for (std::uint32_t i : visible) result.object.points.push_back(placed.points[i]);
  result.empty = result.object.points.empty();
  return result;
}

EHprResult e_hpr(const Frame& frame, const EHprParams& params) {
  const Vec3 viewpoint{0.0, 0.0, params.z};

  // Owner of each flattened point: -1 background, otherwise object index.
  PointCloud all;
  std::vector<std::int32_t> owner;
  std::vector<std::uint32_t> source;  // flattened position of each hull input
  const std::size_t n = total_points(frame);
  all.reserve(n);
  owner.reserve(n);
  auto admit = [&](const Point& p, std::int32_t who) {
    const double dx = p.x - viewpoint.x, dy = p.y - viewpoint.y, dz = p.z - viewpoint.z;
    const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    owner.push_back(who);
    if (d < kViewpointTolerance || d > params.radius) return;
    source.push_back(static_cast<std::uint32_t>(owner.size() - 1));
    all.push_back(p);
  };
  for (const Point& p : frame.background) admit(p, -1);
  for (std::size_t o = 0; o < frame.objects.size(); ++o) {
    for (const Point& p : frame.objects[o].points) admit(p, static_cast<std::int32_t>(o));
  }

  std::vector<char> keep(owner.size(), 0);
  for (std::uint32_t i : hpr_visible(all, {params.radius, viewpoint, params.jitter})) keep[source[i]] = 1;

  EHprResult result;
  result.frame.frame_id = frame.frame_id;
  std::size_t k = 0;
  for (const Point& p : frame.background) {
    if (keep[k++]) result.frame.background.push_back(p);
  }
  for (const LabeledObject& obj : frame.objects) {
    LabeledObject kept{{}, obj.cls, obj.box};
    for (const Point& p : obj.points) {
      if (keep[k++]) kept.points.push_back(p);
    }
    if (kept.points.size() < params.min_points_per_label) {
      ++result.deleted_labels;
      continue;
    }
    result.frame.objects.push_back(std::move(kept));
  }
  return result;
}

}  // namespace drcpo
