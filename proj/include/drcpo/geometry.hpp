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
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace drcpo {

/// One LiDAR return in the sensor frame (x forward, y left, z up). Stored in
/// double so that canonical-pose round trips stay exact to ~1e-12 m; values
/// read from KITTI binaries are float32 and survive the widening unchanged.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double r = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

using PointCloud = std::vector<Point>;

enum class ObjectClass : unsigned char { kCar = 0, kPedestrian = 1, kCyclist = 2 };

inline constexpr std::array<ObjectClass, 3> kAllClasses = {
    ObjectClass::kCar, ObjectClass::kPedestrian, ObjectClass::kCyclist};

inline constexpr std::size_t class_index(ObjectClass c) { return static_cast<std::size_t>(c); }

std::string_view class_name(ObjectClass c);
std::optional<ObjectClass> parse_class(std::string_view name);

/// Oriented 3D box: center, extents (l along heading, w, h) and heading about z.
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double l = 1.0;
  double w = 1.0;
  double h = 1.0;
  double theta = 0.0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct LabeledObject {
  PointCloud points;
  ObjectClass cls = ObjectClass::kCar;
  BoundingBox box;

  friend bool operator==(const LabeledObject&, const LabeledObject&) = default;
};

/// Rigid transform canonical -> world: rotate by theta about z, then translate.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double theta = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Point-in-box membership slack.
inline constexpr double kBoxEpsilon = 1e-6;

/// Maps any finite angle into (-pi, pi].
double normalize_angle(double angle);

PointCloud rotate_z(std::span<const Point> points, double angle);

/// Centers the object at the origin with zero heading. The returned pose maps
/// the canonical object back to where it came from.
std::pair<LabeledObject, Pose> to_canonical(const LabeledObject& obj);
LabeledObject from_canonical(const LabeledObject& obj, const Pose& pose);

/// Appends the reflection (x, -y, z, r) of every point.
PointCloud mirror_x(std::span<const Point> points);

/// Volume IoU of two centered, axis-aligned boxes. Throws kNonCanonicalBox if
/// either box is off-center or rotated by more than 1e-9.
double box_similarity(const BoundingBox& a, const BoundingBox& b);

/// Birds-eye-view rectangle intersection via separating axes. Touching
/// rectangles count as overlapping.
bool bev_overlap(const BoundingBox& a, const BoundingBox& b);

double box_diagonal(const BoundingBox& b);

bool point_in_box(const Point& p, const BoundingBox& b, double eps = kBoxEpsilon);

/// point_in_box against one box with its rotation precomputed.
class BoxTest {
 public:
  explicit BoxTest(const BoundingBox& b, double eps = kBoxEpsilon);
  bool contains(const Point& p) const {
    const double dx = p.x - cx_;
    const double dy = p.y - cy_;
    const double lx = c_ * dx + s_ * dy;
    const double ly = -s_ * dx + c_ * dy;
    return std::abs(lx) <= hl_ && std::abs(ly) <= hw_ && std::abs(p.z - cz_) <= hh_;
  }

 private:
  double cx_, cy_, cz_, c_, s_, hl_, hw_, hh_;
};

/// The four BEV corners, counter-clockwise.
std::array<std::array<double, 2>, 4> bev_corners(const BoundingBox& b);

}  // namespace drcpo
