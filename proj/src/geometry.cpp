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

#include "drcpo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drcpo/error.hpp"

namespace drcpo {

std::string_view class_name(ObjectClass c) {
  switch (c) {
    case ObjectClass::kCar: return "Car";
    case ObjectClass::kPedestrian: return "Pedestrian";
    case ObjectClass::kCyclist: return "Cyclist";
  }
  return "Unknown";
}

std::optional<ObjectClass> parse_class(std::string_view name) {
  for (ObjectClass c : kAllClasses) {
    if (class_name(c) == name) return c;
  }
  return std::nullopt;
}

double normalize_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

PointCloud rotate_z(std::span<const Point> points, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  PointCloud out;
  out.reserve(points.size());
  for (const Point& p : points) {
    out.push_back({c * p.x - s * p.y, s * p.x + c * p.y, p.z, p.r});
  }
  return out;
}

std::pair<LabeledObject, Pose> to_canonical(const LabeledObject& obj) {
  const Pose pose{obj.box.cx, obj.box.cy, obj.box.cz, obj.box.theta};
  const double c = std::cos(-pose.theta);
  const double s = std::sin(-pose.theta);

  LabeledObject out;
  out.cls = obj.cls;
  out.box = obj.box;
  out.box.cx = out.box.cy = out.box.cz = 0.0;
  out.box.theta = 0.0;
  out.points.reserve(obj.points.size());
  for (const Point& p : obj.points) {
    const double dx = p.x - pose.x;
    const double dy = p.y - pose.y;
    out.points.push_back({c * dx - s * dy, s * dx + c * dy, p.z - pose.z, p.r});
  }
  return {std::move(out), pose};
}

LabeledObject from_canonical(const LabeledObject& obj, const Pose& pose) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);

  LabeledObject out;
  out.cls = obj.cls;
  out.box = obj.box;
  out.box.cx = c * obj.box.cx - s * obj.box.cy + pose.x;
  out.box.cy = s * obj.box.cx + c * obj.box.cy + pose.y;
  out.box.cz = obj.box.cz + pose.z;
  out.box.theta = normalize_angle(obj.box.theta + pose.theta);
  out.points.reserve(obj.points.size());
  for (const Point& p : obj.points) {
    out.points.push_back({c * p.x - s * p.y + pose.x, s * p.x + c * p.y + pose.y, p.z + pose.z, p.r});
  }
  return out;
}

PointCloud mirror_x(std::span<const Point> points) {
  PointCloud out(points.begin(), points.end());
  out.reserve(2 * points.size());
  for (const Point& p : points) out.push_back({p.x, -p.y, p.z, p.r});
  return out;
}

namespace {

bool is_canonical(const BoundingBox& b) {
  constexpr double kTol = 1e-9;
  return std::abs(b.cx) <= kTol && std::abs(b.cy) <= kTol && std::abs(b.cz) <= kTol &&
         std::abs(b.theta) <= kTol;
}

}  // namespace

double box_similarity(const BoundingBox& a, const BoundingBox& b) {
  if (!is_canonical(a) || !is_canonical(b)) {
    throw Error(ErrorCode::kNonCanonicalBox, "box_similarity requires centered, unrotated boxes");
  }
  const double inter = std::min(a.l, b.l) * std::min(a.w, b.w) * std::min(a.h, b.h);
  const double va = a.l * a.w * a.h;
  const double vb = b.l * b.w * b.h;
  return inter / (va + vb - inter);
}

std::array<std::array<double, 2>, 4> bev_corners(const BoundingBox& b) {
  const double c = std::cos(b.theta);
  const double s = std::sin(b.theta);
  const double hl = 0.5 * b.l;
  const double hw = 0.5 * b.w;
  constexpr std::array<std::array<double, 2>, 4> kSigns = {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  std::array<std::array<double, 2>, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double lx = kSigns[i][0] * hl;
    const double ly = kSigns[i][1] * hw;
    out[i] = {b.cx + c * lx - s * ly, b.cy + s * lx + c * ly};
  }
  return out;
}

bool bev_overlap(const BoundingBox& a, const BoundingBox& b) {
  const auto ca = bev_corners(a);
  const auto cb = bev_corners(b);
  const std::array<std::array<double, 2>, 4> axes = {{
      {std::cos(a.theta), std::sin(a.theta)},
      {-std::sin(a.theta), std::cos(a.theta)},
      {std::cos(b.theta), std::sin(b.theta)},
      {-std::sin(b.theta), std::cos(b.theta)},
  }};
  for (const auto& axis : axes) {
    double amin = std::numeric_limits<double>::infinity();
    double amax = -amin;
    double bmin = amin;
    double bmax = -amin;
    for (std::size_t i = 0; i < 4; ++i) {
      const double pa = ca[i][0] * axis[0] + ca[i][1] * axis[1];
      const double pb = cb[i][0] * axis[0] + cb[i][1] * axis[1];
      amin = std::min(amin, pa);
      amax = std::max(amax, pa);
      bmin = std::min(bmin, pb);
      bmax = std::max(bmax, pb);
    }
    if (amax < bmin || bmax < amin) return false;
  }
  return true;
}

double box_diagonal(const BoundingBox& b) { return std::sqrt(b.l * b.l + b.w * b.w + b.h * b.h); }

BoxTest::BoxTest(const BoundingBox& b, double eps)
    : cx_(b.cx),
      cy_(b.cy),
      cz_(b.cz),
      c_(std::cos(b.theta)),
      s_(std::sin(b.theta)),
      hl_(0.5 * b.l + eps),
      hw_(0.5 * b.w + eps),
      hh_(0.5 * b.h + eps) {}

bool point_in_box(const Point& p, const BoundingBox& b, double eps) { return BoxTest(b, eps).contains(p); }

}  // namespace drcpo
