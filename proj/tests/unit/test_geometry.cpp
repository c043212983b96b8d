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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "drcpo/error.hpp"
#include "drcpo/geometry.hpp"
#include "drcpo/rng.hpp"
#include "oracles.hpp"

using namespace drcpo;

namespace {

LabeledObject random_object(Rng& rng) {
  LabeledObject obj;
  obj.cls = static_cast<ObjectClass>(rng.index(3));
  obj.box = {rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-3, 1), rng.uniform(0.5, 5),
             rng.uniform(0.5, 3), rng.uniform(1, 2), normalize_angle(rng.uniform(-10, 10))};
  for (int i = 0; i < 20; ++i) {
    const double u = rng.uniform(-0.5, 0.5) * obj.box.l, v = rng.uniform(-0.5, 0.5) * obj.box.w;
    const double c = std::cos(obj.box.theta), s = std::sin(obj.box.theta);
    obj.points.push_back({obj.box.cx + u * c - v * s, obj.box.cy + u * s + v * c,
                          obj.box.cz + rng.uniform(-0.5, 0.5) * obj.box.h, rng.uniform01()});
  }
  return obj;
}

double max_error(const LabeledObject& a, const LabeledObject& b) {
  double e = std::max({std::abs(a.box.cx - b.box.cx), std::abs(a.box.cy - b.box.cy), std::abs(a.box.cz - b.box.cz),
                       std::abs(normalize_angle(a.box.theta - b.box.theta))});
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    e = std::max({e, std::abs(a.points[i].x - b.points[i].x), std::abs(a.points[i].y - b.points[i].y),
                  std::abs(a.points[i].z - b.points[i].z)});
  }
  return e;
}

}  // namespace

TEST_CASE("rotate_z quarter turn, identity and half turn") {
  const PointCloud one = {{1, 0, 0, 0.7}};
  const auto q = rotate_z(one, kPi / 2);
  CHECK(q[0].x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(q[0].y == doctest::Approx(1.0));
  CHECK(q[0].r == 0.7);

  const PointCloud pts = {{1.5, -2, 3, 0.1}, {0, 0, 0, 1}};
  CHECK(rotate_z(pts, 0.0) == pts);

  const auto h = rotate_z(PointCloud{{1, 1, 0, 0.2}}, kPi);
  CHECK(std::abs(h[0].x + 1) < 1e-12);
  CHECK(std::abs(h[0].y + 1) < 1e-12);
}

TEST_CASE("rotate_z by a then -a is identity") {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const Point p{rng.uniform(-80, 80), rng.uniform(-80, 80), rng.uniform(-3, 3), rng.uniform01()};
    const double a = rng.uniform(-10, 10);
    const Point back = rotate_z(rotate_z(PointCloud{p}, a), -a)[0];
    CHECK(std::abs(back.x - p.x) < 1e-12);
    CHECK(std::abs(back.y - p.y) < 1e-12);
    CHECK(back.z == p.z);
  }
}

TEST_CASE("normalize_angle maps into (-pi, pi]") {
  CHECK(normalize_angle(-kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double a = normalize_angle(rng.uniform(-100, 100));
    CHECK(a > -kPi);
    CHECK(a <= kPi);
  }
}

TEST_CASE("to_canonical centers the box and zeroes heading") {
  LabeledObject obj;
  obj.box = {5, -2, 1, 4, 2, 1.5, kPi / 2};
  obj.points = {{5, -2, 1, 0.4}};
  auto [c, pose] = to_canonical(obj);
  CHECK(c.box.cx == 0.0);
  CHECK(c.box.cy == 0.0);
  CHECK(c.box.cz == 0.0);
  CHECK(c.box.theta == 0.0);
  CHECK(std::abs(c.points[0].x) < 1e-12);
  CHECK(std::abs(c.points[0].y) < 1e-12);
  CHECK(std::abs(c.points[0].z) < 1e-12);
  CHECK(pose.x == 5.0);
  CHECK(pose.theta == doctest::Approx(kPi / 2));

  LabeledObject centered;
  centered.box = {0, 0, 0, 1, 1, 1, 0};
  centered.points = {{0.1, 0.2, 0.3, 0.5}};
  auto [same, identity] = to_canonical(centered);
  CHECK(same == centered);
  CHECK(identity == Pose{});
}

TEST_CASE("from_canonical translation and round trip") {
  LabeledObject obj;
  obj.box = {0, 0, 0, 2, 1, 1, 0};
  obj.points = {{0.5, 0.25, 0, 0.1}, {-0.5, 0, 0.2, 0.9}};
  CHECK(from_canonical(obj, Pose{}) == obj);
  const auto moved = from_canonical(obj, Pose{10, 0, 0, 0});
  CHECK(moved.points[0].x == 10.5);
  CHECK(moved.points[1].x == 9.5);
  CHECK(moved.box.cx == 10.0);

  Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const LabeledObject o = random_object(rng);
    auto [canonical, pose] = to_canonical(o);
    worst = std::max(worst, max_error(from_canonical(canonical, pose), o));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("mirror_x appends reflections") {
  const PointCloud p = {{1, 0.5, 0, 0.3}};
  const PointCloud m = mirror_x(p);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == Point{1, 0.5, 0, 0.3});
  CHECK(m[1] == Point{1, -0.5, 0, 0.3});
  const PointCloud on_plane = mirror_x(PointCloud{{1, 0, 0, 0.3}});
  CHECK(on_plane.size() == 2);
  CHECK(on_plane[0].x == on_plane[1].x);
  CHECK(on_plane[0].z == on_plane[1].z);
  Rng rng(4);
  PointCloud many;
  for (int i = 0; i < 37; ++i) many.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), 0, 0});
  CHECK(mirror_x(many).size() == 74);
}

TEST_CASE("box_similarity closed form") {
  const BoundingBox a{0, 0, 0, 4, 2, 2, 0};
  CHECK(box_similarity(a, a) == 1.0);
  CHECK(box_similarity(a, {0, 0, 0, 2, 2, 2, 0}) == 0.5);
  CHECK(box_similarity(a, {0, 0, 0, 4, 2, 1, 0}) == 0.5);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const BoundingBox x{0, 0, 0, rng.uniform(1, 5), rng.uniform(1, 3), rng.uniform(1, 2), 0};
    const BoundingBox y{0, 0, 0, rng.uniform(1, 5), rng.uniform(1, 3), rng.uniform(1, 2), 0};
    CHECK(box_similarity(x, y) == box_similarity(y, x));
    CHECK(box_similarity(x, y) <= 1.0);
    CHECK(box_similarity(x, y) > 0.0);
  }
  CHECK_THROWS_AS(box_similarity({1, 0, 0, 1, 1, 1, 0}, a), Error);
  CHECK_THROWS_AS(box_similarity(a, {0, 0, 0, 1, 1, 1, 0.1}), Error);
}

TEST_CASE("box_diagonal") {
  CHECK(box_diagonal({0, 0, 0, 3, 4, 0.0001, 0}) == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(box_diagonal({0, 0, 0, 1, 1, 1, 0}) == doctest::Approx(std::sqrt(3.0)));
  CHECK(box_diagonal({0, 0, 0, 2, 2, 1, 0}) == 3.0);
}

TEST_CASE("bev_overlap basic cases") {
  const BoundingBox a{0, 0, 0, 4, 2, 1.5, 0};
  CHECK(bev_overlap(a, a));
  CHECK_FALSE(bev_overlap(a, {100, 0, 0, 5, 5, 1, 0}));
  CHECK(bev_overlap(a, {3.9, 0, 0, 4, 2, 1, 0}));
  CHECK_FALSE(bev_overlap(a, {4.1, 0, 0, 4, 2, 1, 0}));
  // Heights do not matter.
  CHECK(bev_overlap(a, {0, 0, 10, 4, 2, 1, 0}));
}

TEST_CASE("bev_overlap agrees with sampling on random near-contact pairs") {
  Rng rng(6);
  int disagreements = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const BoundingBox a{0, 0, 0, 4, 2, 1, rng.uniform(-kPi, kPi)};
    // Rotated by pi/4 relative to each other half of the time.
    const double theta = i % 2 ? normalize_angle(a.theta + kPi / 4) : rng.uniform(-kPi, kPi);
    const double dir = rng.uniform(-kPi, kPi);
    const double dist = rng.uniform(1.5, 4.8);
    const BoundingBox b{dist * std::cos(dir), dist * std::sin(dir), 0, 4, 2, 1, theta};
    disagreements += bev_overlap(a, b) != oracle::sampled_bev_overlap(a, b, 64);
  }
  MESSAGE("disagreements: " << disagreements);
  CHECK(disagreements <= trials / 1000);
}

TEST_CASE("point_in_box slack") {
  const BoundingBox b{1, 1, 1, 2, 2, 2, kPi / 4};
  CHECK(point_in_box({1, 1, 1, 0}, b));
  CHECK_FALSE(point_in_box({1, 1, 2.1, 0}, b));
  CHECK(point_in_box({1, 1, 2.0 + 5e-7, 0}, b));
  CHECK_FALSE(point_in_box({1, 1, 2.0 + 5e-6, 0}, b));
  const BoxTest t(b);
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Point p{rng.uniform(-1, 3), rng.uniform(-1, 3), rng.uniform(-1, 3), 0};
    CHECK(t.contains(p) == point_in_box(p, b));
  }
}
