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

#include "drcpo/construction.hpp"
#include "drcpo/error.hpp"
#include "drcpo/placement.hpp"
#include "drcpo/synthetic.hpp"
#include "fixtures.hpp"

using namespace drcpo;

namespace {

PlacementCandidate candidate(ObjectClass cls, double l, double w, double h, Rng& rng) {
  PlacementCandidate c;
  c.object.cls = cls;
  c.object.box = {0, 0, 0, l, w, h, 0};
  c.object.points = fixtures::uniform_points(rng, 50, -l / 2, l / 2, -w / 2, w / 2, -h / 2, h / 2);
  c.source_cz = -0.9;
  return c;
}

std::array<std::vector<PlacementCandidate>, 3> ten_each(Rng& rng) {
  std::array<std::vector<PlacementCandidate>, 3> out;
  for (int i = 0; i < 10; ++i) {
    out[0].push_back(candidate(ObjectClass::kCar, 4.2, 1.8, 1.5, rng));
    out[1].push_back(candidate(ObjectClass::kPedestrian, 0.8, 0.6, 1.75, rng));
    out[2].push_back(candidate(ObjectClass::kCyclist, 1.8, 0.6, 1.7, rng));
  }
  return out;
}

}  // namespace

TEST_CASE("sample_pose ranges and degenerate ranges") {
  PlacementConfig c;
  c.x_min = c.x_max = 12.5;
  c.y_min = c.y_max = -3.0;
  c.rot_min = c.rot_max = 0.5;
  Rng rng(41);
  for (int i = 0; i < 10; ++i) CHECK(sample_pose(rng, c, 1.25) == Pose{12.5, -3.0, 1.25, 0.5});

  PlacementConfig narrow;
  narrow.rot_min = -0.25 * kPi;
  narrow.rot_max = 0.25 * kPi;
  for (int i = 0; i < 10000; ++i) {
    const Pose p = sample_pose(rng, narrow, 0.0);
    CHECK((p.theta >= -0.25 * kPi && p.theta <= 0.25 * kPi));
  }
}

TEST_CASE("sample_pose x is uniform on the default range") {
  Rng rng(42);
  const PlacementConfig c;
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) {
    const Pose p = sample_pose(rng, c, 0.0);
    CHECK((p.y >= -40.0 && p.y <= 40.0));
    xs.push_back(p.x);
  }
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  CHECK(mean >= 33.0);
  CHECK(mean <= 37.4);
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = xs[i] / 70.4;
    ks = std::max({ks, std::abs((i + 1) / n - f), std::abs(f - i / n)});
  }
  MESSAGE("KS statistic " << ks);
  CHECK(ks < 0.01);
}

TEST_CASE("try_place on an empty and a full frame") {
  Rng rng(43);
  const auto cand = candidate(ObjectClass::kCar, 4, 2, 1.5, rng);
  const PlacementConfig c;
  Rng a(5), b(5);
  const auto placed = try_place({}, cand, c, a);
  REQUIRE(placed.has_value());
  const Pose first = sample_pose(b, c, cand.source_cz);
  CHECK(placed->box.cx == first.x);
  CHECK(placed->box.cy == first.y);
  CHECK(placed->box.theta == first.theta);
  CHECK(placed->box.cz == cand.source_cz);
  CHECK(placed->points.size() == cand.object.points.size());

  const std::vector<BoundingBox> everything = {{35.2, 0, 0, 80, 90, 3, 0}};
  CHECK_FALSE(try_place(everything, cand, c, a).has_value());
}

TEST_CASE("place_all keeps boxes apart and the frame a partition") {
  Rng rng(44);
  const auto frames = synthetic_frames(10, 45);
  PlacementConfig config;
  double accepted[3] = {0, 0, 0};
  for (const Frame& f : frames) {
    const auto lists = ten_each(rng);
    const auto r = place_all(f, lists, config, rng);
    const auto& objs = r.frame.objects;
    CHECK(objs.size() == f.objects.size() + r.placed.size());
    for (std::size_t i = 0; i < objs.size(); ++i) {
      for (std::size_t j = i + 1; j < objs.size(); ++j) CHECK_FALSE(bev_overlap(objs[i].box, objs[j].box));
    }
    for (std::size_t idx : r.placed) {
      const auto& b = objs[idx].box;
      CHECK((b.cx >= 0 && b.cx <= 70.4 && b.cy >= -40 && b.cy <= 40));
      accepted[class_index(objs[idx].cls)] += 1;
      for (const Point& p : r.frame.background) CHECK_FALSE(point_in_box(p, b));
      for (const Point& p : objs[idx].points) CHECK(point_in_box(p, b, 1e-6));
    }
    // Placement order: Car, Pedestrian, Cyclist.
    for (std::size_t k = 1; k < r.placed.size(); ++k) {
      CHECK(objs[r.placed[k - 1]].cls <= objs[r.placed[k]].cls);
    }
  }
  for (double a : accepted) CHECK(a / frames.size() >= 9.0);
}

TEST_CASE("place_all with nothing to place and determinism") {
  const Frame f = synthetic_frames(1, 46)[0];
  Rng rng(47);
  const auto none = place_all(f, {}, PlacementConfig{}, rng);
  CHECK(none.frame == f);
  CHECK(none.placed.empty());

  Rng src(48);
  const auto lists = ten_each(src);
  Rng a(49), b(49);
  const auto ra = place_all(f, lists, PlacementConfig{}, a);
  const auto rb = place_all(f, lists, PlacementConfig{}, b);
  CHECK(ra.frame == rb.frame);
  CHECK(ra.placed == rb.placed);
  CHECK(ra.rejected == rb.rejected);
}

TEST_CASE("shrinking the range does not increase acceptances on the fixtures") {
  Rng src(50);
  const auto lists = ten_each(src);
  const auto frames = synthetic_frames(5, 51);
  for (const Frame& f : frames) {
    std::size_t last = SIZE_MAX;
    for (double scale : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
      PlacementConfig c;
      c.x_max = 70.4 * scale;
      c.y_min = -40 * scale;
      c.y_max = 40 * scale;
      Rng rng(52);
      const std::size_t n = place_all(f, lists, c, rng).placed.size();
      CHECK(n <= last);
      last = n;
    }
  }
}

TEST_CASE("placement config validation") {
  PlacementConfig c;
  CHECK_NOTHROW(c.validate());
  c.x_min = 10;
  c.x_max = 5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.max_attempts = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}
