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

#include <chrono>

#include "drcpo/error.hpp"
#include "drcpo/rng.hpp"
#include "oracles.hpp"

using namespace drcpo;

TEST_CASE("oracle hull on small solids") {
  const std::vector<Vec3> tet = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK(oracle::brute_hull_vertices(tet) == std::vector<std::uint32_t>{0, 1, 2, 3});

  std::vector<Vec3> cube;
  for (int i = 0; i < 8; ++i) cube.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  cube.push_back({0.5, 0.5, 0.5});
  const auto v = oracle::brute_hull_vertices(cube);
  CHECK(v == std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5, 6, 7});

  std::vector<Vec3> many(301, Vec3{0, 0, 0});
  CHECK_THROWS_AS(oracle::brute_hull_vertices(many), Error);
}

TEST_CASE("oracle orientation") {
  CHECK(oracle::exact_orientation({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.3, 0.3, 0}) == 0);
  const int up = oracle::exact_orientation({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.3, 0.3, 1e-300});
  const int down = oracle::exact_orientation({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.3, 0.3, -1e-300});
  CHECK(up != 0);
  CHECK(up == -down);
}

TEST_CASE("oracle angular shadow keeps the nearest point per bin") {
  const std::vector<Point> pts = {{10, 0, 0, 0}, {5, 0, 0, 0}, {0, 10, 0, 0}};
  CHECK(oracle::angular_shadow_visible(pts, {0, 0, 0}, 256, 128) == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("oracle bev overlap") {
  const BoundingBox a{0, 0, 0, 4, 2, 1.5, 0};
  CHECK(oracle::sampled_bev_overlap(a, a));
  CHECK(oracle::sampled_bev_overlap(a, {3.9, 0, 0, 4, 2, 1.5, 0.3}));
  CHECK_FALSE(oracle::sampled_bev_overlap(a, {10, 0, 0, 4, 2, 1.5, 0}));
}

TEST_CASE("oracle candidate ranking on hand-built databases") {
  GtDatabase db;
  db.k = 4;
  db.source_frames = {"f"};
  for (ObjectClass c : kAllClasses) db.class_maxima[class_index(c)].assign(db.grid(c).size(), 1);
  auto add = [&](double d0) {
    DbObject o;
    o.object.cls = ObjectClass::kCar;
    o.object.box = {0, 0, 0, 4, 2, 1.5, 0};
    o.densities.assign(16, 1.0);
    o.densities[0] = d0;
    db.objects.push_back(o);
  };
  add(0.0);
  add(0.25);
  db.finalize();
  CHECK(oracle::brute_candidate_ranking(db, 0, 4) == std::vector<std::uint32_t>{1});
  CHECK(oracle::brute_candidate_ranking(db, 1, 4) == std::vector<std::uint32_t>{0});

  // Equal similarity; the one denser in object 0's empty cell wins.
  add(0.75);
  db.finalize();
  CHECK(oracle::brute_candidate_ranking(db, 0, 4) == std::vector<std::uint32_t>{2, 1});
}

TEST_CASE("oracle hull runtime at 200 points") {
  Rng rng(3);
  std::vector<Vec3> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = oracle::brute_hull_vertices(pts);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("200-point oracle hull: " << s << " s, " << v.size() << " vertices");
  CHECK(s < 10.0);
  CHECK(v.size() > 4);
}
