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

#include <cmath>

#include "drcpo/baseline_aug.hpp"
#include "drcpo/synthetic.hpp"
#include "fixtures.hpp"

using namespace drcpo;

namespace {

Frame one_box_frame() {
  Frame f;
  f.frame_id = "g";
  f.background = {{1, 2, 3, 0.5}, {-4, 0.5, -1, 0.25}};
  LabeledObject o;
  o.cls = ObjectClass::kCar;
  o.box = {10, 5, -1, 4, 2, 1.5, 0.3};
  o.points = {{10, 5, -1, 0.9}, {11, 5.2, -0.5, 0.1}};
  f.objects.push_back(o);
  return f;
}

}  // namespace

TEST_CASE("global transform special cases") {
  const Frame f = one_box_frame();
  CHECK(apply_global_transform(f, {false, 1.0, 0.0}) == f);

  const Frame once = apply_global_transform(f, {true, 1.0, 0.0});
  CHECK(once.objects[0].box.cy == -5.0);
  CHECK(once.objects[0].box.theta == doctest::Approx(-0.3));
  CHECK(apply_global_transform(once, {true, 1.0, 0.0}).background == f.background);

  const Frame quarter = apply_global_transform(f, {false, 1.0, kPi / 2});
  CHECK(quarter.objects[0].box.cx == doctest::Approx(-5.0));
  CHECK(quarter.objects[0].box.cy == doctest::Approx(10.0));
  CHECK(quarter.objects[0].box.theta == doctest::Approx(0.3 + kPi / 2));

  const Frame scaled = apply_global_transform(f, {false, 1.05, 0.0});
  CHECK(scaled.objects[0].box.l == doctest::Approx(4.2));
  CHECK(scaled.background[0].z == doctest::Approx(3.15));
  CHECK(scaled.background[0].r == 0.5);
}

TEST_CASE("global_augment preserves membership and draws within ranges") {
  Rng rng(71);
  const Frame f = synthetic_frames(1, 72)[0];
  int flips = 0;
  for (int i = 0; i < 200; ++i) {
    const GlobalTransform t = sample_global_transform(rng, GlobalAugParams{});
    flips += t.flip;
    CHECK((t.scale >= 0.95 && t.scale <= 1.05));
    CHECK((t.angle >= -kPi / 4 && t.angle <= kPi / 4));
  }
  CHECK(flips > 60);
  CHECK(flips < 140);
  const Frame g = global_augment(f, rng);
  REQUIRE(g.objects.size() == f.objects.size());
  CHECK(g.background.size() == f.background.size());
  for (std::size_t i = 0; i < f.objects.size(); ++i) {
    CHECK(g.objects[i].points.size() == f.objects[i].points.size());
    CHECK(g.objects[i].cls == f.objects[i].cls);
    for (const Point& p : g.objects[i].points) CHECK(point_in_box(p, g.objects[i].box, 1e-6));
  }
}

TEST_CASE("gts_sample restores stored poses and avoids collisions") {
  const auto corpus = synthetic_frames(15, 73);
  const GtDatabase db = build_database(corpus, DatabaseConfig{});
  const Frame target = synthetic_frames(1, 74)[0];
  Rng rng(75);

  const auto none = gts_sample(target, db, rng, {0, 0, 0});
  CHECK(none.frame == target);

  const auto r = gts_sample(target, db, rng);
  const auto& objs = r.frame.objects;
  CHECK(objs.size() == target.objects.size() + r.added[0] + r.added[1] + r.added[2]);
  CHECK(r.added[0] <= 20);
  CHECK(r.added[1] <= 15);
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j = i + 1; j < objs.size(); ++j) CHECK_FALSE(bev_overlap(objs[i].box, objs[j].box));
  }
  // Every pasted box is exactly some database entry's recorded box.
  for (std::size_t i = target.objects.size(); i < objs.size(); ++i) {
    bool found = false;
    for (const DbObject& e : db.objects) {
      const auto restored = from_canonical(e.object, e.pose);
      found |= restored.box == objs[i].box && restored.points == objs[i].points;
    }
    CHECK(found);
    for (const Point& p : r.frame.background) CHECK_FALSE(point_in_box(p, objs[i].box));
  }

  // A frame holding an object exactly where every database entry was
  // recorded accepts nothing.
  Frame blocked = target;
  blocked.objects.clear();
  for (const DbObject& e : db.objects) {
    if (e.source_frame == 0) blocked.objects.push_back(from_canonical(e.object, e.pose));
  }
  GtDatabase only_first;
  for (const DbObject& e : db.objects) {
    if (e.source_frame == 0) only_first.objects.push_back(e);
  }
  only_first.finalize();
  const auto b = gts_sample(blocked, only_first, rng);
  CHECK(b.added == std::array<std::uint32_t, 3>{0, 0, 0});
}
