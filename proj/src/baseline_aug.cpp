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

#include "drcpo/baseline_aug.hpp"

#include <algorithm>
#include <cmath>

#include "drcpo/placement.hpp"

namespace drcpo {

GlobalTransform sample_global_transform(Rng& rng, const GlobalAugParams& params) {
  GlobalTransform t;
  t.flip = rng.bernoulli(params.flip_probability);
  t.scale = rng.uniform(params.scale_min, params.scale_max);
  t.angle = rng.uniform(params.rot_min, params.rot_max);
  return t;
}

Frame apply_global_transform(const Frame& frame, const GlobalTransform& t) {
  const double c = std::cos(t.angle);
  const double s = std::sin(t.angle);
  const double fy = t.flip ? -1.0 : 1.0;
  auto move = [&](const Point& p) -> Point {
    const double x = p.x * t.scale;
    const double y = fy * p.y * t.scale;
    return {c * x - s * y, s * x + c * y, p.z * t.scale, p.r};
  };

  Frame out;
  out.frame_id = frame.frame_id;
  out.background.reserve(frame.background.size());
  for (const Point& p : frame.background) out.background.push_back(move(p));
  out.objects.reserve(frame.objects.size());
  for (const LabeledObject& obj : frame.objects) {
    LabeledObject moved;
    moved.cls = obj.cls;
    const Point center = move({obj.box.cx, obj.box.cy, obj.box.cz, 0.0});
    moved.box = {center.x, center.y, center.z, obj.box.l * t.scale, obj.box.w * t.scale,
                 obj.box.h * t.scale, normalize_angle(fy * obj.box.theta + t.angle)};
    moved.points.reserve(obj.points.size());
    for (const Point& p : obj.points) moved.points.push_back(move(p));
    out.objects.push_back(std::move(moved));
  }
  return out;
}

Frame global_augment(const Frame& frame, Rng& rng, const GlobalAugParams& params) {
  return apply_global_transform(frame, sample_global_transform(rng, params));
}

GtsResult gts_sample(const Frame& frame, const GtDatabase& db, Rng& rng,
                     const std::array<std::uint32_t, 3>& counts) {
  GtsResult result{frame, {}};
  std::vector<BoundingBox> occupied;
  for (const auto& obj : frame.objects) occupied.push_back(obj.box);

  for (ObjectClass c : kAllClasses) {
    std::vector<std::uint32_t> pool = db.ids_of(c);
    const std::size_t take = std::min<std::size_t>(counts[class_index(c)], pool.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
      const DbObject& entry = db.objects[pool[i]];
      LabeledObject restored = from_canonical(entry.object, entry.pose);
      const bool collides = std::any_of(occupied.begin(), occupied.end(), [&](const BoundingBox& b) {
        return bev_overlap(restored.box, b);
      });
      if (collides) continue;
      occupied.push_back(restored.box);
      clear_background(result.frame, restored.box);
      result.frame.objects.push_back(std::move(restored));
      ++result.added[class_index(c)];
    }
  }
  return result;
}

}  // namespace drcpo
