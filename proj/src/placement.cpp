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

#include "drcpo/placement.hpp"

#include <algorithm>

#include "drcpo/error.hpp"

namespace drcpo {

void PlacementConfig::validate() const {
  if (!(x_min <= x_max && y_min <= y_max && rot_min <= rot_max)) {
    throw Error(ErrorCode::kInvalidConfig, "placement ranges must satisfy min <= max");
  }
  if (max_attempts < 1) throw Error(ErrorCode::kInvalidConfig, "placement.max_attempts < 1");
}

Pose sample_pose(Rng& rng, const PlacementConfig& config, double source_cz) {
  Pose pose;
  pose.theta = normalize_angle(rng.uniform(config.rot_min, config.rot_max));
  pose.x = rng.uniform(config.x_min, config.x_max);
  pose.y = rng.uniform(config.y_min, config.y_max);
  pose.z = source_cz;
  return pose;
}

std::optional<LabeledObject> try_place(std::span<const BoundingBox> occupied,
                                       const PlacementCandidate& candidate,
                                       const PlacementConfig& config, Rng& rng) {
  const BoundingBox& canonical = candidate.object.box;
  for (std::uint32_t attempt = 0; attempt < config.max_attempts; ++attempt) {
    const Pose pose = sample_pose(rng, config, candidate.source_cz);
    BoundingBox box = canonical;
    box.cx = pose.x;
    box.cy = pose.y;
    box.cz = canonical.cz + pose.z;
    box.theta = pose.theta;
    const bool collides = std::any_of(occupied.begin(), occupied.end(),
                                      [&](const BoundingBox& b) { return bev_overlap(box, b); });
    if (!collides) return from_canonical(candidate.object, pose);
  }
  return std::nullopt;
}

void clear_background(Frame& frame, const BoundingBox& box) {
  const BoxTest test(box);
  std::erase_if(frame.background, [&](const Point& p) { return test.contains(p); });
}

PlacementResult place_all(const Frame& frame,
                          const std::array<std::vector<PlacementCandidate>, 3>& constructed,
                          const PlacementConfig& config, Rng& rng) {
  PlacementResult result{frame, {}, {}};
  std::vector<BoundingBox> occupied;
  occupied.reserve(frame.objects.size() + 32);
  for (const auto& obj : frame.objects) occupied.push_back(obj.box);

  for (ObjectClass c : kAllClasses) {
    for (const PlacementCandidate& candidate : constructed[class_index(c)]) {
      auto placed = try_place(occupied, candidate, config, rng);
      if (!placed) {
        ++result.rejected[class_index(c)];
        continue;
      }
      occupied.push_back(placed->box);
      clear_background(result.frame, placed->box);
      result.placed.push_back(result.frame.objects.size());
      result.frame.objects.push_back(std::move(*placed));
    }
  }
  return result;
}

}  // namespace drcpo
