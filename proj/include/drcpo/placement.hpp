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
#include <optional>
#include <span>
#include <vector>

#include "drcpo/kitti_io.hpp"
#include "drcpo/rng.hpp"

namespace drcpo {

struct PlacementConfig {
  double x_min = 0.0;
  double x_max = 70.4;
  double y_min = -40.0;
  double y_max = 40.0;
  double rot_min = -kPi;
  double rot_max = kPi;
  std::array<std::uint32_t, 3> objects_per_class = {10, 10, 10};
  std::uint32_t max_attempts = 30;

  std::uint32_t count(ObjectClass c) const { return objects_per_class[class_index(c)]; }
  void validate() const;
};

/// x, y and heading drawn uniformly from the configured ranges; z is the
/// source object's original center height.
Pose sample_pose(Rng& rng, const PlacementConfig& config, double source_cz);

/// A whole-body object in canonical pose plus the height it was observed at.
struct PlacementCandidate {
  LabeledObject object;
  double source_cz = 0.0;
};

/// Samples up to max_attempts poses and returns the object moved to the
/// first one whose BEV box clears every box in `occupied`; nullopt if none.
std::optional<LabeledObject> try_place(std::span<const BoundingBox> occupied,
                                       const PlacementCandidate& candidate,
                                       const PlacementConfig& config, Rng& rng);

struct PlacementResult {
  Frame frame;
  std::vector<std::size_t> placed;  // indices into frame.objects
  std::array<std::uint32_t, 3> rejected = {0, 0, 0};
};

/// Places each class list in Car, Pedestrian, Cyclist order, dropping
/// rejections. Background points falling inside an accepted box are removed so
/// the frame stays a partition.
PlacementResult place_all(const Frame& frame,
                          const std::array<std::vector<PlacementCandidate>, 3>& constructed,
                          const PlacementConfig& config, Rng& rng);

/// Removes background points inside `box`.
void clear_background(Frame& frame, const BoundingBox& box);

}  // namespace drcpo
