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

#include "drcpo/gt_database.hpp"
#include "drcpo/rng.hpp"

namespace drcpo {

/// Global (whole-frame) augmentation ranges.
struct GlobalAugParams {
  double flip_probability = 0.5;
  double scale_min = 0.95;
  double scale_max = 1.05;
  double rot_min = -0.25 * kPi;
  double rot_max = 0.25 * kPi;
};

/// One concrete draw of the global augmentation.
struct GlobalTransform {
  bool flip = false;  // y -> -y
  double scale = 1.0;
  double angle = 0.0;
};

GlobalTransform sample_global_transform(Rng& rng, const GlobalAugParams& params);

/// Flip about the x axis, then scale, then rotate about z; boxes follow.
Frame apply_global_transform(const Frame& frame, const GlobalTransform& t);

Frame global_augment(const Frame& frame, Rng& rng, const GlobalAugParams& params = {});

struct GtsResult {
  Frame frame;
  std::array<std::uint32_t, 3> added = {0, 0, 0};
};

/// Ground-truth sampling: pastes database objects (drawn without replacement
/// per class) back at their recorded poses, skipping any whose box overlaps
/// an existing one in BEV.
GtsResult gts_sample(const Frame& frame, const GtDatabase& db, Rng& rng,
                     const std::array<std::uint32_t, 3>& counts = {20, 15, 15});

}  // namespace drcpo
