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
#include <filesystem>
#include <string>
#include <vector>

#include "drcpo/gt_database.hpp"
#include "drcpo/rng.hpp"

namespace drcpo {

/// Scene generator for benchmarks, tests and demos. Objects are noisy box
/// surfaces sampled only on the faces that face the sensor, with density
/// falling off with the square of the range.
struct SyntheticOptions {
  std::size_t total_points = 18000;
  std::array<std::uint32_t, 3> objects_per_class = {4, 1, 1};
  double ground_z = -1.73;
  double surface_density = 8000.0;  // points per m^2 at 1 m
  double noise = 0.02;              // m, pushed into the box
};

/// Random extents for a class.
BoundingBox synthetic_box(ObjectClass cls, Rng& rng, double ground_z = -1.73);

/// Scan of `box` as seen from the origin. All points lie inside the box.
LabeledObject synthetic_scan(ObjectClass cls, const BoundingBox& box, Rng& rng,
                             const SyntheticOptions& options = {});

Frame synthetic_frame(const std::string& frame_id, Rng& rng, const SyntheticOptions& options = {});

/// Frames "000000", "000001", ... seeded from `seed`.
std::vector<Frame> synthetic_frames(std::size_t count, std::uint64_t seed,
                                    const SyntheticOptions& options = {});

/// Writes velodyne/<id>.bin and label/<id>.txt under `dir`.
void write_corpus(const std::filesystem::path& dir, const std::vector<Frame>& frames);

}  // namespace drcpo
