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
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "drcpo/config.hpp"

namespace drcpo {

struct FrameStats {
  std::array<std::uint32_t, 3> counts = {0, 0, 0};  // output objects per class
  std::uint64_t total_points = 0;
  double construction_ms = 0.0;
  double placement_ms = 0.0;
  double shpr_ms = 0.0;
  double ehpr_ms = 0.0;
  std::array<std::uint32_t, 3> constructed = {0, 0, 0};
  std::array<std::uint32_t, 3> rejected = {0, 0, 0};
  std::uint32_t dropped_objects = 0;  // construction failures and empty s-HPR results
  std::uint32_t deleted_labels = 0;   // by e-HPR
};

enum class Stage { kRaw, kConstructed, kPlaced, kSHpr, kEHpr };

std::string_view stage_name(Stage s);

/// Receives intermediate frames. The constructed stage is a showcase frame
/// with the constructed objects laid out on a grid next to the origin.
using StageSink = std::function<void(Stage, const Frame&)>;

/// Seed of one frame: hash64(master, frame_id).
std::uint64_t frame_seed(std::uint64_t master_seed, std::string_view frame_id);

/// Augments one frame according to config.mode. Output depends only on the
/// arguments. Failures while building or occluding a single object drop that
/// object.
std::pair<Frame, FrameStats> augment_frame(const Frame& frame, const GtDatabase& db,
                                           const PipelineConfig& config, std::uint64_t frame_seed,
                                           const StageSink& sink = {});

/// Array interface: `points` is N x 4 row-major float32 (x, y, z, intensity).
/// Produces exactly what the augment command writes for the same frame:
/// the flattened float32 cloud and the label list.
struct BufferResult {
  std::vector<float> points;
  std::vector<Label> labels;
};

BufferResult augment_buffers(std::span<const float> points, std::span<const Label> labels,
                             std::string_view frame_id, const GtDatabase& db,
                             const PipelineConfig& config, std::uint64_t master_seed);

/// Flattened cloud of a frame as float32 quadruples.
std::vector<float> encode_points(const Frame& frame);

}  // namespace drcpo
