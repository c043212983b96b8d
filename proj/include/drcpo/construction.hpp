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

#include <cstdint>
#include <span>

#include "drcpo/gt_database.hpp"
#include "drcpo/rng.hpp"

namespace drcpo {

struct ConstructionConfig {
  double whole_body_threshold = 0.85;
  std::uint32_t max_iterations = 20;
  double dedup_epsilon = 0.01;  // meters

  void validate() const;
};

/// Fraction of all partitions whose density is at least the mean over the
/// non-empty partitions. Zero when every partition is empty.
double high_density_proportion(std::span<const double> densities);

bool is_whole_body(std::span<const double> densities, double threshold);

struct ComplementResult {
  LabeledObject object;
  bool no_candidates = false;
};

/// One complementing pass: for every partition of the source grid, draws one
/// candidate uniformly from `candidates` and appends that candidate's points
/// from the same partition, rescaled per axis into the source box.
ComplementResult complement_step(const LabeledObject& obj, const GtDatabase& db,
                                 std::span<const std::uint32_t> candidates, Rng& rng);

struct ConstructionResult {
  LabeledObject object;  // canonical pose
  std::uint32_t iterations = 0;
  double high_density_proportion = 0.0;
  bool whole_body = false;
  bool no_candidates = false;
};

/// Mirrors (cars and cyclists), complements until the whole-body criterion
/// holds or the iteration cap is reached, then deduplicates on a voxel grid.
ConstructionResult construct_whole_body(std::uint32_t source_id, const GtDatabase& db,
                                        const ConstructionConfig& config, Rng& rng);

/// Keeps the first point of every occupied cubic cell of side `epsilon`.
PointCloud dedup_points(std::span<const Point> points, double epsilon);

}  // namespace drcpo
