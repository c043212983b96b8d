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
#include <span>
#include <string>
#include <vector>

#include "drcpo/geometry.hpp"
#include "drcpo/kitti_io.hpp"

namespace drcpo {

/// Per-class subdivision of an object's box into nx * ny * nz cells.
struct PartitionGrid {
  std::uint32_t nx = 1;
  std::uint32_t ny = 1;
  std::uint32_t nz = 1;

  std::size_t size() const { return std::size_t{nx} * ny * nz; }
  friend bool operator==(const PartitionGrid&, const PartitionGrid&) = default;
};

/// Cars and cyclists are long, pedestrians tall.
inline constexpr std::array<PartitionGrid, 3> kDefaultGrids = {
    PartitionGrid{4, 2, 2}, PartitionGrid{2, 2, 4}, PartitionGrid{4, 2, 2}};

struct DatabaseConfig {
  std::uint32_t k = 400;
  std::array<PartitionGrid, 3> grids = kDefaultGrids;
  unsigned workers = 1;  // not persisted

  const PartitionGrid& grid(ObjectClass c) const { return grids[class_index(c)]; }
};

/// Densities closer than this to the mean count as equal to it.
inline constexpr double kDensityTolerance = 1e-12;

/// Cell of `p` for a box of the given extents centered at the origin; each axis
/// index is floor((p + e/2) / e * n) clamped to [0, n - 1].
std::size_t partition_index(const Point& p, double l, double w, double h, const PartitionGrid& grid);

std::vector<std::uint32_t> partition_counts(const LabeledObject& canonical, const PartitionGrid& grid);

/// count / max elementwise, clamped to 1; a zero maximum yields density 0.
std::vector<double> partition_densities(std::span<const std::uint32_t> counts,
                                        std::span<const std::uint32_t> maxima);

/// Partitions whose density is below the mean over the non-empty partitions.
/// An object with no points has every partition deficient.
std::vector<bool> deficient_partitions(std::span<const double> densities);

struct DbObject {
  LabeledObject object;  // canonical pose
  Pose pose;             // canonical -> original placement
  std::uint32_t source_frame = 0;
  std::vector<double> densities;

  friend bool operator==(const DbObject&, const DbObject&) = default;
};

/// Candidate ids per object id, best first.
struct CandidateIndex {
  std::vector<std::vector<std::uint32_t>> candidates;

  friend bool operator==(const CandidateIndex&, const CandidateIndex&) = default;
};

class GtDatabase {
 public:
  GtDatabase() = default;

  std::uint32_t k = 400;
  std::array<PartitionGrid, 3> grids = kDefaultGrids;
  std::vector<std::string> source_frames;
  std::vector<DbObject> objects;
  std::array<std::vector<std::uint32_t>, 3> class_maxima;
  CandidateIndex index;

  const PartitionGrid& grid(ObjectClass c) const { return grids[class_index(c)]; }
  const std::vector<std::uint32_t>& ids_of(ObjectClass c) const { return by_class_[class_index(c)]; }

  /// Points of object `id` falling in cell `cell` of its class grid.
  std::span<const Point> partition_points(std::uint32_t id, std::size_t cell) const;

  /// Rebuilds the lookup tables derived from `objects`. Must be called after
  /// the persisted fields are populated or modified.
  void finalize();

  friend bool operator==(const GtDatabase& a, const GtDatabase& b) {
    return a.k == b.k && a.grids == b.grids && a.source_frames == b.source_frames &&
           a.objects == b.objects && a.class_maxima == b.class_maxima && a.index == b.index;
  }

 private:
  std::array<std::vector<std::uint32_t>, 3> by_class_;
  // Per object: its points regrouped by cell, plus cell offsets.
  std::vector<PointCloud> bucketed_;
  std::vector<std::vector<std::uint32_t>> bucket_offsets_;
};

/// Ranks same-class candidates for every object: the 2K most similar boxes,
/// then the K of those densest in the object's deficient partitions.
/// Objects alone in their class get an empty list.
CandidateIndex index_candidates(const GtDatabase& db, std::uint32_t k, unsigned workers = 1);

/// Extracts, canonicalizes and indexes every labeled object with at least one
/// point. Throws kEmptyDatabase when nothing is extracted.
GtDatabase build_database(std::span<const Frame> frames, const DatabaseConfig& config);

void save_database(const GtDatabase& db, const std::filesystem::path& path);
GtDatabase load_database(const std::filesystem::path& path);
std::string serialize_database(const GtDatabase& db);
GtDatabase deserialize_database(std::string_view bytes);

}  // namespace drcpo
