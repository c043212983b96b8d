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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "drcpo/gt_database.hpp"
#include "drcpo/kitti_io.hpp"
#include "drcpo/rng.hpp"

namespace fixtures {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::string_view bytes);

/// n points uniform in the axis-aligned region, intensities uniform in [0, 1].
drcpo::PointCloud uniform_points(drcpo::Rng& rng, std::size_t n, double x0, double x1, double y0, double y1,
                                 double z0, double z1);

/// Wall of points on x = 5 (|y| <= 3, |z| <= 2, given spacing) as background
/// and a 1 m cube at x = 15 directly behind it, its front face sampled.
drcpo::Frame wall_scene(double spacing = 0.04);

/// 5 x 5 plate at x = 1 spanning y, z in [-1, 1] plus one point at (3, 0.01, 0.01), last.
std::vector<drcpo::Point> plate_scene();

/// Spherical shell of radius `r` around `center`, Fibonacci-sampled. With
/// front_only, only the part a sensor at the origin can see.
std::vector<drcpo::Point> shell(const drcpo::Point& center, double r, std::size_t n, bool front_only);

/// Which part of the canonical box an object of the half-object class fills.
enum class Half { kFront, kRear, kLeft, kRight };

/// Database of one class whose objects each fill one half of their box
/// (front, rear, left and right in turn) with uniform points.
drcpo::GtDatabase half_object_db(drcpo::ObjectClass cls, std::size_t n, std::uint64_t seed,
                                 std::uint32_t k = 400);

/// Database with hand-set densities and coarse box extents so that
/// similarity and score ties occur. Index built with `k`.
drcpo::GtDatabase ranking_fixture(std::uint64_t seed, std::size_t n, std::uint32_t k);

/// Synthetic database of `frames` generated frames.
drcpo::GtDatabase synthetic_db(std::size_t frames, std::uint64_t seed);

}  // namespace fixtures
