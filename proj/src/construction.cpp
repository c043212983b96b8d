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

#include "drcpo/construction.hpp"

#include <cmath>

#include "drcpo/error.hpp"
#include "flat_set.hpp"

namespace drcpo {

void ConstructionConfig::validate() const {
  if (!(whole_body_threshold > 0.0 && whole_body_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "construction.threshold must lie in (0, 1]");
  }
  if (max_iterations < 1) throw Error(ErrorCode::kInvalidConfig, "construction.max_iterations < 1");
  if (!(dedup_epsilon >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "construction.dedup_epsilon < 0");
}

double high_density_proportion(std::span<const double> densities) {
  double sum = 0.0;
  std::size_t nonempty = 0;
  for (double d : densities) {
    if (d > 0.0) {
      sum += d;
      ++nonempty;
    }
  }
  if (nonempty == 0 || densities.empty()) return 0.0;
  const double mean = sum / static_cast<double>(nonempty);
  std::size_t high = 0;
  for (double d : densities) {
    if (d >= mean - kDensityTolerance) ++high;
  }
  return static_cast<double>(high) / static_cast<double>(densities.size());
}

bool is_whole_body(std::span<const double> densities, double threshold) {
  const double proportion = high_density_proportion(densities);
  return proportion > 0.0 && proportion >= threshold;
}

namespace {

// Appends one candidate's cell points per cell; `counts`, when given, is kept
// equal to partition_counts(obj).
void append_candidate_points(LabeledObject& obj, const GtDatabase& db,
                             std::span<const std::uint32_t> candidates, Rng& rng,
                             std::vector<std::uint32_t>* counts = nullptr) {
  const PartitionGrid& grid = db.grid(obj.cls);
  const BoundingBox& box = obj.box;
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const std::uint32_t cand = candidates[rng.index(candidates.size())];
    const BoundingBox& cb = db.objects[cand].object.box;
    const double sx = obj.box.l / cb.l;
    const double sy = obj.box.w / cb.w;
    const double sz = obj.box.h / cb.h;
    for (const Point& p : db.partition_points(cand, cell)) {
      const Point q{p.x * sx, p.y * sy, p.z * sz, p.r};
      obj.points.push_back(q);
      if (counts) ++(*counts)[partition_index(q, box.l, box.w, box.h, grid)];
    }
  }
}

std::vector<double> densities_of(const LabeledObject& obj, std::span<const std::uint32_t> counts,
                                 const GtDatabase& db) {
  return partition_densities(counts, db.class_maxima[class_index(obj.cls)]);
}

}  // namespace

ComplementResult complement_step(const LabeledObject& obj, const GtDatabase& db,
                                 std::span<const std::uint32_t> candidates, Rng& rng) {
  ComplementResult result{obj, candidates.empty()};
  if (!result.no_candidates) append_candidate_points(result.object, db, candidates, rng);
  return result;
}

ConstructionResult construct_whole_body(std::uint32_t source_id, const GtDatabase& db,
                                        const ConstructionConfig& config, Rng& rng) {
  if (source_id >= db.objects.size()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown source object " + std::to_string(source_id));
  }
  ConstructionResult result;
  result.object = db.objects[source_id].object;
  LabeledObject& obj = result.object;
  if (obj.cls != ObjectClass::kPedestrian) obj.points = mirror_x(obj.points);

  const auto& candidates = db.index.candidates[source_id];
  std::vector<std::uint32_t> counts = partition_counts(obj, db.grid(obj.cls));
  std::vector<double> densities = densities_of(obj, counts, db);
  while (!is_whole_body(densities, config.whole_body_threshold) &&
         result.iterations < config.max_iterations) {
    if (candidates.empty()) {
      result.no_candidates = true;
      break;
    }
    append_candidate_points(obj, db, candidates, rng, &counts);
    ++result.iterations;
    densities = densities_of(obj, counts, db);
  }
  result.high_density_proportion = high_density_proportion(densities);
  result.whole_body = is_whole_body(densities, config.whole_body_threshold);
  obj.points = dedup_points(obj.points, config.dedup_epsilon);
  return result;
}

namespace {

struct Cell {
  std::int64_t x = 0, y = 0, z = 0;
  bool operator==(const Cell&) const = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    return static_cast<std::size_t>(
        mix64(static_cast<std::uint64_t>(c.x) ^ mix64(static_cast<std::uint64_t>(c.y) ^ mix64(static_cast<std::uint64_t>(c.z)))));
  }
};

}  // namespace

PointCloud dedup_points(std::span<const Point> points, double epsilon) {
  if (epsilon <= 0.0) return PointCloud(points.begin(), points.end());
  detail::FlatSet<Cell, CellHash> seen(points.size());
  PointCloud out;
  out.reserve(points.size());
  const double inv = 1.0 / epsilon;
  for (const Point& p : points) {
    const Cell c{static_cast<std::int64_t>(std::floor(p.x * inv)),
                 static_cast<std::int64_t>(std::floor(p.y * inv)),
                 static_cast<std::int64_t>(std::floor(p.z * inv))};
    if (seen.insert(c)) out.push_back(p);
  }
  return out;
}

}  // namespace drcpo
