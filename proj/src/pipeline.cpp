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

#include "drcpo/pipeline.hpp"

#include <chrono>

#include "drcpo/baseline_aug.hpp"
#include "drcpo/error.hpp"

namespace drcpo {

namespace {

enum StreamTag : std::uint64_t { kSelect = 1, kConstruct = 2, kPlace = 3, kGlobal = 4, kGts = 5 };

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Frame showcase(const std::string& id, const std::array<std::vector<PlacementCandidate>, 3>& constructed) {
  Frame f;
  f.frame_id = id;
  for (ObjectClass c : kAllClasses) {
    const auto& list = constructed[class_index(c)];
    for (std::size_t slot = 0; slot < list.size(); ++slot) {
      const Pose pose{3.0 + 6.0 * static_cast<double>(slot), -8.0 + 8.0 * static_cast<double>(class_index(c)),
                      list[slot].source_cz, 0.0};
      f.objects.push_back(from_canonical(list[slot].object, pose));
    }
  }
  return f;
}

void fill_counts(const Frame& frame, FrameStats& stats) {
  stats.counts = {0, 0, 0};
  for (const auto& obj : frame.objects) ++stats.counts[class_index(obj.cls)];
  stats.total_points = total_points(frame);
}

Frame augment_drcpo(const Frame& frame, const GtDatabase& db, const PipelineConfig& config,
                    std::uint64_t seed, const StageSink& sink, FrameStats& stats) {
  Stopwatch clock;
  std::array<std::vector<PlacementCandidate>, 3> constructed;
  Rng select(derive_seed(seed, kSelect));
  for (ObjectClass c : kAllClasses) {
    const auto& ids = db.ids_of(c);
    if (ids.empty()) continue;
    const std::uint32_t n = config.placement.count(c);
    for (std::uint32_t slot = 0; slot < n; ++slot) {
      const std::uint32_t src = ids[select.index(ids.size())];
      Rng rng(derive_seed(seed, kConstruct, (class_index(c) << 32) | slot));
      try {
        auto built = construct_whole_body(src, db, config.construction, rng);
        constructed[class_index(c)].push_back({std::move(built.object), db.objects[src].pose.z});
        ++stats.constructed[class_index(c)];
      } catch (const Error&) {
        ++stats.dropped_objects;
      }
    }
  }
  stats.construction_ms = clock.lap_ms();
  if (sink) sink(Stage::kConstructed, showcase(frame.frame_id, constructed));

  Rng place_rng(derive_seed(seed, kPlace));
  clock.lap_ms();
  PlacementResult placed = place_all(frame, constructed, config.placement, place_rng);
  stats.placement_ms = clock.lap_ms();
  stats.rejected = placed.rejected;
  if (sink) sink(Stage::kPlaced, placed.frame);

  std::vector<char> drop(placed.frame.objects.size(), 0);
  for (std::size_t i : placed.placed) {
    try {
      SHprResult r = s_hpr(placed.frame.objects[i], config.shpr);
      if (r.empty) {
        drop[i] = 1;
        ++stats.dropped_objects;
      } else {
        placed.frame.objects[i] = std::move(r.object);
      }
    } catch (const Error&) {
      drop[i] = 1;
      ++stats.dropped_objects;
    }
  }
  Frame occluded;
  occluded.frame_id = placed.frame.frame_id;
  occluded.background = std::move(placed.frame.background);
  for (std::size_t i = 0; i < placed.frame.objects.size(); ++i) {
    if (!drop[i]) occluded.objects.push_back(std::move(placed.frame.objects[i]));
  }
  stats.shpr_ms = clock.lap_ms();
  if (sink) sink(Stage::kSHpr, occluded);

  EHprResult e = e_hpr(occluded, config.ehpr);
  stats.ehpr_ms = clock.lap_ms();
  stats.deleted_labels = e.deleted_labels;
  if (sink) sink(Stage::kEHpr, e.frame);

  if (config.drcpo_global_augment) {
    Rng g(derive_seed(seed, kGlobal));
    return global_augment(e.frame, g, config.gda);
  }
  return std::move(e.frame);
}

}  // namespace

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kRaw: return "raw";
    case Stage::kConstructed: return "constructed";
    case Stage::kPlaced: return "placed";
    case Stage::kSHpr: return "shpr";
    case Stage::kEHpr: return "ehpr";
  }
  return "?";
}

std::uint64_t frame_seed(std::uint64_t master_seed, std::string_view frame_id) {
  return hash64(master_seed, frame_id);
}

std::pair<Frame, FrameStats> augment_frame(const Frame& frame, const GtDatabase& db,
                                           const PipelineConfig& config, std::uint64_t seed,
                                           const StageSink& sink) {
  FrameStats stats;
  if (sink) sink(Stage::kRaw, frame);
  Frame out;
  switch (config.mode) {
    case Mode::kNone:
      out = frame;
      break;
    case Mode::kCda: {
      Rng gts_rng(derive_seed(seed, kGts));
      GtsResult gts = gts_sample(frame, db, gts_rng, config.cda_counts);
      Rng g(derive_seed(seed, kGlobal));
      out = global_augment(gts.frame, g, config.gda);
      break;
    }
    case Mode::kDrcpo:
      out = augment_drcpo(frame, db, config, seed, sink, stats);
      break;
  }
  fill_counts(out, stats);
  return {std::move(out), stats};
}

std::vector<float> encode_points(const Frame& frame) {
  std::vector<float> out;
  out.reserve(total_points(frame) * 4);
  for (const Point& p : flatten(frame)) {
    out.push_back(static_cast<float>(p.x));
    out.push_back(static_cast<float>(p.y));
    out.push_back(static_cast<float>(p.z));
    out.push_back(static_cast<float>(p.r));
  }
  return out;
}

BufferResult augment_buffers(std::span<const float> points, std::span<const Label> labels,
                             std::string_view frame_id, const GtDatabase& db,
                             const PipelineConfig& config, std::uint64_t master_seed) {
  if (points.size() % 4 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "point array must have 4 columns");
  }
  if (config.mode == Mode::kNone) {
    return {std::vector<float>(points.begin(), points.end()), std::vector<Label>(labels.begin(), labels.end())};
  }
  PointCloud cloud;
  cloud.reserve(points.size() / 4);
  for (std::size_t i = 0; i < points.size(); i += 4) {
    cloud.push_back({points[i], points[i + 1], points[i + 2], points[i + 3]});
  }
  const Frame frame = split_frame(cloud, labels, std::string(frame_id));
  auto [out, stats] = augment_frame(frame, db, config, frame_seed(master_seed, frame_id));
  return {encode_points(out), frame_labels(out)};
}

}  // namespace drcpo
