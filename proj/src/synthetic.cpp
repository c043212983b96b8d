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

#include "drcpo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "drcpo/kitti_io.hpp"

namespace drcpo {

namespace {

double gaussian(Rng& rng) {
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

struct Face {
  std::array<double, 3> normal;  // canonical frame
  std::array<double, 3> center;
  std::array<double, 3> u, v;    // half-extent vectors spanning the face
};

std::vector<Face> faces_of(const BoundingBox& b) {
  const double l = b.l / 2, w = b.w / 2, h = b.h / 2;
  return {
      {{1, 0, 0}, {l, 0, 0}, {0, w, 0}, {0, 0, h}},
      {{-1, 0, 0}, {-l, 0, 0}, {0, w, 0}, {0, 0, h}},
      {{0, 1, 0}, {0, w, 0}, {l, 0, 0}, {0, 0, h}},
      {{0, -1, 0}, {0, -w, 0}, {l, 0, 0}, {0, 0, h}},
      {{0, 0, 1}, {0, 0, h}, {l, 0, 0}, {0, w, 0}},
  };
}

}  // namespace

BoundingBox synthetic_box(ObjectClass cls, Rng& rng, double ground_z) {
  BoundingBox b;
  switch (cls) {
    case ObjectClass::kCar:
      b.l = rng.uniform(3.6, 4.6);
      b.w = rng.uniform(1.5, 1.9);
      b.h = rng.uniform(1.4, 1.7);
      break;
    case ObjectClass::kPedestrian:
      b.l = rng.uniform(0.6, 0.9);
      b.w = rng.uniform(0.5, 0.7);
      b.h = rng.uniform(1.6, 1.9);
      break;
    case ObjectClass::kCyclist:
      b.l = rng.uniform(1.6, 1.9);
      b.w = rng.uniform(0.5, 0.7);
      b.h = rng.uniform(1.6, 1.8);
      break;
  }
  b.cz = ground_z + b.h / 2;
  return b;
}

LabeledObject synthetic_scan(ObjectClass cls, const BoundingBox& box, Rng& rng, const SyntheticOptions& options) {
  LabeledObject obj;
  obj.cls = cls;
  obj.box = box;
  const double c = std::cos(box.theta), s = std::sin(box.theta);
  // Sensor position in the canonical frame.
  const double ox = -(c * box.cx + s * box.cy);
  const double oy = -(-s * box.cx + c * box.cy);
  const double oz = -box.cz;
  const double range2 = std::max(1.0, box.cx * box.cx + box.cy * box.cy);
  for (const Face& f : faces_of(box)) {
    const double facing = f.normal[0] * (ox - f.center[0]) + f.normal[1] * (oy - f.center[1]) +
                          f.normal[2] * (oz - f.center[2]);
    if (facing <= 0.0) continue;
    const double area = 4.0 * std::hypot(f.u[0], f.u[1], f.u[2]) * std::hypot(f.v[0], f.v[1], f.v[2]);
    const auto n = static_cast<std::size_t>(area * options.surface_density / range2);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = rng.uniform(-1.0, 1.0), bb = rng.uniform(-1.0, 1.0);
      const double inset = 0.001 + std::abs(gaussian(rng)) * options.noise;
      double p[3];
      for (int k = 0; k < 3; ++k) p[k] = f.center[k] + a * f.u[k] + bb * f.v[k] - inset * f.normal[k];
      // Keep inside the box after the inset on neighbouring faces too.
      p[0] = std::clamp(p[0], -box.l / 2 + 0.001, box.l / 2 - 0.001);
      p[1] = std::clamp(p[1], -box.w / 2 + 0.001, box.w / 2 - 0.001);
      p[2] = std::clamp(p[2], -box.h / 2 + 0.001, box.h / 2 - 0.001);
      obj.points.push_back({c * p[0] - s * p[1] + box.cx, s * p[0] + c * p[1] + box.cy, p[2] + box.cz,
                            rng.uniform01()});
    }
  }
  return obj;
}

Frame synthetic_frame(const std::string& frame_id, Rng& rng, const SyntheticOptions& options) {
  Frame frame;
  frame.frame_id = frame_id;
  std::vector<BoundingBox> boxes;
  for (ObjectClass cls : kAllClasses) {
    for (std::uint32_t i = 0; i < options.objects_per_class[class_index(cls)]; ++i) {
      for (int attempt = 0; attempt < 50; ++attempt) {
        BoundingBox b = synthetic_box(cls, rng, options.ground_z);
        b.cx = rng.uniform(5.0, 45.0);
        b.cy = rng.uniform(-15.0, 15.0);
        b.theta = rng.uniform(-kPi, kPi);
        BoundingBox grown = b;
        grown.l += 0.5;
        grown.w += 0.5;
        if (std::any_of(boxes.begin(), boxes.end(), [&](const BoundingBox& o) { return bev_overlap(grown, o); })) {
          continue;
        }
        boxes.push_back(b);
        frame.objects.push_back(synthetic_scan(cls, b, rng, options));
        break;
      }
    }
  }

  const std::size_t object_points = total_points(frame);
  const std::size_t wanted = options.total_points > object_points ? options.total_points - object_points : 0;
  frame.background.reserve(wanted);
  std::vector<BoxTest> tests;
  for (const BoundingBox& b : boxes) tests.emplace_back(b, 0.01);
  while (frame.background.size() < wanted) {
    Point p;
    if (rng.uniform01() < 0.75) {
      // Ground rings from a 64-beam sensor mounted 1.73 m up.
      const double elev = (2.0 + 22.8 * static_cast<double>(rng.index(64)) / 63.0) * kPi / 180.0;
      const double r = -options.ground_z / std::tan(elev);
      const double az = rng.uniform(-kPi, kPi);
      p = {r * std::cos(az), r * std::sin(az), options.ground_z + 0.02 * gaussian(rng), rng.uniform01()};
    } else {
      // Building facades on both sides of the road.
      const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
      p = {rng.uniform(-30.0, 70.0), side * (20.0 + 0.05 * gaussian(rng)), rng.uniform(options.ground_z, 4.0),
           rng.uniform01()};
    }
    if (std::any_of(tests.begin(), tests.end(), [&](const BoxTest& t) { return t.contains(p); })) {
      continue;
    }
    frame.background.push_back(p);
  }
  return frame;
}

std::vector<Frame> synthetic_frames(std::size_t count, std::uint64_t seed, const SyntheticOptions& options) {
  std::vector<Frame> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    char id[24];
    std::snprintf(id, sizeof id, "%06zu", i);
    Rng rng(derive_seed(seed, 0x5ce7e, i));
    frames.push_back(synthetic_frame(id, rng, options));
  }
  return frames;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<Frame>& frames) {
  std::filesystem::create_directories(dir / "velodyne");
  std::filesystem::create_directories(dir / "label");
  for (const Frame& f : frames) {
    write_velodyne_bin(flatten(f), dir / "velodyne" / (f.frame_id + ".bin"));
    write_labels(frame_labels(f), dir / "label" / (f.frame_id + ".txt"));
  }
}

}  // namespace drcpo
