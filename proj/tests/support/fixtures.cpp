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

#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <stdexcept>

#include "drcpo/synthetic.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using namespace drcpo;

TempDir::TempDir() {
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const fs::path p = fs::temp_directory_path() / ("drcpo-test-" + std::to_string(rd()) + std::to_string(rd()));
    if (fs::create_directory(p)) {
      path_ = p;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

PointCloud uniform_points(Rng& rng, std::size_t n, double x0, double x1, double y0, double y1, double z0,
                          double z1) {
  PointCloud out(n);
  for (Point& p : out) {
    p.x = rng.uniform(x0, x1);
    p.y = rng.uniform(y0, y1);
    p.z = rng.uniform(z0, z1);
    p.r = rng.uniform01();
  }
  return out;
}

Frame wall_scene(double spacing) {
  Frame f;
  f.frame_id = "wall";
  const int ny = static_cast<int>(std::lround(6.0 / spacing));
  const int nz = static_cast<int>(std::lround(4.0 / spacing));
  for (int i = 0; i <= ny; ++i) {
    for (int j = 0; j <= nz; ++j) f.background.push_back({5.0, -3.0 + i * spacing, -2.0 + j * spacing, 0.5});
  }
  LabeledObject cube;
  cube.cls = ObjectClass::kCar;
  cube.box = {15.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0};
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) cube.points.push_back({14.5 + 1e-3, -0.5 + i * 0.05, -0.5 + j * 0.05, 0.3});
  }
  f.objects.push_back(std::move(cube));
  return f;
}

std::vector<Point> plate_scene() {
  std::vector<Point> pts;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) pts.push_back({1.0, -1.0 + 0.5 * i, -1.0 + 0.5 * j, 0.0});
  }
  pts.push_back({3.0, 0.01, 0.01, 0.0});
  return pts;
}

std::vector<Point> shell(const Point& center, double r, std::size_t n, bool front_only) {
  std::vector<Point> pts;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double rad = std::sqrt(1.0 - z * z);
    const double phi = golden * static_cast<double>(i);
    Point p{center.x + r * rad * std::cos(phi), center.y + r * rad * std::sin(phi), center.z + r * z, 0.5};
    // Front: the cap seen from the origin, bounded by the tangent cone.
    const double dist = std::hypot(center.x, center.y, center.z);
    const double toward = -((p.x - center.x) * center.x + (p.y - center.y) * center.y + (p.z - center.z) * center.z) /
                          (r * dist);
    if (!front_only || toward > r / dist) pts.push_back(p);
  }
  return pts;
}

GtDatabase half_object_db(ObjectClass cls, std::size_t n, std::uint64_t seed, std::uint32_t k) {
  Rng rng(seed);
  Frame frame;
  frame.frame_id = "halves";
  for (std::size_t i = 0; i < n; ++i) {
    LabeledObject obj;
    obj.cls = cls;
    double l = 0, w = 0, h = 0;
    if (cls == ObjectClass::kPedestrian) {
      l = rng.uniform(0.6, 0.9), w = rng.uniform(0.5, 0.7), h = rng.uniform(1.6, 1.9);
    } else if (cls == ObjectClass::kCyclist) {
      l = rng.uniform(1.6, 1.9), w = rng.uniform(0.5, 0.7), h = rng.uniform(1.6, 1.8);
    } else {
      l = rng.uniform(3.8, 4.4), w = rng.uniform(1.6, 1.8), h = rng.uniform(1.4, 1.6);
    }
    obj.box = {0.0, 0.0, 0.0, l, w, h, 0.0};
    double x0 = -l / 2, x1 = l / 2, y0 = -w / 2, y1 = w / 2;
    switch (static_cast<Half>(i % 4)) {
      case Half::kFront: x0 = 0.0; break;
      case Half::kRear: x1 = 0.0; break;
      case Half::kLeft: y0 = 0.0; break;
      case Half::kRight: y1 = 0.0; break;
    }
    obj.points = uniform_points(rng, 200 + rng.index(200), x0, x1, y0, y1, -h / 2, h / 2);
    frame.objects.push_back(std::move(obj));
  }
  DatabaseConfig config;
  config.k = k;
  return build_database(std::span<const Frame>(&frame, 1), config);
}

GtDatabase ranking_fixture(std::uint64_t seed, std::size_t n, std::uint32_t k) {
  Rng rng(seed);
  GtDatabase db;
  db.k = k;
  db.source_frames = {"fixture"};
  for (ObjectClass c : kAllClasses) db.class_maxima[class_index(c)].assign(db.grid(c).size(), 1);
  constexpr double kLengths[] = {3.5, 4.0, 4.5};
  constexpr double kWidths[] = {1.5, 2.0};
  for (std::size_t i = 0; i < n; ++i) {
    DbObject o;
    // Mostly one class so pools are large; a few of the others.
    const std::uint64_t roll = rng.index(10);
    o.object.cls = roll < 7 ? ObjectClass::kCar : roll < 9 ? ObjectClass::kPedestrian : ObjectClass::kCyclist;
    o.object.box = {0.0, 0.0, 0.0, kLengths[rng.index(3)], kWidths[rng.index(2)], 1.5, 0.0};
    o.densities.resize(db.grid(o.object.cls).size());
    for (double& d : o.densities) d = 0.25 * static_cast<double>(rng.index(5));
    db.objects.push_back(std::move(o));
  }
  db.finalize();
  db.index = index_candidates(db, k);
  return db;
}

GtDatabase synthetic_db(std::size_t frames, std::uint64_t seed) {
  const auto corpus = synthetic_frames(frames, seed);
  return build_database(corpus, DatabaseConfig{});
}

}  // namespace fixtures
