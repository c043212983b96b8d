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

#include <filesystem>
#include <string>
#include <vector>

#include "drcpo/geometry.hpp"

namespace drcpo {

/// Scene decomposition: background points plus labeled objects. No point is
/// shared between the two.
struct Frame {
  std::string frame_id;
  PointCloud background;
  std::vector<LabeledObject> objects;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct FrameFiles {
  std::string frame_id;
  std::filesystem::path cloud_path;
  std::filesystem::path label_path;
  std::filesystem::path calib_path;  // empty for native labels
};

struct Label {
  ObjectClass cls = ObjectClass::kCar;
  BoundingBox box;

  friend bool operator==(const Label&, const Label&) = default;
};

struct LabelFile {
  std::vector<Label> labels;
  int skipped = 0;  // records of classes other than Car/Pedestrian/Cyclist
};

PointCloud read_velodyne_bin(const std::filesystem::path& path);
void write_velodyne_bin(std::span<const Point> points, const std::filesystem::path& path);

/// Native LiDAR-frame labels: `class cx cy cz l w h theta`, `#` comments.
LabelFile read_labels(const std::filesystem::path& path);
LabelFile parse_labels(const std::string& text);
void write_labels(std::span<const Label> labels, const std::filesystem::path& path);
std::string format_labels(std::span<const Label> labels);

/// KITTI object labels in rectified camera coordinates, converted to the LiDAR
/// frame with the per-frame calibration file.
LabelFile read_kitti_labels(const std::filesystem::path& label_path,
                            const std::filesystem::path& calib_path);

/// Assigns every point to the first label box containing it, else background.
Frame split_frame(std::span<const Point> points, std::span<const Label> labels,
                  std::string frame_id = {});

/// Background followed by each object's points, in object order.
PointCloud flatten(const Frame& frame);
std::vector<Label> frame_labels(const Frame& frame);
std::size_t total_points(const Frame& frame);

/// Discovers frames under a data directory laid out as velodyne/<id>.bin with
/// either label/<id>.txt (native) or label_2/<id>.txt + calib/<id>.txt (KITTI).
std::vector<FrameFiles> discover_frames(const std::filesystem::path& data_dir);

/// Reads and splits one frame.
Frame load_frame(const FrameFiles& files);

enum class PlyColorMode { kIntensity, kClass };

void export_ply(const Frame& frame, const std::filesystem::path& path, PlyColorMode mode);

struct PlyVertex {
  float x, y, z;
  unsigned char red, green, blue;
};

/// Reads back the ASCII PLY files written by export_ply; rejects anything else.
std::vector<PlyVertex> read_ply(const std::filesystem::path& path);

}  // namespace drcpo
