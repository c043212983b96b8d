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

#include "drcpo/kitti_io.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "drcpo/error.hpp"

namespace drcpo {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read failed: " + path.string());
  return std::move(ss).str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open for writing " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

float load_f32_le(const char* p) {
  std::uint32_t bits;
  std::memcpy(&bits, p, 4);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
  return std::bit_cast<float>(bits);
}

void store_f32_le(char* p, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
  std::memcpy(p, &bits, 4);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, line_no);
    if (end == text.size()) break;
    start = end + 1;
  }
}

}  // namespace

PointCloud read_velodyne_bin(const fs::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() % 16 != 0) {
    throw Error(ErrorCode::kSizeNotMultipleOf16,
                path.string() + " has " + std::to_string(bytes.size()) + " bytes");
  }
  PointCloud points(bytes.size() / 16);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const char* p = bytes.data() + 16 * i;
    points[i] = {load_f32_le(p), load_f32_le(p + 4), load_f32_le(p + 8), load_f32_le(p + 12)};
  }
  return points;
}

void write_velodyne_bin(std::span<const Point> points, const fs::path& path) {
  std::string bytes(points.size() * 16, '\0');
  for (std::size_t i = 0; i < points.size(); ++i) {
    char* p = bytes.data() + 16 * i;
    store_f32_le(p, static_cast<float>(points[i].x));
    store_f32_le(p + 4, static_cast<float>(points[i].y));
    store_f32_le(p + 8, static_cast<float>(points[i].z));
    store_f32_le(p + 12, static_cast<float>(points[i].r));
  }
  write_file(path, bytes);
}

LabelFile parse_labels(const std::string& text) {
  LabelFile result;
  for_each_line(text, [&](std::string_view line, int line_no) {
    const auto fields = split_ws(line);
    if (fields.empty() || fields.front().front() == '#') return;
    const auto cls = parse_class(fields[0]);
    if (fields.size() != 8) throw Error(ErrorCode::kMalformedLine, "expected 8 fields", line_no);
    std::array<double, 7> v{};
    for (std::size_t i = 0; i < 7; ++i) {
      if (!parse_double(fields[i + 1], v[i])) {
        throw Error(ErrorCode::kMalformedLine, "bad number '" + std::string(fields[i + 1]) + "'",
                    line_no);
      }
    }
    if (!cls) {
      ++result.skipped;
      return;
    }
    if (v[3] <= 0 || v[4] <= 0 || v[5] <= 0) {
      throw Error(ErrorCode::kMalformedLine, "non-positive extent", line_no);
    }
    result.labels.push_back({*cls, {v[0], v[1], v[2], v[3], v[4], v[5], normalize_angle(v[6])}});
  });
  return result;
}

LabelFile read_labels(const fs::path& path) { return parse_labels(read_file(path)); }

std::string format_labels(std::span<const Label> labels) {
  std::string out;
  char buf[256];
  for (const Label& l : labels) {
    const BoundingBox& b = l.box;
    std::snprintf(buf, sizeof(buf), "%s %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n",
                  std::string(class_name(l.cls)).c_str(), b.cx, b.cy, b.cz, b.l, b.w, b.h, b.theta);
    out += buf;
  }
  return out;
}

void write_labels(std::span<const Label> labels, const fs::path& path) {
  write_file(path, format_labels(labels));
}

LabelFile read_kitti_labels(const fs::path& label_path, const fs::path& calib_path) {
  std::map<std::string, std::vector<double>, std::less<>> calib;
  for_each_line(read_file(calib_path), [&](std::string_view line, int line_no) {
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) return;
    std::string key(line.substr(0, colon));
    std::vector<double> values;
    for (auto f : split_ws(line.substr(colon + 1))) {
      double v;
      if (!parse_double(f, v)) throw Error(ErrorCode::kMalformedLine, "bad calib value", line_no);
      values.push_back(v);
    }
    calib[std::move(key)] = std::move(values);
  });

  auto fetch = [&](const std::string& key, std::size_t n) {
    auto it = calib.find(key);
    if (it == calib.end()) throw Error(ErrorCode::kMissingCalibKey, key);
    if (it->second.size() != n) {
      throw Error(ErrorCode::kMalformedLine, key + " needs " + std::to_string(n) + " values");
    }
    return it->second;
  };
  const auto r0 = fetch("R0_rect", 9);
  const auto tr = fetch("Tr_velo_to_cam", 12);

  Eigen::Matrix4d rect = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d velo_to_cam = Eigen::Matrix4d::Identity();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rect(r, c) = r0[3 * r + c];
    for (int c = 0; c < 4; ++c) velo_to_cam(r, c) = tr[4 * r + c];
  }
  const Eigen::Matrix4d rect_to_velo = (rect * velo_to_cam).inverse();

  LabelFile result;
  for_each_line(read_file(label_path), [&](std::string_view line, int line_no) {
    const auto fields = split_ws(line);
    if (fields.empty()) return;
    if (fields.size() < 15) throw Error(ErrorCode::kMalformedLine, "expected >= 15 fields", line_no);
    std::array<double, 14> v{};
    for (std::size_t i = 0; i < 14; ++i) {
      if (!parse_double(fields[i + 1], v[i])) {
        throw Error(ErrorCode::kMalformedLine, "bad number '" + std::string(fields[i + 1]) + "'",
                    line_no);
      }
    }
    const auto cls = parse_class(fields[0]);
    if (!cls) {
      ++result.skipped;
      return;
    }
    // type trunc occ alpha x1 y1 x2 y2 h w l x y z ry
    const double h = v[7], w = v[8], l = v[9], ry = v[13];
    const Eigen::Vector4d bottom = rect_to_velo * Eigen::Vector4d(v[10], v[11], v[12], 1.0);
    BoundingBox box{bottom.x(), bottom.y(), bottom.z() + 0.5 * h, l, w, h,
                    normalize_angle(-ry - 0.5 * kPi)};
    result.labels.push_back({*cls, box});
  });
  return result;
}

Frame split_frame(std::span<const Point> points, std::span<const Label> labels, std::string frame_id) {
  Frame frame;
  frame.frame_id = std::move(frame_id);
  frame.objects.reserve(labels.size());
  std::vector<BoxTest> tests;
  tests.reserve(labels.size());
  for (const Label& l : labels) {
    frame.objects.push_back({{}, l.cls, l.box});
    tests.emplace_back(l.box);
  }
  for (const Point& p : points) {
    bool assigned = false;
    for (std::size_t i = 0; i < tests.size(); ++i) {
      if (tests[i].contains(p)) {
        frame.objects[i].points.push_back(p);
        assigned = true;
        break;
      }
    }
    if (!assigned) frame.background.push_back(p);
  }
  return frame;
}

PointCloud flatten(const Frame& frame) {
  PointCloud out;
  out.reserve(total_points(frame));
  out.insert(out.end(), frame.background.begin(), frame.background.end());
  for (const auto& obj : frame.objects) out.insert(out.end(), obj.points.begin(), obj.points.end());
  return out;
}

std::vector<Label> frame_labels(const Frame& frame) {
  std::vector<Label> out;
  out.reserve(frame.objects.size());
  for (const auto& obj : frame.objects) out.push_back({obj.cls, obj.box});
  return out;
}

std::size_t total_points(const Frame& frame) {
  std::size_t n = frame.background.size();
  for (const auto& obj : frame.objects) n += obj.points.size();
  return n;
}

std::vector<FrameFiles> discover_frames(const fs::path& data_dir) {
  const fs::path velodyne = data_dir / "velodyne";
  if (!fs::is_directory(velodyne)) {
    throw Error(ErrorCode::kIoFailure, "missing directory " + velodyne.string());
  }
  const bool native = fs::is_directory(data_dir / "label");
  const bool kitti = fs::is_directory(data_dir / "label_2") && fs::is_directory(data_dir / "calib");
  if (!native && !kitti) {
    throw Error(ErrorCode::kIoFailure, "no label/ or label_2/+calib/ under " + data_dir.string());
  }
  std::vector<FrameFiles> frames;
  for (const auto& entry : fs::directory_iterator(velodyne)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".bin") continue;
    const std::string id = entry.path().stem().string();
    FrameFiles f{id, entry.path(), {}, {}};
    if (native) {
      f.label_path = data_dir / "label" / (id + ".txt");
    } else {
      f.label_path = data_dir / "label_2" / (id + ".txt");
      f.calib_path = data_dir / "calib" / (id + ".txt");
    }
    frames.push_back(std::move(f));
  }
  std::sort(frames.begin(), frames.end(),
            [](const FrameFiles& a, const FrameFiles& b) { return a.frame_id < b.frame_id; });
  return frames;
}

Frame load_frame(const FrameFiles& files) {
  const PointCloud points = read_velodyne_bin(files.cloud_path);
  LabelFile labels;
  if (fs::exists(files.label_path)) {
    labels = files.calib_path.empty() ? read_labels(files.label_path)
                                      : read_kitti_labels(files.label_path, files.calib_path);
  }
  return split_frame(points, labels.labels, files.frame_id);
}

namespace {

struct Rgb {
  unsigned char r, g, b;
};

constexpr Rgb kBackgroundGray{128, 128, 128};

Rgb class_color(ObjectClass c) {
  switch (c) {
    case ObjectClass::kCar: return {230, 60, 50};
    case ObjectClass::kPedestrian: return {60, 200, 70};
    case ObjectClass::kCyclist: return {50, 110, 235};
  }
  return kBackgroundGray;
}

Rgb intensity_color(double r) {
  const auto v = static_cast<unsigned char>(std::clamp(r, 0.0, 1.0) * 255.0 + 0.5);
  return {v, v, v};
}

constexpr std::string_view kPlyHeaderTail =
    "property float x\n"
    "property float y\n"
    "property float z\n"
    "property uchar red\n"
    "property uchar green\n"
    "property uchar blue\n"
    "end_header\n";

}  // namespace

void export_ply(const Frame& frame, const fs::path& path, PlyColorMode mode) {
  std::string out = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(total_points(frame)) +
                    "\n" + std::string(kPlyHeaderTail);
  char buf[128];
  auto emit = [&](const Point& p, Rgb c) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %u %u %u\n", static_cast<float>(p.x),
                  static_cast<float>(p.y), static_cast<float>(p.z), c.r, c.g, c.b);
    out += buf;
  };
  for (const Point& p : frame.background) {
    emit(p, mode == PlyColorMode::kClass ? kBackgroundGray : intensity_color(p.r));
  }
  for (const auto& obj : frame.objects) {
    for (const Point& p : obj.points) {
      emit(p, mode == PlyColorMode::kClass ? class_color(obj.cls) : intensity_color(p.r));
    }
  }
  write_file(path, out);
}

std::vector<PlyVertex> read_ply(const fs::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  auto expect = [&](std::string_view want) {
    if (!std::getline(in, line) || line != want) {
      throw Error(ErrorCode::kMalformedLine, "PLY header: expected '" + std::string(want) + "'");
    }
  };
  expect("ply");
  expect("format ascii 1.0");
  if (!std::getline(in, line) || line.rfind("element vertex ", 0) != 0) {
    throw Error(ErrorCode::kMalformedLine, "PLY header: missing vertex element");
  }
  const std::size_t count = std::stoul(line.substr(15));
  std::istringstream tail{std::string(kPlyHeaderTail)};
  std::string want;
  while (std::getline(tail, want)) expect(want);

  std::vector<PlyVertex> vertices;
  vertices.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::kMalformedLine, "PLY: too few vertices");
    std::istringstream ls(line);
    PlyVertex v{};
    unsigned r, g, b;
    if (!(ls >> v.x >> v.y >> v.z >> r >> g >> b) || r > 255 || g > 255 || b > 255) {
      throw Error(ErrorCode::kMalformedLine, "PLY: bad vertex line", static_cast<int>(i) + 1);
    }
    v.red = static_cast<unsigned char>(r);
    v.green = static_cast<unsigned char>(g);
    v.blue = static_cast<unsigned char>(b);
    vertices.push_back(v);
  }
  while (std::getline(in, line)) {
    if (!line.empty()) throw Error(ErrorCode::kMalformedLine, "PLY: trailing data");
  }
  return vertices;
}

}  // namespace drcpo
