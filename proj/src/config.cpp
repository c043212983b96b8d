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

#include "drcpo/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "drcpo/error.hpp"

namespace drcpo {

namespace {

std::string fmt(double v) {
  // Shortest text that parses back to the same double.
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string fmt(bool v) { return v ? "true" : "false"; }

std::string fmt(const PartitionGrid& g) {
  return std::to_string(g.nx) + "x" + std::to_string(g.ny) + "x" + std::to_string(g.nz);
}

[[noreturn]] void bad(std::string_view value, const char* what) {
  throw Error(ErrorCode::kInvalidConfig, "expected " + std::string(what) + ", got '" + std::string(value) + "'");
}

double to_double(std::string_view s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) bad(s, "a finite number");
  return v;
}

std::uint64_t to_u64(std::string_view s) {
  std::uint64_t v = 0;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) bad(s, "an unsigned integer");
  return v;
}

std::uint32_t to_u32(std::string_view s) {
  const std::uint64_t v = to_u64(s);
  if (v > 0xffffffffULL) bad(s, "a 32-bit unsigned integer");
  return static_cast<std::uint32_t>(v);
}

bool to_bool(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad(s, "true or false");
}

PartitionGrid to_grid(std::string_view s) {
  PartitionGrid g;
  std::uint32_t* dims[3] = {&g.nx, &g.ny, &g.nz};
  for (int i = 0; i < 3; ++i) {
    const auto x = s.find('x');
    const std::string_view part = i < 2 ? s.substr(0, x) : s;
    if (i < 2 && x == std::string_view::npos) bad(s, "a grid like 4x2x2");
    *dims[i] = to_u32(part);
    if (*dims[i] == 0) bad(s, "positive grid dimensions");
    if (i < 2) s.remove_prefix(x + 1);
  }
  return g;
}

Mode to_mode(std::string_view s) {
  if (s == "none") return Mode::kNone;
  if (s == "cda") return Mode::kCda;
  if (s == "drcpo") return Mode::kDrcpo;
  bad(s, "none, cda or drcpo");
}

struct Key {
  std::string name;
  std::string help;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, std::string_view)> set;
};


template <typename F>
Key real(std::string name, std::string help, F field) {
  return {std::move(name), std::move(help),
          [field](const PipelineConfig& c) { return fmt(field(c)); },
          [field](PipelineConfig& c, std::string_view v) { field(c) = to_double(v); }};
}

template <typename F>
Key u32(std::string name, std::string help, F field) {
  return {std::move(name), std::move(help),
          [field](const PipelineConfig& c) { return fmt(std::uint64_t{field(c)}); },
          [field](PipelineConfig& c, std::string_view v) { field(c) = to_u32(v); }};
}

template <typename F>
Key flag(std::string name, std::string help, F field) {
  return {std::move(name), std::move(help),
          [field](const PipelineConfig& c) { return fmt(field(c)); },
          [field](PipelineConfig& c, std::string_view v) { field(c) = to_bool(v); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> t;
    t.push_back({"mode", "none | cda | drcpo",
                 [](const PipelineConfig& c) { return std::string(mode_name(c.mode)); },
                 [](PipelineConfig& c, std::string_view v) { c.mode = to_mode(v); }});
    t.push_back({"seed", "master seed (decimal or 0x hex)",
                 [](const PipelineConfig& c) { return fmt(c.seed); },
                 [](PipelineConfig& c, std::string_view v) { c.seed = to_u64(v); }});
    t.push_back(u32("workers", "frame-level worker threads", [](auto& c) -> auto& { return c.workers; }));
    t.push_back(u32("database.k", "candidates kept per object",
                    [](auto& c) -> auto& { return c.database.k; }));
    for (ObjectClass cls : kAllClasses) {
      const std::size_t i = class_index(cls);
      const std::string lower = [&] {
        std::string s(class_name(cls));
        for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
      }();
      t.push_back({"database.grid." + lower, "partition grid LxWxH",
                   [i](const PipelineConfig& c) { return fmt(c.database.grids[i]); },
                   [i](PipelineConfig& c, std::string_view v) { c.database.grids[i] = to_grid(v); }});
    }
    t.push_back(real("construction.threshold", "whole-body high-density proportion",
                     [](auto& c) -> auto& { return c.construction.whole_body_threshold; }));
    t.push_back(u32("construction.max_iterations", "complementing iteration cap",
                    [](auto& c) -> auto& { return c.construction.max_iterations; }));
    t.push_back(real("construction.dedup_epsilon", "voxel size for duplicate removal, m (0 disables)",
                     [](auto& c) -> auto& { return c.construction.dedup_epsilon; }));
    t.push_back(real("placement.x_min", "m", [](auto& c) -> auto& { return c.placement.x_min; }));
    t.push_back(real("placement.x_max", "m", [](auto& c) -> auto& { return c.placement.x_max; }));
    t.push_back(real("placement.y_min", "m", [](auto& c) -> auto& { return c.placement.y_min; }));
    t.push_back(real("placement.y_max", "m", [](auto& c) -> auto& { return c.placement.y_max; }));
    t.push_back(real("placement.rot_min", "rad", [](auto& c) -> auto& { return c.placement.rot_min; }));
    t.push_back(real("placement.rot_max", "rad", [](auto& c) -> auto& { return c.placement.rot_max; }));
    t.push_back(u32("placement.max_attempts", "pose draws per object",
                    [](auto& c) -> auto& { return c.placement.max_attempts; }));
    for (ObjectClass cls : kAllClasses) {
      const std::size_t i = class_index(cls);
      std::string lower(class_name(cls));
      for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      t.push_back(u32("placement.count." + lower, "objects constructed and placed per frame",
                      [i](auto& c) -> auto& { return c.placement.objects_per_class[i]; }));
    }
    for (ObjectClass cls : kAllClasses) {
      const std::size_t i = class_index(cls);
      std::string lower(class_name(cls));
      for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      t.push_back(real("hpr.radius_multiplier." + lower, "s-HPR radius in box diagonals",
                       [i](auto& c) -> auto& { return c.shpr.radius_multiplier[i]; }));
    }
    t.push_back(real("ehpr.radius", "e-HPR flip radius, m", [](auto& c) -> auto& { return c.ehpr.radius; }));
    t.push_back(real("ehpr.z", "e-HPR viewpoint height, m", [](auto& c) -> auto& { return c.ehpr.z; }));
    t.push_back(u32("ehpr.min_points", "labels with fewer surviving points are deleted",
                    [](auto& c) -> auto& { return c.ehpr.min_points_per_label; }));
    for (ObjectClass cls : kAllClasses) {
      const std::size_t i = class_index(cls);
      std::string lower(class_name(cls));
      for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      t.push_back(u32("cda.count." + lower, "ground-truth samples pasted per frame",
                      [i](auto& c) -> auto& { return c.cda_counts[i]; }));
    }
    t.push_back(real("gda.flip_probability", "", [](auto& c) -> auto& { return c.gda.flip_probability; }));
    t.push_back(real("gda.scale_min", "", [](auto& c) -> auto& { return c.gda.scale_min; }));
    t.push_back(real("gda.scale_max", "", [](auto& c) -> auto& { return c.gda.scale_max; }));
    t.push_back(real("gda.rot_min", "rad", [](auto& c) -> auto& { return c.gda.rot_min; }));
    t.push_back(real("gda.rot_max", "rad", [](auto& c) -> auto& { return c.gda.rot_max; }));
    t.push_back(flag("drcpo.global_augment", "apply flip/scale/rotate after occlusion in drcpo mode",
                     [](auto& c) -> auto& { return c.drcpo_global_augment; }));
    return t;
  }();
  return table;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::kNone: return "none";
    case Mode::kCda: return "cda";
    case Mode::kDrcpo: return "drcpo";
  }
  return "?";
}

void PipelineConfig::validate() const {
  if (workers < 1) throw Error(ErrorCode::kInvalidConfig, "workers < 1");
  if (database.k < 1) throw Error(ErrorCode::kInvalidConfig, "database.k < 1");
  construction.validate();
  placement.validate();
  for (double m : shpr.radius_multiplier) {
    if (!(m > 0.0)) throw Error(ErrorCode::kInvalidConfig, "hpr.radius_multiplier must be positive");
  }
  if (!(ehpr.radius > 0.0)) throw Error(ErrorCode::kInvalidConfig, "ehpr.radius must be positive");
  if (!(gda.flip_probability >= 0.0 && gda.flip_probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "gda.flip_probability outside [0, 1]");
  }
  if (!(gda.scale_min > 0.0 && gda.scale_min <= gda.scale_max && gda.rot_min <= gda.rot_max)) {
    throw Error(ErrorCode::kInvalidConfig, "gda ranges must satisfy 0 < min <= max");
  }
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  for (const Key& k : keys()) {
    if (k.get(a) != k.get(b)) return false;
  }
  return true;
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(line_no) + ": expected key = value", line_no);
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
    if (it == table.end()) {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" +
                                                 std::string(key) + "'", line_no);
    }
    try {
      it->set(cfg, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(line_no) + ": " + std::string(key) + ": " +
                                                 e.what(), line_no);
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const PipelineConfig& config) {
  std::string out;
  for (const Key& k : keys()) out += k.name + " = " + k.get(config) + "\n";
  return out;
}

std::string config_help() {
  const PipelineConfig defaults;
  std::string out = "Config keys (key = value, '#' comments):\n";
  for (const Key& k : keys()) {
    std::string line = "  " + k.name + " = " + k.get(defaults);
    if (!k.help.empty()) {
      line.resize(std::max<std::size_t>(line.size() + 2, 48), ' ');
      line += k.help;
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace drcpo
