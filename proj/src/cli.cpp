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

#include "drcpo/cli.hpp"

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <thread>

#include "drcpo/error.hpp"
#include "drcpo/pipeline.hpp"
#include "drcpo/synthetic.hpp"

namespace drcpo {

namespace fs = std::filesystem;

namespace {

void setup_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("drcpo");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("DRCPO_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  });
}

PipelineConfig effective_config(const std::string& path, std::optional<std::uint64_t> seed,
                                std::optional<unsigned> workers) {
  PipelineConfig cfg = path.empty() ? PipelineConfig{} : load_config(path);
  if (seed) cfg.seed = *seed;
  if (workers) cfg.workers = *workers;
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json class_counts(const std::array<std::uint32_t, 3>& counts) {
  nlohmann::ordered_json j;
  for (ObjectClass c : kAllClasses) j[std::string(class_name(c))] = counts[class_index(c)];
  return j;
}

// ---------------------------------------------------------------- build-db

struct BuildDbArgs {
  std::string data_dir, out, config;
  std::optional<unsigned> workers;
};

int cmd_build_db(const BuildDbArgs& a) {
  const PipelineConfig cfg = effective_config(a.config, std::nullopt, a.workers);
  const auto files = discover_frames(a.data_dir);
  std::vector<Frame> frames;
  frames.reserve(files.size());
  for (const FrameFiles& f : files) frames.push_back(load_frame(f));
  DatabaseConfig dbc = cfg.database;
  dbc.workers = cfg.workers;
  const GtDatabase db = build_database(frames, dbc);
  save_database(db, a.out);
  std::cout << "frames: " << frames.size() << "\n";
  for (ObjectClass c : kAllClasses) std::cout << class_name(c) << ": " << db.ids_of(c).size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
  std::string db, frames, out, config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> mode;
};

struct FrameOutcome {
  bool ok = false;
  std::uint64_t seed = 0;
  FrameStats stats;
  std::string error;
};

FrameOutcome augment_one(const FrameFiles& files, const GtDatabase& db, const PipelineConfig& cfg,
                         const fs::path& out) {
  FrameOutcome r;
  r.seed = frame_seed(cfg.seed, files.frame_id);
  const fs::path bin = out / "velodyne" / (files.frame_id + ".bin");
  const fs::path label = out / "label" / (files.frame_id + ".txt");
  try {
    const Frame frame = load_frame(files);
    if (cfg.mode == Mode::kNone) {
      fs::copy_file(files.cloud_path, bin, fs::copy_options::overwrite_existing);
      if (files.calib_path.empty() && fs::exists(files.label_path)) {
        fs::copy_file(files.label_path, label, fs::copy_options::overwrite_existing);
      } else {
        write_labels(frame_labels(frame), label);
      }
      auto [same, stats] = augment_frame(frame, db, cfg, r.seed);
      r.stats = stats;
    } else {
      auto [augmented, stats] = augment_frame(frame, db, cfg, r.seed);
      write_velodyne_bin(flatten(augmented), bin);
      write_labels(frame_labels(augmented), label);
      r.stats = stats;
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
    std::error_code ec;
    fs::remove(bin, ec);
    fs::remove(label, ec);
    spdlog::error("frame {}: {}", files.frame_id, e.what());
  }
  return r;
}

int cmd_augment(const AugmentArgs& a) {
  PipelineConfig cfg = effective_config(a.config, a.seed, a.workers);
  if (a.mode) cfg.mode = *a.mode == "none" ? Mode::kNone : *a.mode == "cda" ? Mode::kCda : Mode::kDrcpo;
  const auto files = discover_frames(a.frames);
  const GtDatabase db = load_database(a.db);
  const fs::path out(a.out);
  fs::create_directories(out / "velodyne");
  fs::create_directories(out / "label");

  std::vector<FrameOutcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      outcomes[i] = augment_one(files[i], db, cfg, out);
      spdlog::info("frame {} done", files[i].frame_id);
    }
  };
  {
    const unsigned n = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(files.size())));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }

  std::ofstream manifest(out / "manifest.jsonl", std::ios::binary | std::ios::trunc);
  if (!manifest) throw Error(ErrorCode::kIoFailure, "cannot write manifest in " + out.string());
  if (!files.empty()) {
    nlohmann::ordered_json header;
    header["type"] = "config";
    header["config"] = format_config(cfg);
    manifest << header.dump() << "\n";
  }
  int failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const FrameOutcome& r = outcomes[i];
    nlohmann::ordered_json j;
    j["type"] = "frame";
    j["frame_id"] = files[i].frame_id;
    j["seed"] = r.seed;
    j["status"] = r.ok ? "ok" : "error";
    if (r.ok) {
      j["counts"] = class_counts(r.stats.counts);
      j["total_points"] = r.stats.total_points;
      j["constructed"] = class_counts(r.stats.constructed);
      j["rejected"] = class_counts(r.stats.rejected);
      j["dropped_objects"] = r.stats.dropped_objects;
      j["deleted_labels"] = r.stats.deleted_labels;
      j["timing_ms"] = {{"construction", r.stats.construction_ms},
                        {"placement", r.stats.placement_ms},
                        {"shpr", r.stats.shpr_ms},
                        {"ehpr", r.stats.ehpr_ms}};
    } else {
      j["error"] = r.error;
      ++failed;
    }
    manifest << j.dump() << "\n";
  }
  if (!manifest.flush()) throw Error(ErrorCode::kIoFailure, "failed writing manifest");
  std::cout << "frames: " << files.size() << ", failed: " << failed << "\n";
  return failed ? kExitFailure : kExitOk;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const std::string& data_dir) {
  const auto files = discover_frames(data_dir);
  std::array<double, 3> counts{};
  double points = 0.0;
  for (const FrameFiles& f : files) {
    const Frame frame = load_frame(f);
    for (const auto& obj : frame.objects) counts[class_index(obj.cls)] += 1.0;
    points += static_cast<double>(total_points(frame));
  }
  const double n = std::max<double>(1.0, static_cast<double>(files.size()));
  std::cout << "frames: " << files.size() << "\n";
  std::cout << "average objects per frame:\n";
  for (ObjectClass c : kAllClasses) {
    std::cout << "  " << class_name(c) << ": " << fmt::format("{:.2f}", counts[class_index(c)] / n) << "\n";
  }
  std::cout << "average points per frame: " << fmt::format("{:.0f}", points / n) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::size_t frames = 100;
  std::size_t db_frames = 50;
  std::size_t points = 18000;
  std::string config;
  std::uint64_t seed = 0;
};

int cmd_bench(const BenchArgs& a) {
  PipelineConfig cfg = effective_config(a.config, a.seed, 1u);
  SyntheticOptions opts;
  opts.total_points = a.points;
  const auto db_frames = synthetic_frames(a.db_frames, derive_seed(a.seed, 1), opts);
  const GtDatabase db = build_database(db_frames, cfg.database);
  const auto frames = synthetic_frames(a.frames, derive_seed(a.seed, 2), opts);
  std::vector<double> ms;
  ms.reserve(frames.size());
  for (const Frame& f : frames) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = augment_frame(f, db, cfg, frame_seed(cfg.seed, f.frame_id));
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  if (ms.empty()) {
    std::cout << "frames: 0\n";
    return kExitOk;
  }
  double mean = 0.0;
  for (double v : ms) mean += v;
  mean /= static_cast<double>(ms.size());
  std::vector<double> sorted = ms;
  std::sort(sorted.begin(), sorted.end());
  const double p95 = sorted[std::min(sorted.size() - 1, static_cast<std::size_t>(0.95 * static_cast<double>(sorted.size())))];
  std::cout << "frames: " << ms.size() << "\n";
  std::cout << fmt::format("mean_ms: {:.2f}\np95_ms: {:.2f}\n", mean, p95);
  return kExitOk;
}

// ---------------------------------------------------------------- export-ply

struct ExportArgs {
  std::string db, data_dir, frame_id, out_dir, config, color = "class";
  std::optional<std::uint64_t> seed;
};

int cmd_export_ply(const ExportArgs& a) {
  const PipelineConfig cfg = effective_config(a.config, a.seed, std::nullopt);
  const auto files = discover_frames(a.data_dir);
  const auto it = std::find_if(files.begin(), files.end(), [&](const FrameFiles& f) { return f.frame_id == a.frame_id; });
  if (it == files.end()) throw Error(ErrorCode::kIoFailure, "frame " + a.frame_id + " not found in " + a.data_dir);
  const GtDatabase db = load_database(a.db);
  const Frame frame = load_frame(*it);
  fs::create_directories(a.out_dir);
  const PlyColorMode mode = a.color == "intensity" ? PlyColorMode::kIntensity : PlyColorMode::kClass;
  int index = 0;
  auto sink = [&](Stage s, const Frame& f) {
    const fs::path path = fs::path(a.out_dir) / fmt::format("{}_{}_{}.ply", a.frame_id, index++, stage_name(s));
    export_ply(f, path, mode);
    std::cout << path.string() << " " << total_points(f) << "\n";
  };
  PipelineConfig drcpo = cfg;
  drcpo.mode = Mode::kDrcpo;
  augment_frame(frame, db, drcpo, frame_seed(cfg.seed, frame.frame_id), sink);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  setup_logging();
  CLI::App app{"Occlusion-aware LiDAR object augmentation"};
  app.require_subcommand(1);
  app.footer(config_help());

  BuildDbArgs build;
  auto* b = app.add_subcommand("build-db", "Extract and index the object database");
  b->add_option("--data-dir", build.data_dir, "Training data directory")->required();
  b->add_option("--out", build.out, "Database file to write")->required();
  b->add_option("--config", build.config, "Config file");
  b->add_option("--workers", build.workers, "Indexing threads");

  AugmentArgs aug;
  auto* g = app.add_subcommand("augment", "Augment every frame of a data directory");
  g->add_option("--db", aug.db, "Database file")->required();
  g->add_option("--frames", aug.frames, "Input data directory")->required();
  g->add_option("--out", aug.out, "Output directory")->required();
  g->add_option("--config", aug.config, "Config file");
  g->add_option("--seed", aug.seed, "Master seed (overrides config)");
  g->add_option("--workers", aug.workers, "Frame-level worker threads (overrides config)");
  g->add_option("--mode", aug.mode, "none | cda | drcpo (overrides config)")->check(CLI::IsMember({"none", "cda", "drcpo"}));

  std::string stats_dir;
  auto* s = app.add_subcommand("stats", "Average object and point counts per frame");
  s->add_option("--data-dir", stats_dir, "Data directory")->required();

  BenchArgs bench;
  auto* k = app.add_subcommand("bench", "Per-frame augmentation latency on synthetic frames");
  k->add_option("--frames", bench.frames, "Frames to time")->capture_default_str();
  k->add_option("--db-frames", bench.db_frames, "Frames used to build the database")->capture_default_str();
  k->add_option("--points", bench.points, "Points per synthetic frame")->capture_default_str();
  k->add_option("--config", bench.config, "Config file");
  k->add_option("--seed", bench.seed, "Seed")->capture_default_str();

  ExportArgs ex;
  auto* e = app.add_subcommand("export-ply", "Write one PLY per pipeline stage for a frame");
  e->add_option("--db", ex.db, "Database file")->required();
  e->add_option("--data-dir", ex.data_dir, "Data directory")->required();
  e->add_option("--frame-id", ex.frame_id, "Frame id")->required();
  e->add_option("--out-dir", ex.out_dir, "Output directory")->required();
  e->add_option("--config", ex.config, "Config file");
  e->add_option("--seed", ex.seed, "Master seed (overrides config)");
  e->add_option("--color", ex.color, "class | intensity")->check(CLI::IsMember({"class", "intensity"}))->capture_default_str();

  std::vector<std::string> rev(args.empty() ? args.begin() : args.begin() + 1, args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    if (!args.empty()) app.name(fs::path(args[0]).filename().string());
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return err.get_exit_code() == 0 ? code : kExitUsage;
  }

  try {
    if (*b) return cmd_build_db(build);
    if (*g) return cmd_augment(aug);
    if (*s) return cmd_stats(stats_dir);
    if (*k) return cmd_bench(bench);
    if (*e) return cmd_export_ply(ex);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) { return run_cli(std::vector<std::string>(argv, argv + argc)); }

}  // namespace drcpo
