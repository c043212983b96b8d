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

#include "drcpo/gt_database.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "drcpo/error.hpp"

namespace drcpo {

namespace {

std::uint32_t axis_cell(double v, double extent, std::uint32_t n) {
  const double t = std::floor((v + 0.5 * extent) / extent * n);
  if (!(t > 0.0)) return 0;
  return std::min(static_cast<std::uint32_t>(t), n - 1);
}

}  // namespace

std::size_t partition_index(const Point& p, double l, double w, double h, const PartitionGrid& grid) {
  const std::size_t ix = axis_cell(p.x, l, grid.nx);
  const std::size_t iy = axis_cell(p.y, w, grid.ny);
  const std::size_t iz = axis_cell(p.z, h, grid.nz);
  return (ix * grid.ny + iy) * grid.nz + iz;
}

std::vector<std::uint32_t> partition_counts(const LabeledObject& canonical, const PartitionGrid& grid) {
  std::vector<std::uint32_t> counts(grid.size(), 0);
  const BoundingBox& b = canonical.box;
  for (const Point& p : canonical.points) ++counts[partition_index(p, b.l, b.w, b.h, grid)];
  return counts;
}

std::vector<double> partition_densities(std::span<const std::uint32_t> counts,
                                        std::span<const std::uint32_t> maxima) {
  if (counts.size() != maxima.size()) {
    throw Error(ErrorCode::kInvalidArgument, "counts and maxima differ in length");
  }
  std::vector<double> out(counts.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (maxima[i] == 0) continue;
    out[i] = std::min(1.0, static_cast<double>(counts[i]) / maxima[i]);
  }
  return out;
}

std::vector<bool> deficient_partitions(std::span<const double> densities) {
  double sum = 0.0;
  std::size_t nonempty = 0;
  for (double d : densities) {
    if (d > 0.0) {
      sum += d;
      ++nonempty;
    }
  }
  std::vector<bool> out(densities.size(), true);
  if (nonempty == 0) return out;
  const double mean = sum / static_cast<double>(nonempty);
  for (std::size_t i = 0; i < densities.size(); ++i) out[i] = densities[i] < mean - kDensityTolerance;
  return out;
}

std::span<const Point> GtDatabase::partition_points(std::uint32_t id, std::size_t cell) const {
  const auto& offsets = bucket_offsets_[id];
  return std::span<const Point>(bucketed_[id]).subspan(offsets[cell], offsets[cell + 1] - offsets[cell]);
}

void GtDatabase::finalize() {
  for (auto& ids : by_class_) ids.clear();
  bucketed_.assign(objects.size(), {});
  bucket_offsets_.assign(objects.size(), {});
  for (std::uint32_t id = 0; id < objects.size(); ++id) {
    const LabeledObject& obj = objects[id].object;
    by_class_[class_index(obj.cls)].push_back(id);

    const PartitionGrid& g = grid(obj.cls);
    std::vector<std::uint32_t> offsets(g.size() + 1, 0);
    std::vector<std::size_t> cells(obj.points.size());
    for (std::size_t i = 0; i < obj.points.size(); ++i) {
      cells[i] = partition_index(obj.points[i], obj.box.l, obj.box.w, obj.box.h, g);
      ++offsets[cells[i] + 1];
    }
    for (std::size_t c = 0; c < g.size(); ++c) offsets[c + 1] += offsets[c];
    PointCloud sorted(obj.points.size());
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < obj.points.size(); ++i) sorted[cursor[cells[i]]++] = obj.points[i];
    bucketed_[id] = std::move(sorted);
    bucket_offsets_[id] = std::move(offsets);
  }
}

namespace {

struct Ranked {
  std::uint32_t id;
  double similarity;
  double score;
};

std::vector<std::uint32_t> rank_for(const GtDatabase& db, std::uint32_t i, std::uint32_t k) {
  const DbObject& src = db.objects[i];
  const auto& pool_ids = db.ids_of(src.object.cls);

  std::vector<Ranked> pool;
  pool.reserve(pool_ids.size());
  for (std::uint32_t j : pool_ids) {
    if (j == i) continue;
    pool.push_back({j, box_similarity(src.object.box, db.objects[j].object.box), 0.0});
  }
  const std::size_t prefilter = std::min<std::size_t>(pool.size(), 2 * std::size_t{k});
  auto by_similarity = [](const Ranked& a, const Ranked& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
  };
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(prefilter), pool.end(),
                    by_similarity);
  pool.resize(prefilter);

  const std::vector<bool> deficient = deficient_partitions(src.densities);
  for (Ranked& r : pool) {
    const auto& d = db.objects[r.id].densities;
    double score = 0.0;
    for (std::size_t p = 0; p < d.size(); ++p) {
      if (deficient[p]) score += d[p];
    }
    r.score = score;
  }
  std::sort(pool.begin(), pool.end(), [&](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    return by_similarity(a, b);
  });
  pool.resize(std::min<std::size_t>(pool.size(), k));

  std::vector<std::uint32_t> out;
  out.reserve(pool.size());
  for (const Ranked& r : pool) out.push_back(r.id);
  return out;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

}  // namespace

CandidateIndex index_candidates(const GtDatabase& db, std::uint32_t k, unsigned workers) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "K must be at least 1");
  CandidateIndex index;
  index.candidates.resize(db.objects.size());
  parallel_for(db.objects.size(), workers, [&](std::size_t i) {
    index.candidates[i] = rank_for(db, static_cast<std::uint32_t>(i), k);
  });
  return index;
}

GtDatabase build_database(std::span<const Frame> frames, const DatabaseConfig& config) {
  GtDatabase db;
  db.k = config.k;
  db.grids = config.grids;
  for (std::uint32_t f = 0; f < frames.size(); ++f) {
    db.source_frames.push_back(frames[f].frame_id);
    for (const LabeledObject& obj : frames[f].objects) {
      if (obj.points.empty()) continue;
      auto [canonical, pose] = to_canonical(obj);
      db.objects.push_back({std::move(canonical), pose, f, {}});
    }
  }
  if (db.objects.empty()) throw Error(ErrorCode::kEmptyDatabase, "no labeled objects with points");

  std::vector<std::vector<std::uint32_t>> counts(db.objects.size());
  for (ObjectClass c : kAllClasses) db.class_maxima[class_index(c)].assign(db.grid(c).size(), 0);
  for (std::size_t i = 0; i < db.objects.size(); ++i) {
    const LabeledObject& obj = db.objects[i].object;
    counts[i] = partition_counts(obj, db.grid(obj.cls));
    auto& maxima = db.class_maxima[class_index(obj.cls)];
    for (std::size_t p = 0; p < maxima.size(); ++p) maxima[p] = std::max(maxima[p], counts[i][p]);
  }
  for (std::size_t i = 0; i < db.objects.size(); ++i) {
    const ObjectClass c = db.objects[i].object.cls;
    db.objects[i].densities = partition_densities(counts[i], db.class_maxima[class_index(c)]);
  }
  db.finalize();
  db.index = index_candidates(db, config.k, config.workers);
  return db;
}

// ---------------------------------------------------------------------------
// Persistence: "DRPC", u32 version, then four sections, each
// u32 id | u64 byte length | payload. All integers and floats little-endian.

namespace {

constexpr char kMagic[4] = {'D', 'R', 'P', 'C'};
constexpr std::uint32_t kVersion = 1;
enum Section : std::uint32_t { kMetadata = 1, kObjects = 2, kDensities = 3, kIndex = 4 };

class Writer {
 public:
  template <typename T>
  void put(T v) {
    static_assert(std::is_arithmetic_v<T>);
    if constexpr (std::is_floating_point_v<T>) {
      put(std::bit_cast<std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>>(v));
    } else {
      for (std::size_t i = 0; i < sizeof(T); ++i) {
        buf_.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
      }
    }
  }
  void put_bytes(std::string_view s) { buf_.append(s); }
  std::string& str() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    static_assert(std::is_arithmetic_v<T>);
    if constexpr (std::is_floating_point_v<T>) {
      return std::bit_cast<T>(get<std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>>());
    } else {
      need(sizeof(T));
      std::uint64_t v = 0;
      for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
      }
      pos_ += sizeof(T);
      return static_cast<T>(v);
    }
  }
  std::string_view get_bytes(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  // Element counts are validated against the remaining bytes before any
  // allocation so a corrupt length cannot trigger a huge reserve.
  std::uint32_t get_count(std::size_t min_element_size) {
    const auto n = get<std::uint32_t>();
    need(std::size_t{n} * min_element_size);
    return n;
  }
  bool done() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::kTruncatedSection, "unexpected end of data");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void put_section(Writer& out, Section id, Writer& payload) {
  out.put<std::uint32_t>(id);
  out.put<std::uint64_t>(payload.str().size());
  out.put_bytes(payload.str());
}

Reader take_section(Reader& in, Section want) {
  const auto id = in.get<std::uint32_t>();
  const auto len = in.get<std::uint64_t>();
  if (id != want) {
    throw Error(ErrorCode::kTruncatedSection,
                "expected section " + std::to_string(want) + ", found " + std::to_string(id));
  }
  if (len > in.remaining()) throw Error(ErrorCode::kTruncatedSection, "section exceeds file size");
  return Reader(in.get_bytes(static_cast<std::size_t>(len)));
}

void expect_consumed(const Reader& r, Section s) {
  if (!r.done()) {
    throw Error(ErrorCode::kTruncatedSection, "trailing bytes in section " + std::to_string(s));
  }
}

}  // namespace

std::string serialize_database(const GtDatabase& db) {
  Writer out;
  out.put_bytes(std::string_view(kMagic, 4));
  out.put<std::uint32_t>(kVersion);

  Writer meta;
  meta.put<std::uint32_t>(db.k);
  for (const PartitionGrid& g : db.grids) {
    meta.put(g.nx);
    meta.put(g.ny);
    meta.put(g.nz);
  }
  meta.put<std::uint32_t>(static_cast<std::uint32_t>(db.source_frames.size()));
  for (const std::string& f : db.source_frames) {
    meta.put<std::uint32_t>(static_cast<std::uint32_t>(f.size()));
    meta.put_bytes(f);
  }
  put_section(out, kMetadata, meta);

  Writer objs;
  objs.put<std::uint32_t>(static_cast<std::uint32_t>(db.objects.size()));
  for (const DbObject& o : db.objects) {
    objs.put<std::uint8_t>(static_cast<std::uint8_t>(o.object.cls));
    objs.put<std::uint32_t>(o.source_frame);
    for (double v : {o.pose.x, o.pose.y, o.pose.z, o.pose.theta}) objs.put(v);
    const BoundingBox& b = o.object.box;
    for (double v : {b.cx, b.cy, b.cz, b.l, b.w, b.h, b.theta}) objs.put(v);
    objs.put<std::uint32_t>(static_cast<std::uint32_t>(o.object.points.size()));
    for (const Point& p : o.object.points) {
      for (double v : {p.x, p.y, p.z, p.r}) objs.put(v);
    }
  }
  put_section(out, kObjects, objs);

  Writer dens;
  for (const auto& maxima : db.class_maxima) {
    dens.put<std::uint32_t>(static_cast<std::uint32_t>(maxima.size()));
    for (std::uint32_t m : maxima) dens.put(m);
  }
  dens.put<std::uint32_t>(static_cast<std::uint32_t>(db.objects.size()));
  for (const DbObject& o : db.objects) {
    dens.put<std::uint32_t>(static_cast<std::uint32_t>(o.densities.size()));
    for (double d : o.densities) dens.put(d);
  }
  put_section(out, kDensities, dens);

  Writer idx;
  idx.put<std::uint32_t>(static_cast<std::uint32_t>(db.index.candidates.size()));
  for (const auto& list : db.index.candidates) {
    idx.put<std::uint32_t>(static_cast<std::uint32_t>(list.size()));
    for (std::uint32_t id : list) idx.put(id);
  }
  put_section(out, kIndex, idx);

  return std::move(out.str());
}

GtDatabase deserialize_database(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a DRPC database");
  }
  Reader in(bytes.substr(4));
  const auto version = in.get<std::uint32_t>();
  if (version != kVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "version " + std::to_string(version));
  }
  GtDatabase db;

  Reader meta = take_section(in, kMetadata);
  db.k = meta.get<std::uint32_t>();
  for (PartitionGrid& g : db.grids) {
    g.nx = meta.get<std::uint32_t>();
    g.ny = meta.get<std::uint32_t>();
    g.nz = meta.get<std::uint32_t>();
    if (g.nx == 0 || g.ny == 0 || g.nz == 0) {
      throw Error(ErrorCode::kTruncatedSection, "zero partition count in metadata");
    }
  }
  const auto n_frames = meta.get_count(4);
  for (std::uint32_t i = 0; i < n_frames; ++i) {
    const auto len = meta.get<std::uint32_t>();
    db.source_frames.emplace_back(meta.get_bytes(len));
  }
  expect_consumed(meta, kMetadata);

  Reader objs = take_section(in, kObjects);
  const auto n_objects = objs.get_count(1 + 4 + 11 * 8 + 4);
  db.objects.resize(n_objects);
  for (DbObject& o : db.objects) {
    const auto cls = objs.get<std::uint8_t>();
    if (cls > 2) throw Error(ErrorCode::kTruncatedSection, "bad class id");
    o.object.cls = static_cast<ObjectClass>(cls);
    o.source_frame = objs.get<std::uint32_t>();
    for (double* v : {&o.pose.x, &o.pose.y, &o.pose.z, &o.pose.theta}) *v = objs.get<double>();
    BoundingBox& b = o.object.box;
    for (double* v : {&b.cx, &b.cy, &b.cz, &b.l, &b.w, &b.h, &b.theta}) *v = objs.get<double>();
    const auto n_points = objs.get_count(32);
    o.object.points.resize(n_points);
    for (Point& p : o.object.points) {
      for (double* v : {&p.x, &p.y, &p.z, &p.r}) *v = objs.get<double>();
    }
  }
  expect_consumed(objs, kObjects);

  Reader dens = take_section(in, kDensities);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto n = dens.get_count(4);
    if (n != db.grids[c].size()) throw Error(ErrorCode::kTruncatedSection, "maxima size mismatch");
    db.class_maxima[c].resize(n);
    for (auto& m : db.class_maxima[c]) m = dens.get<std::uint32_t>();
  }
  if (dens.get<std::uint32_t>() != n_objects) {
    throw Error(ErrorCode::kTruncatedSection, "density table size mismatch");
  }
  for (DbObject& o : db.objects) {
    const auto n = dens.get_count(8);
    if (n != db.grid(o.object.cls).size()) {
      throw Error(ErrorCode::kTruncatedSection, "density vector size mismatch");
    }
    o.densities.resize(n);
    for (double& d : o.densities) d = dens.get<double>();
  }
  expect_consumed(dens, kDensities);

  Reader idx = take_section(in, kIndex);
  if (idx.get<std::uint32_t>() != n_objects) {
    throw Error(ErrorCode::kTruncatedSection, "candidate index size mismatch");
  }
  db.index.candidates.resize(n_objects);
  for (auto& list : db.index.candidates) {
    const auto n = idx.get_count(4);
    list.resize(n);
    for (auto& id : list) {
      id = idx.get<std::uint32_t>();
      if (id >= n_objects) throw Error(ErrorCode::kTruncatedSection, "candidate id out of range");
    }
  }
  expect_consumed(idx, kIndex);
  if (!in.done()) throw Error(ErrorCode::kTruncatedSection, "trailing data after index");

  db.finalize();
  return db;
}

void save_database(const GtDatabase& db, const std::filesystem::path& path) {
  const std::string bytes = serialize_database(db);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open for writing " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

GtDatabase load_database(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_database(ss.str());
}

}  // namespace drcpo
