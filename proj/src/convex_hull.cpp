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

#include "drcpo/convex_hull.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "drcpo/rng.hpp"

namespace drcpo {

namespace {

int orient3d_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const mpq_class adx = mpq_class(a.x) - d.x, ady = mpq_class(a.y) - d.y, adz = mpq_class(a.z) - d.z;
  const mpq_class bdx = mpq_class(b.x) - d.x, bdy = mpq_class(b.y) - d.y, bdz = mpq_class(b.z) - d.z;
  const mpq_class cdx = mpq_class(c.x) - d.x, cdy = mpq_class(c.y) - d.y, cdz = mpq_class(c.z) - d.z;
  const mpq_class det = adz * (bdx * cdy - cdx * bdy) + bdz * (cdx * ady - adx * cdy) +
                        cdz * (adx * bdy - bdx * ady);
  return sgn(det);
}

}  // namespace

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  // Static filter from Shewchuk's orient3d; falls back to rational arithmetic.
  constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;
  constexpr double kErrBound = (7.0 + 56.0 * kEps) * kEps;

  const double adx = a.x - d.x, bdx = b.x - d.x, cdx = c.x - d.x;
  const double ady = a.y - d.y, bdy = b.y - d.y, cdy = c.y - d.y;
  const double adz = a.z - d.z, bdz = b.z - d.z, cdz = c.z - d.z;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;

  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  const double bound = kErrBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient3d_exact(a, b, c, d);
}

namespace {

constexpr double kFilterBound =
    (7.0 + 56.0 * std::numeric_limits<double>::epsilon() * 0.5) * std::numeric_limits<double>::epsilon() * 0.5;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

struct Degenerate {};

class QuickHull {
 public:
  explicit QuickHull(std::span<const Vec3> pts) : p_(pts), next_(pts.size(), -1) {
    Vec3 lo = pts.empty() ? Vec3{} : pts[0], hi = lo;
    for (const Vec3& q : pts) {
      lo = {std::min(lo.x, q.x), std::min(lo.y, q.y), std::min(lo.z, q.z)};
      hi = {std::max(hi.x, q.x), std::max(hi.y, q.y), std::max(hi.z, q.z)};
    }
    // Upper bound on |q - a| per axis for any two input points.
    constexpr double kPad = 1.0 + 1e-9;
    extent_ = {(hi.x - lo.x) * kPad, (hi.y - lo.y) * kPad, (hi.z - lo.z) * kPad};
  }

  // Throws Degenerate when no non-degenerate simplex exists or the horizon
  // is not a simple cycle.
  Hull run() {
    build_simplex();
    std::vector<std::int32_t> start_of(p_.size(), -1);
    for (std::int32_t fi = 0; fi < 4; ++fi) {
      if (faces_[fi].head >= 0) pending_.push_back(fi);
    }
    while (!pending_.empty()) {
      const std::int32_t fi = pending_.back();
      pending_.pop_back();
      if (!faces_[fi].alive || faces_[fi].head < 0) continue;
      add_point(fi, start_of);
    }
    Hull hull;
    std::vector<char> is_vertex(p_.size(), 0);
    for (const Face& f : faces_) {
      if (!f.alive) continue;
      hull.faces.push_back({f.v[0], f.v[1], f.v[2]});
      for (auto v : f.v) is_vertex[v] = 1;
    }
    for (std::uint32_t i = 0; i < p_.size(); ++i) {
      if (is_vertex[i]) hull.vertices.push_back(i);
    }
    return hull;
  }

 private:
  struct Face {
    std::uint32_t v[3];
    std::int32_t nb[3] = {-1, -1, -1};
    Vec3 origin;  // copy of p_[v[0]]
    // Rounded (b - a) x (c - a) and the filter bound for the farthest
    // possible query point.
    Vec3 normal;
    double coarse_bound = 0.0;
    std::int32_t head = -1;  // outside-set linked list
    std::int32_t far = -1;
    double far_dist = 0.0;
    std::uint32_t stamp = 0;
    bool visible = false;
    bool alive = true;
  };

  double height(const Face& f, std::uint32_t q) const {
    const Vec3& p = p_[q];
    return (p.x - f.origin.x) * f.normal.x + (p.y - f.origin.y) * f.normal.y + (p.z - f.origin.z) * f.normal.z;
  }

  // Strictly above the face plane.
  bool outside(const Face& f, std::uint32_t q) const {
    const double h = height(f, q);
    if (h > f.coarse_bound) return true;
    if (-h > f.coarse_bound) return false;
    return orient3d(p_[f.v[0]], p_[f.v[1]], p_[f.v[2]], p_[q]) < 0;
  }

  std::int32_t make_face(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    Face f;
    f.v[0] = a;
    f.v[1] = b;
    f.v[2] = c;
    const Vec3 e = sub(p_[b], p_[a]), g = sub(p_[c], p_[a]);
    f.origin = p_[a];
    f.normal = cross(e, g);
    // Same determinant and error analysis as the orient3d filter, with |q - a|
    // bounded by the input extent.
    const Vec3 perm{std::abs(e.y * g.z) + std::abs(e.z * g.y), std::abs(e.z * g.x) + std::abs(e.x * g.z),
                    std::abs(e.x * g.y) + std::abs(e.y * g.x)};
    f.coarse_bound = 1.01 * kFilterBound * (extent_.x * perm.x + extent_.y * perm.y + extent_.z * perm.z);
    if (!free_.empty()) {
      const std::int32_t slot = free_.back();
      free_.pop_back();
      faces_[slot] = f;
      return slot;
    }
    faces_.push_back(f);
    return static_cast<std::int32_t>(faces_.size() - 1);
  }

  void assign(std::int32_t fi, std::uint32_t q) {
    Face& f = faces_[fi];
    next_[q] = f.head;
    f.head = static_cast<std::int32_t>(q);
    const double d = height(f, q);
    if (f.far < 0 || d > f.far_dist) {
      f.far = static_cast<std::int32_t>(q);
      f.far_dist = d;
    }
  }

  void build_simplex() {
    const std::size_t n = p_.size();
    // Extreme points along each axis; the farthest-apart pair seeds the simplex.
    std::array<std::uint32_t, 6> ext{};
    for (std::uint32_t i = 0; i < n; ++i) {
      const Vec3& q = p_[i];
      if (q.x < p_[ext[0]].x) ext[0] = i;
      if (q.x > p_[ext[1]].x) ext[1] = i;
      if (q.y < p_[ext[2]].y) ext[2] = i;
      if (q.y > p_[ext[3]].y) ext[3] = i;
      if (q.z < p_[ext[4]].z) ext[4] = i;
      if (q.z > p_[ext[5]].z) ext[5] = i;
    }
    std::uint32_t i0 = 0, i1 = 0;
    double best = 0.0;
    for (auto a : ext) {
      for (auto b : ext) {
        const Vec3 d = sub(p_[a], p_[b]);
        if (dot(d, d) > best) {
          best = dot(d, d);
          i0 = a;
          i1 = b;
        }
      }
    }
    if (best == 0.0) throw Degenerate{};

    const Vec3 axis = sub(p_[i1], p_[i0]);
    std::uint32_t i2 = i0;
    best = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const Vec3 c = cross(axis, sub(p_[i], p_[i0]));
      if (dot(c, c) > best) {
        best = dot(c, c);
        i2 = i;
      }
    }
    if (best == 0.0) throw Degenerate{};

    const Vec3 normal = cross(axis, sub(p_[i2], p_[i0]));
    std::uint32_t i3 = i0;
    best = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double d = std::abs(dot(normal, sub(p_[i], p_[i0])));
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    int o = best > 0.0 ? orient3d(p_[i0], p_[i1], p_[i2], p_[i3]) : 0;
    if (o == 0) {
      // The float estimate can miss a point that is off-plane only in exact
      // arithmetic.
      for (std::uint32_t i = 0; i < n && o == 0; ++i) {
        o = orient3d(p_[i0], p_[i1], p_[i2], p_[i]);
        if (o != 0) i3 = i;
      }
      if (o == 0) throw Degenerate{};
    }
    if (o < 0) std::swap(i1, i2);

    const std::uint32_t a = i0, b = i1, c = i2, d = i3;
    const std::int32_t f0 = make_face(a, b, c);
    const std::int32_t f1 = make_face(a, d, b);
    const std::int32_t f2 = make_face(a, c, d);
    const std::int32_t f3 = make_face(b, d, c);
    for (std::int32_t fi : {f0, f1, f2, f3}) {
      for (int k = 0; k < 3; ++k) {
        const std::uint32_t u = faces_[fi].v[k], w = faces_[fi].v[(k + 1) % 3];
        for (std::int32_t gi : {f0, f1, f2, f3}) {
          if (gi == fi) continue;
          for (int j = 0; j < 3; ++j) {
            if (faces_[gi].v[j] == w && faces_[gi].v[(j + 1) % 3] == u) faces_[fi].nb[k] = gi;
          }
        }
      }
    }

    for (std::uint32_t i = 0; i < n; ++i) {
      if (i == a || i == b || i == c || i == d) continue;
      for (std::int32_t fi : {f0, f1, f2, f3}) {
        if (outside(faces_[fi], i)) {
          assign(fi, i);
          break;
        }
      }
    }
  }

  void redistribute(std::uint32_t q) {
    for (std::int32_t nf : created_) {
      if (outside(faces_[nf], q)) return assign(nf, q);
    }
  }

  void add_point(std::int32_t start, std::vector<std::int32_t>& start_of) {
    const auto eye = static_cast<std::uint32_t>(faces_[start].far);
    ++stamp_;

    visible_.clear();
    faces_[start].stamp = stamp_;
    faces_[start].visible = true;
    visible_.push_back(start);
    for (std::size_t i = 0; i < visible_.size(); ++i) {
      const Face& f = faces_[visible_[i]];
      for (std::int32_t g : f.nb) {
        Face& nf = faces_[g];
        if (nf.stamp == stamp_) continue;
        nf.stamp = stamp_;
        nf.visible = outside(nf, eye);
        if (nf.visible) visible_.push_back(g);
      }
    }

    created_.clear();
    for (std::int32_t fi : visible_) {
      for (int k = 0; k < 3; ++k) {
        const std::int32_t g = faces_[fi].nb[k];
        if (faces_[g].visible && faces_[g].stamp == stamp_) continue;
        const std::uint32_t u = faces_[fi].v[k];
        const std::uint32_t w = faces_[fi].v[(k + 1) % 3];
        if (start_of[u] >= 0) {
          for (std::int32_t c : created_) start_of[faces_[c].v[0]] = -1;
          throw Degenerate{};
        }
        const std::int32_t nf = make_face(u, w, eye);
        faces_[nf].nb[0] = g;
        Face& outer = faces_[g];
        for (int j = 0; j < 3; ++j) {
          if (outer.v[j] == w && outer.v[(j + 1) % 3] == u) outer.nb[j] = nf;
        }
        start_of[u] = nf;
        created_.push_back(nf);
      }
    }
    for (std::int32_t nf : created_) {
      const std::int32_t succ = start_of[faces_[nf].v[1]];
      if (succ < 0) {
        for (std::int32_t c : created_) start_of[faces_[c].v[0]] = -1;
        throw Degenerate{};
      }
      faces_[nf].nb[1] = succ;
      faces_[succ].nb[2] = nf;
    }
    for (std::int32_t nf : created_) start_of[faces_[nf].v[0]] = -1;

    for (std::int32_t fi : visible_) {
      Face& f = faces_[fi];
      f.alive = false;
      for (std::int32_t q = f.head; q >= 0;) {
        const std::int32_t nq = next_[q];
        const auto uq = static_cast<std::uint32_t>(q);
        if (uq != eye) redistribute(uq);
        q = nq;
      }
      f.head = -1;
      free_.push_back(fi);
    }
    for (std::int32_t nf : created_) {
      if (faces_[nf].head >= 0) pending_.push_back(nf);
    }
  }

  std::span<const Vec3> p_;
  Vec3 extent_;
  std::vector<std::int32_t> next_;
  std::vector<Face> faces_;
  std::vector<std::int32_t> visible_;
  std::vector<std::int32_t> created_;
  std::vector<std::int32_t> free_;
  std::vector<std::int32_t> pending_;
  std::uint32_t stamp_ = 0;
};

}  // namespace

Hull convex_hull(std::span<const Vec3> points, double jitter) {
  Hull hull;
  if (points.size() < 4) {
    hull.vertices.resize(points.size());
    std::iota(hull.vertices.begin(), hull.vertices.end(), 0u);
    return hull;
  }
  try {
    return QuickHull(points).run();
  } catch (const Degenerate&) {
  }
  // Deterministic perturbation; grows if the perturbed set is still flat.
  Rng rng(0x5eedULL);
  double scale = jitter > 0.0 ? jitter : 1e-7;
  for (int attempt = 0; attempt < 8; ++attempt, scale *= 10.0) {
    std::vector<Vec3> perturbed(points.begin(), points.end());
    for (Vec3& q : perturbed) {
      q.x += rng.uniform(-scale, scale);
      q.y += rng.uniform(-scale, scale);
      q.z += rng.uniform(-scale, scale);
    }
    try {
      hull = QuickHull(perturbed).run();
      hull.jittered = true;
      return hull;
    } catch (const Degenerate&) {
    }
  }
  // Every point coincides: nothing but the first point is extreme.
  hull.vertices = {0};
  hull.jittered = true;
  return hull;
}

std::vector<std::uint32_t> convex_hull_vertices(std::span<const Vec3> points, double jitter) {
  return convex_hull(points, jitter).vertices;
}

}  // namespace drcpo
