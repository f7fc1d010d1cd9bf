#pragma once

// Projective duality for the hull of two circles: the dual quadratic cone of
// each circle in affine dual coordinates anchored at an interior origin o
// (planes {x : w.(x-o) + 1 = 0}), the dual convex body with closed-form
// membership, boundary classification, and a marched dual mesh.

#include "bicircle/errors.hpp"
#include "bicircle/geom3.hpp"
#include "bicircle/hull.hpp"
#include "bicircle/mesh.hpp"
#include "bicircle/parallel.hpp"

namespace bicircle {

struct DualCone {
  Vec3d center_offset;  // c - o
  double radius = 1;
  Vec3d normal;
  Vec3d origin;
  bool is_cylinder = false;          // o lies on the circle's plane
  std::optional<Vec3d> vertex;       // dual point of the circle's plane

  // plane w supports/misses the disc by the sign of this concave margin
  double margin(const Vec3d& w) const {
    Vec3d wp = w - normal * w.dot(normal);
    return w.dot(center_offset) + 1 - radius * norm(wp);
  }
  // quadratic form of the cone
  double qform(const Vec3d& w) const {
    Vec3d wp = w - normal * w.dot(normal);
    double lin = w.dot(center_offset) + 1;
    return lin * lin - radius * radius * wp.norm2();
  }
  // contact point on the circle for an active supporting plane
  Vec3d contact(const Vec3d& w) const {
    Vec3d wp = w - normal * w.dot(normal);
    double n = norm(wp);
    if (n < 1e-14) return center_offset + origin;  // degenerate: whole disc
    return center_offset + origin - wp * (radius / n);
  }
};

inline DualCone dual_cone(const CircleD& c, const Vec3d& o) {
  DualCone out;
  out.center_offset = c.center - o;
  out.radius = c.radius;
  out.normal = c.normal;
  out.origin = o;
  double h = c.plane().eval(o);
  out.is_cylinder = std::fabs(h) <= kTol;
  if (!out.is_cylinder) out.vertex = c.normal / h;  // the w whose plane is Pi
  return out;
}

struct DualBody {
  DualCone k1, k2;
  Vec3d o;
  double inscribed_radius = 0;  // of K at o
  double norm_bound = 0;        // members satisfy |w| < 1/inscribed_radius

  double min_margin(const Vec3d& w) const { return std::min(k1.margin(w), k2.margin(w)); }
  bool contains(const Vec3d& w, double tol = 0) const { return min_margin(w) >= -tol; }
};

namespace detail {

// inscribed-ball radius of K at o: min over directions of h_K(w) - w.o,
// Fibonacci sweep plus local refinement
inline double inscribed_radius(const CircleD& c1, const CircleD& c2, const Vec3d& o) {
  auto depth = [&](const Vec3d& w) {
    return std::max(disc_support(c1, w), disc_support(c2, w)) - w.dot(o);
  };
  int N = 4096;
  double best = std::numeric_limits<double>::max();
  Vec3d bw{0, 0, 1};
  for (int i = 0; i < N; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / N;
    double r = std::sqrt(std::max(0.0, 1 - z * z));
    double phi = i * 2.39996322972865332;
    Vec3d w{r * std::cos(phi), r * std::sin(phi), z};
    double d = depth(w);
    if (d < best) { best = d; bw = w; }
  }
  double step = 0.1;
  while (step > 1e-12) {
    bool improved = false;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          if (!dx && !dy && !dz) continue;
          Vec3d w = normalized(bw + Vec3d{dx * step, dy * step, dz * step});
          double d = depth(w);
          if (d < best) { best = d; bw = w; improved = true; }
        }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace detail

inline DualBody dual_body(const CircleD& c1, const CircleD& c2, const Vec3d& o) {
  if (membership(c1, c2, o, 1e-9).verdict != Verdict::Inside)
    throw OriginNotInterior("dual origin must be strictly interior to the hull");
  DualBody out;
  out.k1 = dual_cone(c1, o);
  out.k2 = dual_cone(c2, o);
  out.o = o;
  out.inscribed_radius = detail::inscribed_radius(c1, c2, o);
  out.norm_bound = 1.0 / out.inscribed_radius;
  return out;
}

// Default origin: the midpoint of the centers when interior, otherwise the
// deepest point of the center segment by inscribed-ball radius.
inline Vec3d default_dual_origin(const CircleD& c1, const CircleD& c2) {
  Vec3d mid = (c1.center + c2.center) / 2.0;
  if (membership(c1, c2, mid, 1e-9).verdict == Verdict::Inside) return mid;
  Vec3d best = mid;
  double best_r = -1;
  for (int j = 1; j < 16; ++j) {
    Vec3d p = c1.center + (c2.center - c1.center) * (j / 16.0);
    double r = detail::inscribed_radius(c1, c2, p);
    if (r > best_r) { best_r = r; best = p; }
  }
  if (best_r <= 1e-12) throw OriginNotInterior("could not find an interior dual origin");
  return best;
}

enum class DualBoundaryClass { OnC1, OnC2, OnBoth, VertexC1, VertexC2 };

inline const char* to_string(DualBoundaryClass c) {
  switch (c) {
    case DualBoundaryClass::OnC1: return "on the dual cone of C1";
    case DualBoundaryClass::OnC2: return "on the dual cone of C2";
    case DualBoundaryClass::OnBoth: return "stationary-bisecant plane (both cones)";
    case DualBoundaryClass::VertexC1: return "vertex: plane of C1 (2-face)";
    case DualBoundaryClass::VertexC2: return "vertex: plane of C2 (2-face)";
  }
  return "?";
}

struct DualBoundaryInfo {
  DualBoundaryClass cls = DualBoundaryClass::OnC1;
  std::vector<Vec3d> contacts;  // supporting-plane contact points on the circles
};

inline DualBoundaryInfo dual_boundary_classify(const DualBody& db, const Vec3d& w,
                                               double tol = 1e-9) {
  double g1 = db.k1.margin(w), g2 = db.k2.margin(w);
  double band = 64 * tol * (1 + norm(w));
  if (std::min(g1, g2) < -band || std::min(g1, g2) > band) throw NotOnBoundary();
  DualBoundaryInfo out;
  bool a1 = std::fabs(g1) <= band, a2 = std::fabs(g2) <= band;
  auto near_vertex = [&](const DualCone& k) {
    Vec3d wp = w - k.normal * w.dot(k.normal);
    return norm(wp) <= 1e-6 * (1 + norm(w));
  };
  if (a1 && a2) {
    out.cls = DualBoundaryClass::OnBoth;
    out.contacts = {db.k1.contact(w), db.k2.contact(w)};
  } else if (a1) {
    out.cls = near_vertex(db.k1) ? DualBoundaryClass::VertexC1 : DualBoundaryClass::OnC1;
    out.contacts = {db.k1.contact(w)};
  } else {
    out.cls = near_vertex(db.k2) ? DualBoundaryClass::VertexC2 : DualBoundaryClass::OnC2;
    out.contacts = {db.k2.contact(w)};
  }
  return out;
}

// March the boundary of the dual body over a sphere of directions: the
// membership margin is concave along each ray from the interior origin 0.
inline RuledMesh dual_mesh(const DualBody& db, int resolution) {
  if (resolution < 16) throw std::invalid_argument("resolution must be at least 16");
  int nu = resolution, nv = resolution / 2 + 1;
  RuledMesh mesh;
  int pc[3] = {mesh.add_patch("dual-patch-c1"), mesh.add_patch("dual-patch-c2"),
               mesh.add_patch("dual-patch-bitangent")};
  std::vector<int> grid(nu * nv);
  std::vector<int> cls(nu * nv);
  std::vector<Vec3d> pts(nu * nv);
  parallel_for(nu * nv, [&](std::size_t idx) {
    int i = (int)(idx % nu), j = (int)(idx / nu);
    double phi = 2 * M_PI * i / nu;
    double th = M_PI * j / (nv - 1.0);
    Vec3d dir{std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th)};
    double lo = 0, hi = db.norm_bound * 1.0001;
    // expand if the bound estimate was slightly optimistic
    for (int guard = 0; guard < 100 && db.min_margin(dir * hi) > 0; ++guard) hi *= 1.5;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (db.min_margin(dir * mid) > 0) lo = mid;
      else hi = mid;
    }
    double t = 0.5 * (lo + hi);
    pts[idx] = dir * t;
    double g1 = db.k1.margin(pts[idx]), g2 = db.k2.margin(pts[idx]);
    double band = 1e-7 * (1 + t);
    cls[idx] = (std::fabs(g1) < band && std::fabs(g2) < band) ? 2 : (g1 < g2 ? 0 : 1);
  });
  for (int idx = 0; idx < nu * nv; ++idx) grid[idx] = mesh.add_vertex(pts[idx]);
  for (int j = 0; j + 1 < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      int i2 = (i + 1) % nu;
      int a = grid[j * nu + i], b = grid[j * nu + i2];
      int c = grid[(j + 1) * nu + i], d = grid[(j + 1) * nu + i2];
      int tag = pc[std::max(cls[j * nu + i], cls[(j + 1) * nu + i])];
      if (j > 0) mesh.add_triangle(a, b, d, tag);
      if (j + 2 < nv) mesh.add_triangle(a, d, c, tag);
    }
  detail::orient_outward(mesh, {0, 0, 0});
  return mesh;
}

}  // namespace bicircle
