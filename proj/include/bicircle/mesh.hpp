#pragma once

// Boundary mesh of the convex hull: planar 2-faces triangulated per the face
// lattice, and the boundary bisecant families swept into ruled strips with
// continuity-based branch tracking. On-circle vertices are cached by angle so
// adjacent patches share them and closed hulls mesh watertight.

#include "bicircle/classify.hpp"
#include "bicircle/hull.hpp"
#include "bicircle/parallel.hpp"

#include <map>
#include <set>

namespace bicircle {

struct RuledMesh {
  std::vector<Vec3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> patch_of_triangle;
  std::vector<std::string> patches;  // "planar-face" or "ruled-strip" groups

  int add_vertex(const Vec3d& p) {
    vertices.push_back(p);
    return (int)vertices.size() - 1;
  }
  int add_patch(const std::string& tag) {
    patches.push_back(tag);
    return (int)patches.size() - 1;
  }
  void add_triangle(int a, int b, int c, int patch) {
    if (a == b || b == c || a == c) return;
    triangles.push_back({a, b, c});
    patch_of_triangle.push_back(patch);
  }

  double area() const {
    double s = 0;
    for (const auto& t : triangles) {
      Vec3d e1 = vertices[t[1]] - vertices[t[0]];
      Vec3d e2 = vertices[t[2]] - vertices[t[0]];
      s += 0.5 * norm(e1.cross(e2));
    }
    return s;
  }

  // Euler characteristic after fusing coincident vertices.
  int euler_characteristic(double tol = 1e-9) const {
    std::vector<int> remap(vertices.size());
    std::vector<Vec3d> unique_v;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      int found = -1;
      for (std::size_t j = 0; j < unique_v.size(); ++j)
        if (norm(vertices[i] - unique_v[j]) < tol) { found = (int)j; break; }
      if (found < 0) {
        unique_v.push_back(vertices[i]);
        found = (int)unique_v.size() - 1;
      }
      remap[i] = found;
    }
    std::set<std::pair<int, int>> edges;
    int faces = 0;
    for (const auto& t : triangles) {
      int a = remap[t[0]], b = remap[t[1]], c = remap[t[2]];
      if (a == b || b == c || a == c) continue;
      ++faces;
      edges.insert({std::min(a, b), std::max(a, b)});
      edges.insert({std::min(b, c), std::max(b, c)});
      edges.insert({std::min(a, c), std::max(a, c)});
    }
    return (int)unique_v.size() - (int)edges.size() + faces;
  }
};

namespace detail {

inline void orient_outward(RuledMesh& mesh, const Vec3d& interior) {
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    auto& t = mesh.triangles[i];
    Vec3d a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
    Vec3d n = (b - a).cross(c - a);
    Vec3d cen = (a + b + c) / 3.0;
    if (n.dot(cen - interior) < 0) std::swap(t[1], t[2]);
  }
}

}  // namespace detail

// Boundary mesh driven by the face lattice.
inline RuledMesh boundary_mesh(const CircleQ& c1q, const CircleQ& c2q, int resolution) {
  if (resolution < 16) throw std::invalid_argument("resolution must be at least 16");
  OrderType ot = order_type(c1q, c2q);
  FaceLatticeDescriptor fl = face_lattice(ot, c1q, c2q);
  CircleD cd[2] = {to_d(c1q), to_d(c2q)};
  RuledMesh mesh;

  // angle-keyed vertex cache per circle, so strips and disc fans fuse
  std::array<std::map<long long, int>, 2> ring;
  auto on_circle_vertex = [&](int ci, double angle) {
    double a = std::fmod(angle, 2 * M_PI);
    if (a < 0) a += 2 * M_PI;
    long long key = (long long)std::llround(a * 1e12);
    if (key >= (long long)std::llround(2 * M_PI * 1e12)) key = 0;
    auto it = ring[ci].find(key);
    if (it != ring[ci].end()) return it->second;
    int id = mesh.add_vertex(circle_point(cd[ci], a));
    ring[ci].emplace(key, id);
    return id;
  };

  int strip_id = 0;
  auto sweep = [&](int ci, double a0, double a1, bool full) {
    const CircleD& src = cd[ci];
    const CircleD& dst = cd[1 - ci];
    const int n = resolution;
    std::vector<double> thetas;
    for (int k = 0; k <= n; ++k) {
      if (full) {
        thetas.push_back(a0 + 2 * M_PI * k / (n + 1.0));
      } else {
        double x = (double)k / n;  // cluster toward the branch-point ends
        thetas.push_back(a0 + (a1 - a0) * (0.5 - 0.5 * std::cos(M_PI * x)));
      }
    }
    // boundary partners per column
    std::vector<std::vector<Vec3d>> cols(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t k) {
      auto fan = stationary_bisecants_through(src, dst, thetas[k], 1e-10);
      if (fan.kind == FanKind::Pencil) return;  // sector belongs to a 2-face
      for (const auto& t : fan.tangency) {
        double th2 = detail::angle_of_point(dst, t);
        try {
          if (is_boundary_bisecant(src, dst, thetas[k], th2, 1e-7)) cols[k].push_back(t);
        } catch (const NotOnEdgeCurve&) {
        }
      }
    });
    std::size_t maxw = 0;
    for (auto& c : cols) maxw = std::max(maxw, c.size());
    if (maxw == 0) return;

    // branch tracking into maxw strips of (theta, partner-angle) pairs
    std::vector<std::vector<std::array<double, 2>>> strips(maxw);
    std::vector<Vec3d> last(maxw);
    bool seeded = false;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      auto ps = cols[k];
      if (ps.empty()) continue;
      if (ps.size() == 1) {
        for (std::size_t s = 0; s < maxw; ++s) {
          strips[s].push_back({thetas[k], detail::angle_of_point(dst, ps[0])});
          last[s] = ps[0];
        }
        seeded = true;
        continue;
      }
      if (!seeded) {
        for (std::size_t s = 0; s < maxw && s < ps.size(); ++s) {
          strips[s].push_back({thetas[k], detail::angle_of_point(dst, ps[s])});
          last[s] = ps[s];
        }
        seeded = true;
        continue;
      }
      double keep = norm(ps[0] - last[0]) + (maxw > 1 && ps.size() > 1 ? norm(ps[1] - last[1]) : 0.0);
      double swap = (ps.size() > 1)
                        ? norm(ps[1] - last[0]) + (maxw > 1 ? norm(ps[0] - last[1]) : 0.0)
                        : keep + 1;
      if (swap < keep) std::reverse(ps.begin(), ps.end());
      for (std::size_t s = 0; s < maxw && s < ps.size(); ++s) {
        strips[s].push_back({thetas[k], detail::angle_of_point(dst, ps[s])});
        last[s] = ps[s];
      }
    }
    for (auto& s : strips) {
      if (s.size() < 2) continue;
      if (full) s.push_back(s.front());
      int patch = mesh.add_patch("ruled-strip-" + std::to_string(strip_id++));
      std::vector<int> pids, qids;
      for (std::size_t k = 0; k < s.size(); ++k) {
        pids.push_back(on_circle_vertex(ci, s[k][0]));
        qids.push_back(on_circle_vertex(1 - ci, s[k][1]));
      }
      for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        mesh.add_triangle(pids[k], qids[k], qids[k + 1], patch);
        mesh.add_triangle(pids[k], qids[k + 1], pids[k + 1], patch);
      }
    }
  };

  if (!fl.families.empty()) {
    const auto& fam = fl.families.front();
    if (fam.full_circle) {
      sweep(fam.param_circle, 0, 2 * M_PI, true);
    } else {
      for (const auto& arc : fl.extreme[fam.param_circle].arcs)
        sweep(fam.param_circle, arc[0], arc[1], false);
    }
  }

  // planar faces
  for (const auto& tf : fl.two_faces) {
    const CircleD& c = cd[tf.disc];
    int patch = mesh.add_patch("planar-face-" + std::to_string(tf.disc + 1));
    if (!tf.apex) {
      int cen = mesh.add_vertex(c.center);
      // reuse the ring laid down by the strips when it covers the circle,
      // otherwise sample a fresh ring
      std::vector<int> ids;
      if ((int)ring[tf.disc].size() >= resolution / 2) {
        for (const auto& [key, id] : ring[tf.disc]) ids.push_back(id);
      } else {
        for (int k = 0; k < resolution; ++k)
          ids.push_back(on_circle_vertex(tf.disc, 2 * M_PI * k / resolution));
      }
      for (std::size_t k = 0; k < ids.size(); ++k)
        mesh.add_triangle(cen, ids[k], ids[(k + 1) % ids.size()], patch);
    } else {
      // conv(D, apex): the face is convex, fan from the apex over the far arc
      Vec3d z = *tf.apex;
      auto [u, v] = circle_frame<double>(c.normal);
      Vec3d w = z - c.center;
      double alpha = std::atan2(w.dot(v), w.dot(u));
      double psi = std::acos(std::min(1.0, c.radius / norm(w)));
      double s0 = alpha + psi, s1 = alpha - psi + 2 * M_PI;
      int apex = mesh.add_vertex(z);
      std::vector<int> arcv;
      for (int k = 0; k <= resolution; ++k)
        arcv.push_back(on_circle_vertex(tf.disc, s0 + (s1 - s0) * k / resolution));
      for (int k = 0; k < resolution; ++k) mesh.add_triangle(apex, arcv[k], arcv[k + 1], patch);
    }
  }

  detail::orient_outward(mesh, (cd[0].center + cd[1].center) / 2.0);
  return mesh;
}

}  // namespace bicircle
