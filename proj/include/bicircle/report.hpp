#pragma once

// Scene configuration (JSON), report documents, and mesh export. The report
// layout is versioned ("bicircle-report/1"); numbers are serialized with 17
// significant digits plus exact rational strings where available, so equal
// inputs produce byte-identical reports.

#include "bicircle/classify.hpp"
#include "bicircle/dual.hpp"
#include "bicircle/edge.hpp"
#include "bicircle/hull.hpp"
#include "bicircle/mesh.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace bicircle {

using json = nlohmann::ordered_json;

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string rat_string(const Rat& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

inline std::string quadext_string(const QuadExt& x) {
  if (x.is_rational()) return rat_string(x.p);
  std::ostringstream os;
  os << rat_string(x.p) << " + " << rat_string(x.q) << "*sqrt(" << rat_string(x.D) << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Scene configuration.

struct SceneConfig {
  bool exact_mode = true;
  double tol = kTol;
  CircleQ c1{{Rat(0), Rat(0), Rat(0)}, Rat(1), {Rat(0), Rat(0), Rat(1)}};
  CircleQ c2{{Rat(0), Rat(0), Rat(0)}, Rat(1), {Rat(0), Rat(0), Rat(1)}};
  std::optional<std::array<ConicQ, 2>> raw_conics;  // explicit parametrizations
  json raw;

  CircleD c1d() const { return to_d(c1); }
  CircleD c2d() const { return to_d(c2); }
  ConicQ conic1() const { return raw_conics ? (*raw_conics)[0] : circle_parametrization(c1); }
  ConicQ conic2() const { return raw_conics ? (*raw_conics)[1] : circle_parametrization(c2); }
};

namespace detail {

inline Rat json_rat(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rat((long long)v.get<long long>());
  if (v.is_number()) return snap_rational(v.get<double>(), 1e-15);
  throw std::invalid_argument("expected a number or rational string");
}

inline Vec3q json_vec(const json& v) {
  if (!v.is_array() || v.size() != 3) throw std::invalid_argument("expected [x, y, z]");
  return {json_rat(v[0]), json_rat(v[1]), json_rat(v[2])};
}

}  // namespace detail

inline SceneConfig parse_scene(const json& j) {
  SceneConfig cfg;
  cfg.raw = j;
  if (j.contains("schema") && j["schema"] != "bicircle-scene/1")
    throw std::invalid_argument("unsupported scene schema");
  if (j.contains("mode")) cfg.exact_mode = j["mode"] == "exact";
  if (j.contains("tolerances") && j["tolerances"].contains("absolute"))
    cfg.tol = j["tolerances"]["absolute"].get<double>();
  if (!j.contains("circles") || !j["circles"].is_array() || j["circles"].size() != 2)
    throw std::invalid_argument("config must list exactly two circles");

  auto parse_circle = [&](const json& c) {
    Vec3q center = detail::json_vec(c.at("center"));
    Rat radius = detail::json_rat(c.at("radius"));
    Vec3q n = detail::json_vec(c.at("normal"));
    if (!cfg.exact_mode) {
      // float mode: snap the scene to small rationals at the declared
      // tolerance; exact classification then applies to the snapped scene
      center = {snap_rational(to_double(center.x), cfg.tol),
                snap_rational(to_double(center.y), cfg.tol),
                snap_rational(to_double(center.z), cfg.tol)};
      radius = snap_rational(to_double(radius), cfg.tol);
    }
    Rat n2 = n.norm2();
    if (n2 == 0) throw std::invalid_argument("zero normal");
    if (auto len = exact_sqrt(n2)) {
      n = n / *len;
    } else {
      // normalize approximately, then snap back onto the rational sphere
      n = snap_unit(normalized(to_d(n)), cfg.exact_mode ? 1e-15 : cfg.tol);
    }
    return CircleQ(center, radius, n);
  };
  cfg.c1 = parse_circle(j["circles"][0]);
  cfg.c2 = parse_circle(j["circles"][1]);

  if (j.contains("parametrizations")) {
    const auto& ps = j["parametrizations"];
    if (!ps.is_array() || ps.size() != 2)
      throw std::invalid_argument("parametrizations must list two 4x3 arrays");
    std::array<ConicQ, 2> pcs;
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 4; ++i) {
        std::vector<Rat> cs(3);
        for (int m = 0; m < 3; ++m) cs[m] = detail::json_rat(ps[k][i][m]);
        pcs[k].f[i] = BinaryForm<Rat>(cs);
      }
      if (coefficient_rank(pcs[k]) != 3)
        throw std::invalid_argument("parametrization coefficients must have rank 3");
    }
    cfg.raw_conics = pcs;
  }

  // validate distinct planes now so every command can rely on it
  try {
    plane_intersection(cfg.c1.plane(), cfg.c2.plane());
  } catch (const IdenticalPlanes&) {
    throw CoplanarCircles("the two circles lie in the same plane");
  }
  return cfg;
}

inline SceneConfig load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j = json::parse(in);
  return parse_scene(j);
}

// ---------------------------------------------------------------------------
// Report fragments.

inline json circle_json(const CircleQ& c) {
  return json{{"center", {rat_string(c.center.x), rat_string(c.center.y), rat_string(c.center.z)}},
              {"radius", rat_string(c.radius)},
              {"normal", {rat_string(c.normal.x), rat_string(c.normal.y), rat_string(c.normal.z)}}};
}

inline json vec_json(const Vec3d& v) {
  return json::array({format_double(v.x), format_double(v.y), format_double(v.z)});
}

inline json report_header(const std::string& command) {
  return json{{"schema", "bicircle-report/1"}, {"command", command}};
}

inline json order_type_json(const OrderType& ot) {
  json points = json::array();
  for (const auto& p : ot.points) {
    const char* label = p.label == 3 ? "S" : (p.label == 1 ? "1" : "2");
    points.push_back(json{{"t", quadext_string(p.t)},
                          {"t_value", format_double(p.t.value())},
                          {"label", label},
                          {"point", vec_json(p.point)}});
  }
  json out{{"tag", to_string(ot.tag)},
           {"intersection_type", {ot.m.m1, ot.m.m2}},
           {"parallel_planes", ot.parallel_planes},
           {"swapped", ot.swapped},
           {"l_points", points}};
  return out;
}

inline json face_lattice_json(const FaceLatticeDescriptor& fl) {
  json two = json::array();
  for (const auto& tf : fl.two_faces) {
    json f{{"disc", tf.disc + 1}};
    f["kind"] = tf.apex ? "disc plus point" : "full disc";
    if (tf.apex) f["apex"] = vec_json(*tf.apex);
    two.push_back(f);
  }
  json fams = json::array();
  for (const auto& fm : fl.families) {
    json f{{"parameterized_by", fm.param_circle + 1},
           {"domain", fm.full_circle ? "full circle" : "arc"},
           {"edges_per_interior_point", fm.edges_per_interior_point}};
    if (!fm.full_circle)
      f["arc"] = {format_double(fm.arc[0]), format_double(fm.arc[1])};
    if (fm.branched_double_cover) f["branched_double_cover"] = true;
    fams.push_back(f);
  }
  json zero = json::array();
  for (int i = 0; i < 2; ++i) {
    json z{{"circle", i + 1}, {"extreme", fl.extreme[i].full ? "full" : "arcs"}};
    if (!fl.extreme[i].full) {
      json arcs = json::array();
      for (auto& a : fl.extreme[i].arcs)
        arcs.push_back({format_double(a[0]), format_double(a[1])});
      z["arcs"] = arcs;
    }
    if (!fl.extreme[i].excluded_angles.empty()) {
      json ex = json::array();
      for (double a : fl.extreme[i].excluded_angles) ex.push_back(format_double(a));
      z["excluded_angles"] = ex;
    }
    zero.push_back(z);
  }
  json nep = json::array();
  for (const auto& p : fl.nonexposed_points) nep.push_back(vec_json(p));
  json neb = json::array();
  for (const auto& b : fl.nonexposed_bisecants)
    neb.push_back(json::array({vec_json(b[0]), vec_json(b[1])}));
  json out{{"combinatorial_class", fl.combinatorial_class},
           {"zero_faces", fl.table_row.zero_faces},
           {"one_faces", fl.table_row.one_faces},
           {"two_faces_summary", fl.table_row.two_faces},
           {"two_faces", two},
           {"bisecant_families", fams},
           {"extreme_sets", zero},
           {"nonexposed_points", nep},
           {"nonexposed_bisecants", neb}};
  if (fl.isolated_bisecant)
    out["isolated_bisecant"] =
        json::array({vec_json((*fl.isolated_bisecant)[0]), vec_json((*fl.isolated_bisecant)[1])});
  return out;
}

inline json lmi_json(const LMIRepresentation& lmi) {
  json blocks = json::array();
  for (const auto& mats : lmi.matrices()) {
    json entry = json::array();
    for (int k = 0; k < 4; ++k) {
      json m = json::array();
      for (const auto& row : mats[k]) {
        json r = json::array();
        for (double v : row) r.push_back(format_double(v));
        m.push_back(r);
      }
      entry.push_back(m);
    }
    blocks.push_back(json{{"A", entry}});
  }
  return json{{"blocks", blocks},
              {"note", "each block lists A0, A1, A2, A3 with A0 + x A1 + y A2 + z A3 >= 0"}};
}

inline json bideg22_json(const Bideg22Form<Rat>& f) {
  json grid = json::array();
  for (int i = 0; i <= 2; ++i) {
    json row = json::array();
    for (int jj = 0; jj <= 2; ++jj) row.push_back(rat_string(f.at(i, jj)));
    grid.push_back(row);
  }
  return grid;
}

inline json branch_json(const BranchData& bd) {
  json roots = json::array();
  for (const auto& r : bd.roots) {
    roots.push_back(json{{"s", format_double(r.s.real())},
                         {"t_re", format_double(r.t.real())},
                         {"t_im", format_double(r.t.imag())},
                         {"multiplicity", r.multiplicity},
                         {"real", r.real}});
  }
  json quartic = json::array();
  for (const auto& c : bd.quartic.c) quartic.push_back(rat_string(c));
  return json{{"quartic", quartic}, {"real_count", bd.real_count}, {"roots", roots}};
}

// ---------------------------------------------------------------------------
// OBJ export: ASCII, 'v x y z' vertices, 'f i j k' faces, patches as groups.

inline void write_obj(std::ostream& os, const RuledMesh& mesh) {
  os << "# bicircle mesh\n";
  for (const auto& v : mesh.vertices)
    os << "v " << format_double(v.x) << " " << format_double(v.y) << " " << format_double(v.z)
       << "\n";
  int current = -1;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    if (mesh.patch_of_triangle[i] != current) {
      current = mesh.patch_of_triangle[i];
      os << "g " << mesh.patches[current] << "\n";
    }
    const auto& t = mesh.triangles[i];
    os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
}

}  // namespace bicircle
