// Command-line surface for the two-circle convex hull engine: classification,
// edge-curve data, bisecant queries, membership and support oracles, line
// sections of the edge surface, boundary and dual meshes, and LMI output.

#include "bicircle/report.hpp"

#include <CLI11.hpp>

#include <random>

#include <fstream>
#include <iostream>

namespace bc = bicircle;
using bc::json;

namespace {

bc::Vec3<double> parse_vec3(const std::string& s) {
  bc::Vec3<double> v;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.x, &v.y, &v.z) != 3)
    throw CLI::ValidationError("expected x,y,z");
  return v;
}

std::pair<bc::Vec3q, bc::Vec3q> parse_line_spec(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("expected bx,by,bz:dx,dy,dz");
  auto vec = [](const std::string& part) {
    std::array<std::string, 3> comp;
    std::stringstream ss(part);
    for (int i = 0; i < 3; ++i)
      if (!std::getline(ss, comp[i], ',')) throw CLI::ValidationError("expected three numbers");
    return bc::Vec3q{bc::parse_rational(comp[0]), bc::parse_rational(comp[1]),
                     bc::parse_rational(comp[2])};
  };
  return {vec(s.substr(0, colon)), vec(s.substr(colon + 1))};
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    f << report.dump(2) << "\n";
  }
}

json classify_report(const bc::SceneConfig& cfg) {
  json rep = bc::report_header("classify");
  rep["circles"] = {bc::circle_json(cfg.c1), bc::circle_json(cfg.c2)};
  auto ot = bc::order_type(cfg.c1, cfg.c2);
  rep["order_type"] = bc::order_type_json(ot);
  auto E = bc::edge_form(cfg.conic1(), cfg.conic2());
  auto ct = bc::classify_curve(E);
  rep["curve_type"] = bc::to_string(ct.tag);
  if (ct.tag == bc::CurveTag::TwoOneOne)
    rep["component_pair"] = ct.pair_real ? "two real (1,1) components"
                                         : "complex-conjugate (1,1) pair";
  if (ct.tag == bc::CurveTag::SmoothGenusOne)
    rep["j_invariant"] = bc::format_double(bc::j_invariant(E));
  rep["real_components"] = bc::real_components(E).count;
  rep["face_lattice"] = bc::face_lattice_json(bc::face_lattice(ot, cfg.c1, cfg.c2));
  auto sp = bc::spectrahedron(cfg.c1, cfg.c2);
  rep["spectrahedron"] = sp.is_spectrahedron;
  if (!sp.is_spectrahedron) rep["spectrahedron_obstruction"] = sp.reason;
  if (sp.lmi) rep["lmi"] = bc::lmi_json(*sp.lmi);
  return rep;
}

json edge_curve_report(const bc::SceneConfig& cfg) {
  json rep = bc::report_header("edge-curve");
  auto E = bc::edge_form(cfg.conic1(), cfg.conic2());
  rep["coefficients"] = bc::bideg22_json(E);
  rep["curve_type"] = bc::to_string(bc::classify_curve(E).tag);
  auto [st, uv] = bc::discriminants(E);
  rep["discriminant_st"] = bc::branch_json(st);
  rep["discriminant_uv"] = bc::branch_json(uv);
  json sing = json::array();
  for (const auto& sp : bc::singular_points(E, cfg.c1, cfg.c2)) {
    static const char* cases[] = {"i", "ii", "iii", "iv", "v"};
    json s{{"s", bc::format_double(sp.s)},
           {"t", bc::format_double(sp.t)},
           {"u", bc::format_double(sp.u)},
           {"v", bc::format_double(sp.v)},
           {"case", cases[(int)sp.lemma_case]},
           {"node", sp.is_node}};
    if (sp.exact) {
      s["exact"] = {bc::rat_string((*sp.exact)[0]), bc::rat_string((*sp.exact)[1]),
                    bc::rat_string((*sp.exact)[2]), bc::rat_string((*sp.exact)[3])};
    }
    sing.push_back(s);
  }
  rep["singular_points"] = sing;
  rep["real_components"] = bc::real_components(E).count;
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex hulls of two circles in 3-space"};
  app.require_subcommand(1);

  std::string config_path, out_path, point_arg, dir_arg, line_arg, origin_arg = "auto";
  double param = 0;
  int resolution = 256;
  unsigned long seed = 0;
  int fuzz_count = 100;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "scene configuration JSON")->required();
    cmd->add_option("--out", out_path, "output path (default stdout)");
  };

  auto* c_classify = app.add_subcommand("classify", "order type, face lattice, curve type");
  add_config(c_classify);
  auto* c_edge = app.add_subcommand("edge-curve", "edge form, discriminants, singular points");
  add_config(c_edge);
  auto* c_bis = app.add_subcommand("bisecants", "stationary bisecants through a point of C1");
  add_config(c_bis);
  c_bis->add_option("--param", param, "angle on C1 (radians)")->required();
  auto* c_mem = app.add_subcommand("member", "membership of a point in the hull");
  add_config(c_mem);
  c_mem->add_option("--point", point_arg, "query point x,y,z")->required();
  auto* c_sup = app.add_subcommand("support", "support function in a direction");
  add_config(c_sup);
  c_sup->add_option("--dir", dir_arg, "direction x,y,z")->required();
  auto* c_deg = app.add_subcommand("surface-degree", "line sections of the edge surface");
  add_config(c_deg);
  c_deg->add_option("--line", line_arg, "line bx,by,bz:dx,dy,dz")->required();
  auto* c_mesh = app.add_subcommand("mesh", "boundary mesh (OBJ)");
  add_config(c_mesh);
  c_mesh->add_option("--resolution", resolution, "samples per family (default 256)");
  auto* c_dual = app.add_subcommand("dual", "dual body mesh and report");
  add_config(c_dual);
  c_dual->add_option("--origin", origin_arg, "auto or x,y,z interior origin");
  c_dual->add_option("--resolution", resolution, "sphere resolution (default 256)");
  auto* c_lmi = app.add_subcommand("lmi", "spectrahedron decision and LMI blocks");
  add_config(c_lmi);
  auto* c_fuzz = app.add_subcommand("fuzz", "random classification sweep");
  c_fuzz->add_option("--seed", seed, "RNG seed")->required();
  c_fuzz->add_option("--count", fuzz_count, "number of random pairs");
  c_fuzz->add_option("--out", out_path, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_fuzz->parsed()) {
      // structured random pairs, exercised by the test suite
      std::mt19937_64 rng(seed);
      std::map<std::string, int> tags;
      std::map<std::string, int> curves;
      for (int i = 0; i < fuzz_count; ++i) {
        auto rat = [&](long s, long d) { return bc::Rat((long)(rng() % (2 * s + 1)) - s, 1 + (long)(rng() % d)); };
        bc::Rat p = rat(4, 3), q = rat(4, 3);
        bc::Rat s2 = p * p + q * q;
        bc::Vec3q n{2 * p / (1 + s2), 2 * q / (1 + s2), (1 - s2) / (1 + s2)};
        bc::CircleQ a({rat(6, 4), rat(6, 4), rat(6, 4)}, bc::abs_val(rat(5, 3)) + bc::Rat(1, 2),
                      n);
        bc::CircleQ b({rat(6, 4), rat(6, 4), rat(6, 4)}, bc::abs_val(rat(5, 3)) + bc::Rat(1, 2),
                      {bc::Rat(0), bc::Rat(0), bc::Rat(1)});
        try {
          auto ot = bc::order_type(a, b);
          ++tags[bc::to_string(ot.tag)];
          ++curves[bc::to_string(bc::classify_curve(bc::edge_form(a, b)).tag)];
        } catch (const bc::CoplanarCircles&) {
          continue;
        } catch (const bc::CoplanarConics&) {
          continue;
        }
      }
      json rep = bc::report_header("fuzz");
      rep["seed"] = seed;
      rep["count"] = fuzz_count;
      rep["order_types"] = tags;
      rep["curve_types"] = curves;
      emit(rep, out_path);
      return 0;
    }

    bc::SceneConfig cfg = bc::load_scene(config_path);

    if (c_classify->parsed()) {
      emit(classify_report(cfg), out_path);
    } else if (c_edge->parsed()) {
      emit(edge_curve_report(cfg), out_path);
    } else if (c_bis->parsed()) {
      auto fan = bc::stationary_bisecants_through(cfg.c1d(), cfg.c2d(), param);
      json rep = bc::report_header("bisecants");
      rep["param"] = bc::format_double(param);
      rep["source_point"] = bc::vec_json(fan.p);
      const char* kinds[] = {"two real", "one real", "none real", "pencil"};
      rep["kind"] = kinds[(int)fan.kind];
      json tang = json::array();
      for (const auto& t : fan.tangency) tang.push_back(bc::vec_json(t));
      rep["tangency_points"] = tang;
      if (fan.kind != bc::FanKind::Pencil) {
        rep["pierce_at_infinity"] = fan.pierce_at_infinity;
        if (!fan.pierce_at_infinity) rep["pierce_point"] = bc::vec_json(fan.pierce);
        rep["power"] = bc::format_double(fan.power);
      }
      emit(rep, out_path);
    } else if (c_mem->parsed()) {
      auto m = bc::membership(cfg.c1d(), cfg.c2d(), parse_vec3(point_arg), 1e-7);
      json rep = bc::report_header("member");
      rep["point"] = bc::vec_json(parse_vec3(point_arg));
      rep["verdict"] = bc::to_string(m.verdict);
      rep["distance"] = bc::format_double(m.distance);
      rep["nearest"] = bc::vec_json(m.nearest);
      rep["lambda"] = bc::format_double(m.lambda);
      if (m.separator) {
        rep["separator"] = bc::vec_json(*m.separator);
        rep["separation_margin"] = bc::format_double(m.separation_margin);
      }
      emit(rep, out_path);
    } else if (c_sup->parsed()) {
      auto s = bc::support(cfg.c1d(), cfg.c2d(), parse_vec3(dir_arg));
      json rep = bc::report_header("support");
      rep["dir"] = bc::vec_json(parse_vec3(dir_arg));
      rep["value"] = bc::format_double(s.value);
      rep["attaining"] = s.attaining == 2 ? "both" : (s.attaining == 0 ? "C1" : "C2");
      const char* kinds[] = {"exposed point", "bisecant segment", "2-face"};
      rep["face_kind"] = kinds[(int)s.kind];
      json am = json::array();
      for (const auto& p : s.argmax) am.push_back(bc::vec_json(p));
      rep["argmax"] = am;
      if (s.kind == bc::SupportFace::TwoFace) rep["disc"] = s.disc_index + 1;
      emit(rep, out_path);
    } else if (c_deg->parsed()) {
      auto [base, dir] = parse_line_spec(line_arg);
      auto lsc = bc::line_section_count(cfg.c1, cfg.c2, base, dir);
      json rep = bc::report_header("surface-degree");
      rep["line"] = line_arg;
      rep["total_with_multiplicity"] = lsc.total_with_multiplicity;
      rep["real_count"] = lsc.real_count;
      rep["dropped_factor_degree"] = lsc.dropped_factor_degree;
      json el = json::array();
      for (const auto& c : lsc.eliminant.c) el.push_back(bc::rat_string(c));
      rep["eliminant"] = el;
      json pairs = json::array();
      for (const auto& p : lsc.real_pairs)
        pairs.push_back(json::array({bc::format_double(p[0]), bc::format_double(p[1]),
                                     bc::format_double(p[2]), bc::format_double(p[3])}));
      rep["real_pairs"] = pairs;
      emit(rep, out_path);
    } else if (c_mesh->parsed()) {
      auto mesh = bc::boundary_mesh(cfg.c1, cfg.c2, resolution);
      json rep = bc::report_header("mesh");
      rep["resolution"] = resolution;
      rep["vertices"] = mesh.vertices.size();
      rep["triangles"] = mesh.triangles.size();
      rep["area"] = bc::format_double(mesh.area());
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        bc::write_obj(f, mesh);
        rep["obj"] = out_path;
        std::cout << rep.dump(2) << "\n";
      } else {
        bc::write_obj(std::cout, mesh);
      }
    } else if (c_dual->parsed()) {
      bc::Vec3d o;
      if (origin_arg == "auto") o = bc::default_dual_origin(cfg.c1d(), cfg.c2d());
      else o = parse_vec3(origin_arg);
      auto db = bc::dual_body(cfg.c1d(), cfg.c2d(), o);
      auto mesh = bc::dual_mesh(db, resolution);
      json rep = bc::report_header("dual");
      rep["origin"] = bc::vec_json(o);
      rep["cylinder"] = {db.k1.is_cylinder, db.k2.is_cylinder};
      rep["inscribed_radius"] = bc::format_double(db.inscribed_radius);
      rep["norm_bound"] = bc::format_double(db.norm_bound);
      rep["vertices"] = mesh.vertices.size();
      rep["triangles"] = mesh.triangles.size();
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        bc::write_obj(f, mesh);
        rep["obj"] = out_path;
        std::cout << rep.dump(2) << "\n";
      } else {
        bc::write_obj(std::cout, mesh);
      }
    } else if (c_lmi->parsed()) {
      auto sp = bc::spectrahedron(cfg.c1, cfg.c2);
      json rep = bc::report_header("lmi");
      rep["is_spectrahedron"] = sp.is_spectrahedron;
      if (!sp.is_spectrahedron) rep["obstruction"] = sp.reason;
      if (sp.lmi) rep["lmi"] = bc::lmi_json(*sp.lmi);
      emit(rep, out_path);
    }
    return 0;
  } catch (const bc::DegeneracyError& e) {
    json rep{{"schema", "bicircle-report/1"},
             {"error", {{"code", e.code}, {"message", e.what()}}}};
    std::cerr << rep.dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    json rep{{"schema", "bicircle-report/1"},
             {"error", {{"code", "InvalidInput"}, {"message", e.what()}}}};
    std::cerr << rep.dump(2) << "\n";
    return 2;
  }
}
