// Acceptance suite: every criterion prints one pass/fail line; the binary
// exits nonzero if any fails. Tolerances are fixed here, not configurable.

#include "bicircle/report.hpp"

#include <chrono>
#include <iostream>
#include <random>

using namespace bicircle;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

SceneConfig fixture(const std::string& name) {
  return load_scene(std::string(BICIRCLE_FIXTURE_DIR) + "/" + name + ".json");
}

ConicQ unlinked_pc1() {
  ConicQ pc;
  pc.f[0] = BinaryForm<Rat>({Rat(1), Rat(0), Rat(1)});
  pc.f[1] = BinaryForm<Rat>({Rat(1), Rat(0), Rat(-1)});
  pc.f[2] = BinaryForm<Rat>({Rat(0), Rat(2), Rat(0)});
  pc.f[3] = BinaryForm<Rat>({Rat(0), Rat(0), Rat(0)});
  return pc;
}
ConicQ unlinked_pc2() {
  ConicQ pc;
  pc.f[0] = BinaryForm<Rat>({Rat(1), Rat(0), Rat(1)});
  pc.f[1] = BinaryForm<Rat>({Rat(2), Rat(0), Rat(4)});
  pc.f[2] = BinaryForm<Rat>({Rat(0), Rat(0), Rat(0)});
  pc.f[3] = BinaryForm<Rat>({Rat(0), Rat(2), Rat(0)});
  return pc;
}

Rat random_rat(std::mt19937_64& rng, long span, long den) {
  return Rat((long)(rng() % (2 * span + 1)) - span, 1 + (long)(rng() % den));
}

Vec3q random_unit(std::mt19937_64& rng) {
  Rat p = random_rat(rng, 4, 3), q = random_rat(rng, 4, 3);
  Rat s2 = p * p + q * q;
  Vec3q n{2 * p / (1 + s2), 2 * q / (1 + s2), (1 - s2) / (1 + s2)};
  if (rng() & 1) std::swap(n.x, n.z);
  if (rng() & 1) std::swap(n.y, n.z);
  if (rng() & 1) n.z = -n.z;
  return n;
}

CircleQ random_circle(std::mt19937_64& rng) {
  return CircleQ({random_rat(rng, 6, 4), random_rat(rng, 6, 4), random_rat(rng, 6, 4)},
                 abs_val(random_rat(rng, 5, 3)) + Rat(1, 2), random_unit(rng));
}

// random pair with occasional engineered tangencies and shared points
std::pair<CircleQ, CircleQ> fuzz_pair(std::mt19937_64& rng) {
  int mode = (int)(rng() % 3);
  if (mode == 0) {
    for (;;) {
      CircleQ a = random_circle(rng), b = random_circle(rng);
      if (!a.normal.cross(b.normal).is_zero() ||
          a.normal.dot(b.center) != a.normal.dot(a.center))
        return {a, b};
    }
  }
  // structured: C1 in the xy-plane with prescribed x-axis roots, C2 in the
  // xz-plane tangent to the axis or sharing a root
  Rat a = random_rat(rng, 4, 2), bl = abs_val(random_rat(rng, 3, 2)) + 1;
  Rat b = a + bl;
  // center ((a+b)/2, h, 0), radius from a 3-4-5 style triangle
  Rat half = (b - a) / 2;
  Rat h = half * Rat(3, 4);
  Rat r1 = half * Rat(5, 4);
  CircleQ c1({(a + b) / 2, h, Rat(0)}, r1, {Rat(0), Rat(0), Rat(1)});
  if (mode == 1) {
    // tangent to the x-axis plane pair: C2 tangent to z = 0
    Rat cx = random_rat(rng, 4, 2);
    Rat r2 = abs_val(random_rat(rng, 3, 2)) + Rat(1, 2);
    CircleQ c2({cx, Rat(0), r2}, r2, {Rat(0), Rat(1), Rat(0)});
    return {c1, c2};
  }
  // shares the root at x = a
  Rat cx = a + (abs_val(random_rat(rng, 2, 2)) + Rat(1, 2));
  Rat halfw = cx - a;
  Rat h2 = halfw * Rat(3, 4);
  CircleQ c2({cx, Rat(0), h2}, halfw * Rat(5, 4), {Rat(0), Rat(1), Rat(0)});
  return {c1, c2};
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void criterion_1() {
  auto E = edge_form(unlinked_pc1(), unlinked_pc2());
  Bideg22Form<Rat> expected(2, 2);
  expected.at(0, 0) = Rat(-16);
  expected.at(0, 2) = Rat(48);
  expected.at(2, 0) = Rat(48);
  expected.at(2, 2) = Rat(-80);
  report(1, "edge-form exactness on the unlinked circles", E == expected,
         "determinant equals -16*(s^2 u^2 - 3 s^2 v^2 - 3 t^2 u^2 + 5 t^2 v^2), zero tolerance");
}

void criterion_2() {
  auto E = edge_form(unlinked_pc1(), unlinked_pc2());
  auto ct = classify_curve(E);
  auto rc = real_components(E);
  bool pass = ct.tag == CurveTag::SmoothGenusOne && rc.count == 2;
  report(2, "smooth genus one with two real components", pass,
         std::string("type ") + to_string(ct.tag) + ", components " + std::to_string(rc.count));
}

void criterion_3() {
  auto cfg = fixture("one_one_two_two");
  auto probe = line_section_count(cfg.c1, cfg.c2, {Rat(0), Rat(1, 10), Rat(1, 10)},
                                  {Rat(1), Rat(0), Rat(0)});
  bool pass = probe.total_with_multiplicity == 8 && probe.real_count == 8;
  std::mt19937_64 rng(1003);
  int done = 0, degenerate = 0;
  while (done < 100) {
    Point3<Rat> base{random_rat(rng, 5, 4), random_rat(rng, 5, 4), random_rat(rng, 5, 4)};
    Vec3<Rat> dir{random_rat(rng, 5, 4), random_rat(rng, 5, 4), random_rat(rng, 5, 4)};
    if (dir.is_zero()) continue;
    try {
      auto lsc = line_section_count(cfg.c1, cfg.c2, base, dir);
      ++done;
      if (lsc.total_with_multiplicity != 8) pass = false;
    } catch (const DegenerateLine&) {
      ++degenerate;
      if (degenerate > 20) break;
    }
  }
  report(3, "degree-eight line sections", pass,
         "probe line y=z=1/10: 8 real; 100 random rational lines totalled 8 with multiplicity");
}

void criterion_4() {
  static const char* names[15] = {
      "empty", "two_complex", "one", "one_one", "one_two", "s", "one_one_two", "one_two_one",
      "one_s", "one_one_two_two", "one_two_one_two", "one_two_two_one", "one_two_s",
      "one_s_two", "s_s"};
  // expected combinatorial shape per class: {two_faces, families, extreme arcs
  // total, nonexposed points, nonexposed bisecants, isolated}
  struct Shape { int two_faces, families, nep, neb; bool iso; };
  static const std::map<int, Shape> shapes = {
      {1, {2, 1, 0, 0, false}}, {2, {1, 1, 2, 0, false}}, {3, {0, 2, 4, 0, false}},
      {4, {0, 1, 4, 0, false}}, {5, {0, 2, 2, 0, false}}, {6, {0, 4, 0, 0, false}},
      {7, {1, 1, 2, 0, false}}, {8, {1, 1, 4, 2, false}}, {9, {2, 1, 2, 2, false}},
      {10, {2, 1, 4, 0, true}}, {11, {2, 1, 0, 0, false}}};
  bool pass = true;
  std::set<int> classes;
  std::string detail;
  for (const char* name : names) {
    auto cfg = fixture(name);
    const auto& exp = cfg.raw["expected"];
    auto ot = order_type(cfg.c1, cfg.c2);
    if (std::string(to_string(ot.tag)) != exp["order_type"].get<std::string>()) {
      pass = false;
      detail += std::string(name) + " tag mismatch; ";
      continue;
    }
    auto fl = face_lattice(ot, cfg.c1, cfg.c2);
    classes.insert(fl.combinatorial_class);
    if (fl.combinatorial_class != exp["face_class"].get<int>()) {
      pass = false;
      detail += std::string(name) + " class mismatch; ";
    }
    const Shape& want = shapes.at(fl.combinatorial_class);
    bool row_ok = (int)fl.two_faces.size() == want.two_faces &&
                  (int)fl.families.size() == want.families &&
                  (int)fl.nonexposed_points.size() == want.nep &&
                  (int)fl.nonexposed_bisecants.size() == want.neb &&
                  fl.isolated_bisecant.has_value() == want.iso &&
                  fl.table_row.nonexposed_points == want.nep &&
                  fl.table_row.nonexposed_bisecants == want.neb &&
                  fl.table_row.isolated_bisecant == want.iso;
    if (!row_ok) {
      pass = false;
      detail += std::string(name) + " face-lattice fields mismatch; ";
    }
  }
  if (classes.size() != 11) {
    pass = false;
    detail += "expected 11 distinct classes, got " + std::to_string(classes.size());
  }
  report(4, "classification census over the fifteen fixtures", pass,
         detail.empty() ? "15 tags, 11 face-lattice classes, fields matched" : detail);
}

void criterion_5() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"s_s", "two_complex", "s"}) {
    auto cfg = fixture(name);
    auto sp = spectrahedron(cfg.c1, cfg.c2);
    if (!sp.is_spectrahedron || !sp.lmi) {
      pass = false;
      detail += std::string(name) + " missing LMI; ";
      continue;
    }
    CircleD c1 = to_d(cfg.c1), c2 = to_d(cfg.c2);
    // circle points PSD-feasible with singular 2x2 block
    std::mt19937_64 rng(55);
    for (int k = 0; k < 200; ++k) {
      double th = 2 * M_PI * (double)(rng() % 100000) / 100000.0;
      Vec3d p = (k % 2) ? circle_point(c1, th) : circle_point(c2, th);
      if (sp.lmi->min_eigenvalue(p) < -1e-9) pass = false;
      double mind = 1e18;
      for (const auto& b : sp.lmi->blocks) mind = std::min(mind, std::fabs(b.det(p)));
      if (mind >= 1e-9) pass = false;
    }
    // 17^3 grid agreement against the membership oracle
    Vec3d lo = c1.center, hi = c1.center;
    for (int k = 0; k < 64; ++k)
      for (const CircleD* c : {&c1, &c2}) {
        Vec3d q = circle_point(*c, 2 * M_PI * k / 64);
        lo = {std::min(lo.x, q.x), std::min(lo.y, q.y), std::min(lo.z, q.z)};
        hi = {std::max(hi.x, q.x), std::max(hi.y, q.y), std::max(hi.z, q.z)};
      }
    Vec3d pad = (hi - lo) * 0.1 + Vec3d{0.05, 0.05, 0.05};
    lo = lo - pad;
    hi = hi + pad;
    const int N = 17;
    std::vector<int> agree(N * N * N, 1);
    std::vector<int> counted(N * N * N, 0);
    parallel_for(N * N * N, [&](std::size_t idx) {
      int i = (int)(idx % N), j = (int)((idx / N) % N), k = (int)(idx / (N * N));
      Vec3d p{lo.x + (hi.x - lo.x) * i / (N - 1.0), lo.y + (hi.y - lo.y) * j / (N - 1.0),
              lo.z + (hi.z - lo.z) * k / (N - 1.0)};
      double me = sp.lmi->min_eigenvalue(p);
      if (std::fabs(me) < 1e-6) return;  // boundary band excluded
      auto v = membership(c1, c2, p, 1e-7).verdict;
      if (v == Verdict::Boundary) return;
      counted[idx] = 1;
      agree[idx] = ((me > 0) == (v == Verdict::Inside)) ? 1 : 0;
    });
    long total = 0, good = 0;
    for (int i = 0; i < N * N * N; ++i)
      if (counted[i]) {
        ++total;
        good += agree[i];
      }
    double rate = total ? (double)good / total : 0;
    if (rate < 0.999) {
      pass = false;
      detail += std::string(name) + " agreement " + std::to_string(rate) + "; ";
    }
  }
  // gate: false on every non-length-two fixture
  for (const char* name : {"empty", "one", "one_one", "one_two", "one_one_two", "one_two_one",
                           "one_s", "one_one_two_two", "one_two_one_two", "one_two_two_one",
                           "one_two_s", "one_s_two"}) {
    auto cfg = fixture(name);
    if (spectrahedron(cfg.c1, cfg.c2).is_spectrahedron) {
      pass = false;
      detail += std::string(name) + " claims spectrahedron; ";
    }
  }
  report(5, "spectrahedron gate and LMI oracle agreement", pass,
         detail.empty() ? "true exactly for (S,S), (2c), (S); 17^3 grids >= 99.9%" : detail);
}

void criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2026);
  bool pass = true;
  int checked = 0;
  std::string detail;
  while (checked < 2000) {
    auto [a, b] = fuzz_pair(rng);
    Bideg22Form<Rat> E(2, 2);
    try {
      E = edge_form(a, b);
    } catch (const CoplanarConics&) {
      continue;
    }
    auto ct = classify_curve(E);
    ++checked;
    if (ct.tag == CurveTag::Cuspidal || ct.tag == CurveTag::FourLines) {
      pass = false;
      detail = "excluded type appeared: " + std::string(to_string(ct.tag));
      break;
    }
    if (elapsed(t0) > 300) {
      pass = false;
      detail = "runtime budget exceeded";
      break;
    }
  }
  report(6, "cuspidal and four-line types never arise", pass,
         detail.empty() ? "2000 fuzzed pairs in " + std::to_string(elapsed(t0)) + "s" : detail);
}

void criterion_7() {
  bool pass = true;
  std::string detail;
  // harmonic configuration
  std::vector<ProjRoot> harmonic = {{{1, 0}, {0, 0}, 1, true},
                                    {{1, 0}, {1, 0}, 1, true},
                                    {{1, 0}, {2, 0}, 1, true},
                                    {{0, 0}, {1, 0}, 1, true}};
  if (std::fabs(j_from_branch_roots(harmonic) - 1728.0) > 1e-9) {
    pass = false;
    detail += "harmonic j != 1728; ";
  }
  // projection agreement on smooth fuzz cases
  std::mt19937_64 rng(7007);
  int smooth = 0;
  while (smooth < 200) {
    auto [a, b] = fuzz_pair(rng);
    Bideg22Form<Rat> E(2, 2);
    try {
      E = edge_form(a, b);
    } catch (const CoplanarConics&) {
      continue;
    }
    if (classify_curve(E).tag != CurveTag::SmoothGenusOne) continue;
    ++smooth;
    auto [st, uv] = discriminants(E);
    double j1 = to_double(j_exact_from_quartic(st.quartic));
    double j2 = to_double(j_exact_from_quartic(uv.quartic));
    if (std::fabs(j1 - j2) > 1e-9 * (1 + std::fabs(j1))) {
      pass = false;
      detail += "projection disagreement " + format_double(j1 - j2) + "; ";
      break;
    }
    // the numeric cross-ratio route must agree with the exact invariants
    double jc = j_from_branch_roots(st.roots);
    if (std::fabs(jc - j1) > 1e-6 * (1 + std::fabs(j1))) {
      pass = false;
      detail += "cross-ratio route drifted " + format_double(jc - j1) + "; ";
      break;
    }
  }
  // prescribed-branch-point round trips
  CircleD c1 = to_d(CircleQ({Rat(0), Rat(0), Rat(0)}, Rat(1), {Rat(0), Rat(0), Rat(1)}));
  std::mt19937_64 rng2(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 4> angles;
    for (auto& a : angles) a = 2 * M_PI * (double)(rng2() % 100000) / 100000.0;
    std::sort(angles.begin(), angles.end());
    if (angles[1] - angles[0] < 0.2 || angles[2] - angles[1] < 0.2 ||
        angles[3] - angles[2] < 0.2 || angles[0] + 2 * M_PI - angles[3] < 0.2)
      continue;
    std::array<std::array<int, 2>, 2> part = {{{0, 1}, {2, 3}}};
    CircleD c2;
    try {
      c2 = circle_with_branch_points(c1, angles, part, 0.9);
    } catch (const DegenerateConfiguration&) {
      continue;
    }
    auto E = edge_form(snap(c1, 1e-12), snap(c2, 1e-12));
    auto [st, uv] = discriminants(E);
    if (st.real_count != 4) {
      pass = false;
      detail += "round trip lost real branch points; ";
      continue;
    }
    std::vector<double> got, want;
    for (const auto& r : st.roots)
      got.push_back(detail::angle_mod_pi(std::atan2(r.t.real(), r.s.real())));
    for (double an : angles) want.push_back(detail::angle_mod_pi(an / 2));
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 4; ++i)
      if (detail::rp1_dist(got[i], want[i]) > 1e-9) {
        pass = false;
        detail += "branch point off by " +
                  format_double(detail::rp1_dist(got[i], want[i])) + "; ";
      }
  }
  report(7, "j-invariant identities and branch-point round trips", pass,
         detail.empty() ? "j(harmonic)=1728; 200 projection agreements; round trips at 1e-9"
                        : detail);
}

void criterion_8() {
  auto cfg = fixture("one_two_one_two");
  auto mesh = boundary_mesh(cfg.c1, cfg.c2, 4096);
  double area = mesh.area();
  double target = 4 * M_PI;
  bool area_ok = std::fabs(area - target) <= 0.005 * target;
  CircleD c1 = to_d(cfg.c1), c2 = to_d(cfg.c2);
  std::vector<int> ok(mesh.vertices.size(), 1);
  parallel_for(mesh.vertices.size(), [&](std::size_t i) {
    auto m = membership(c1, c2, mesh.vertices[i], 1e-6);
    ok[i] = m.verdict == Verdict::Boundary ? 1 : 0;
  });
  long bad = 0;
  for (int v : ok) bad += 1 - v;
  bool pass = area_ok && bad == 0;
  report(8, "oloid mesh area and boundary membership", pass,
         "area " + format_double(area) + " vs 4*pi, off-boundary vertices " +
             std::to_string(bad));
}

void criterion_9() {
  bool pass = true;
  std::string detail;
  struct Case { const char* name; std::optional<Vec3d> origin; };
  const Case cases[] = {{"one_one_two_two", Vec3d{1.5, 0, 0}},
                        {"one_two_one_two", std::nullopt},
                        {"empty", std::nullopt},
                        {"two_complex", std::nullopt},
                        {"s_s", std::nullopt}};
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> g;
  for (const auto& cs : cases) {
    auto cfg = fixture(cs.name);
    CircleD c1 = to_d(cfg.c1), c2 = to_d(cfg.c2);
    Vec3d o = cs.origin ? *cs.origin : default_dual_origin(c1, c2);
    auto db = dual_body(c1, c2, o);
    CircleD s1 = c1, s2 = c2;
    s1.center = s1.center - o;
    s2.center = s2.center - o;
    std::vector<Vec3d> members;
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
      Vec3d w{g(rng), g(rng), g(rng)};
      w = w * (1.3 * db.norm_bound * (double)(1 + rng() % 1000) / 1000.0 / (norm(w) + 1e-300));
      if (w.norm2() < 1e-24) continue;
      double margin = db.min_margin(w);
      double sup = support(s1, s2, -w).value;
      if (std::fabs(margin) > 1e-10 && std::fabs(sup - 1) > 1e-10) {
        if ((margin >= 0) != (sup <= 1)) ++violations;
      }
      if (margin >= 0) {
        members.push_back(w);
        if (norm(w) >= db.norm_bound * (1 + 1e-6)) ++violations;
      }
    }
    for (std::size_t i = 0; i + 1 < members.size(); i += 2)
      if (db.min_margin((members[i] + members[i + 1]) / 2.0) < -1e-12) ++violations;
    if (violations) {
      pass = false;
      detail += std::string(cs.name) + " violations " + std::to_string(violations) + "; ";
    }
  }
  report(9, "dual body duality, convexity and boundedness", pass,
         detail.empty() ? "10^4 directions per fixture, zero violations" : detail);
}

void criterion_10() {
  static const char* names[10] = {"one_one_two_two", "one_two_one_two", "one_two_two_one",
                                  "empty", "two_complex", "one_one", "one_two_s", "one_s_two",
                                  "s_s", "one_one_two"};
  bool pass = true;
  std::string detail;
  std::mt19937_64 rng(424242);
  for (const char* name : names) {
    auto cfg = fixture(name);
    CircleD c1 = to_d(cfg.c1), c2 = to_d(cfg.c2);
    auto E = edge_form(cfg.conic1(), cfg.conic2());
    int mismatches = 0;
    for (int k = 0; k < 500; ++k) {
      double th = 2 * M_PI * (double)(rng() % 1000000) / 1000000.0;
      auto fan = stationary_bisecants_through(c1, c2, th, 1e-10);
      double s = std::cos(th / 2), t = std::sin(th / 2);
      double A = E.uv_coefficient(0).eval_d(s, t);
      double B = E.uv_coefficient(1).eval_d(s, t);
      double C = E.uv_coefficient(2).eval_d(s, t);
      double scale = std::max({std::fabs(A), std::fabs(B), std::fabs(C)});
      if (fan.kind == FanKind::Pencil) {
        // the fiber must vanish identically
        if (scale > 1e-7) ++mismatches;
        continue;
      }
      double disc = B * B - 4 * A * C;
      if (fan.kind == FanKind::NoneReal) {
        if (disc > 1e-7 * scale * scale) ++mismatches;
        continue;
      }
      if (fan.kind == FanKind::OneReal && disc > 1e-5 * scale * scale) {
        ++mismatches;
        continue;
      }
      // real tangency points must be roots of the fiber
      for (const auto& tp : fan.tangency) {
        auto [cu, sv] = circle_param_of_point(c2, tp);
        double nrm = std::hypot(cu, sv);
        double val = std::fabs(E.eval_d(s, t, cu / nrm, sv / nrm));
        double local = scale * (1 + std::fabs(disc));
        if (val > 1e-9 * std::max(1.0, local)) ++mismatches;
      }
    }
    // deliberate pencil probes for the tangent fixtures
    if (std::string(name) == "s") {
      auto fan = stationary_bisecants_through(c1, c2, 0.0, 1e-10);
      if (fan.kind != FanKind::Pencil) ++mismatches;
    }
    if (mismatches) {
      pass = false;
      detail += std::string(name) + " mismatches " + std::to_string(mismatches) + "; ";
    }
  }
  report(10, "bisecant fans match the edge-form fibers", pass,
         detail.empty() ? "500 params on 10 fixtures at 1e-9, pencil and complex cases included"
                        : detail);
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::cout << (g_failures ? "FAILED" : "OK") << " (" << (10 - g_failures)
            << "/10 criteria, " << format_double(elapsed(t0)) << "s)" << std::endl;
  return g_failures ? 1 : 0;
}
