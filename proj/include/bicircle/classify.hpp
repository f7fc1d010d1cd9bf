#pragma once

// Relative position of two circles: intersection type, the fifteen order
// types along the common line of their planes (decided exactly, with shared
// points from polynomial gcd), the face lattice of the convex hull (eleven
// combinatorial classes as static data plus per-instance realization), the
// quadric pencil through both circles, and the spectrahedron decision with
// LMI construction.

#include "bicircle/edge.hpp"
#include "bicircle/errors.hpp"
#include "bicircle/geom3.hpp"
#include "bicircle/hull.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace bicircle {

// ---------------------------------------------------------------------------
// Intersection and order types.

struct IntersectionType {
  int m1 = 0, m2 = 0;  // m1 >= m2; m_i = #real points of C_i on the other plane
  bool operator==(const IntersectionType& o) const { return m1 == o.m1 && m2 == o.m2; }
};

enum class OrderTag {
  Empty,         // [0,0], complex disjoint
  TwoC,          // [0,0], common complex-conjugate pair
  One,           // [1,0]
  OneOne,        // [2,0]
  OneTwo,        // [1,1] distinct tangent points
  S,             // [1,1] shared tangent point
  OneOneTwo,     // [2,1] tangency outside
  OneTwoOne,     // [2,1] tangency inside
  OneS,          // [2,1] tangency on the circle
  OneOneTwoTwo,  // [2,2]
  OneTwoOneTwo,  // [2,2] alternating
  OneTwoTwoOne,  // [2,2] nested
  OneTwoS,       // [2,2] one shared, at the end
  OneSTwo,       // [2,2] one shared, in the middle
  SS,            // [2,2] both shared
};

inline const char* to_string(OrderTag t) {
  switch (t) {
    case OrderTag::Empty: return "empty";
    case OrderTag::TwoC: return "(2c)";
    case OrderTag::One: return "(1)";
    case OrderTag::OneOne: return "(1,1)";
    case OrderTag::OneTwo: return "(1,2)";
    case OrderTag::S: return "(S)";
    case OrderTag::OneOneTwo: return "(1,1,2)";
    case OrderTag::OneTwoOne: return "(1,2,1)";
    case OrderTag::OneS: return "(1,S)";
    case OrderTag::OneOneTwoTwo: return "(1,1,2,2)";
    case OrderTag::OneTwoOneTwo: return "(1,2,1,2)";
    case OrderTag::OneTwoTwoOne: return "(1,2,2,1)";
    case OrderTag::OneTwoS: return "(1,2,S)";
    case OrderTag::OneSTwo: return "(1,S,2)";
    case OrderTag::SS: return "(S,S)";
  }
  return "?";
}

inline std::optional<OrderTag> order_tag_from_string(const std::string& s) {
  for (int i = 0; i <= (int)OrderTag::SS; ++i)
    if (s == to_string((OrderTag)i)) return (OrderTag)i;
  return std::nullopt;
}

inline IntersectionType intersection_type_of(OrderTag t) {
  switch (t) {
    case OrderTag::Empty:
    case OrderTag::TwoC: return {0, 0};
    case OrderTag::One: return {1, 0};
    case OrderTag::OneOne: return {2, 0};
    case OrderTag::OneTwo:
    case OrderTag::S: return {1, 1};
    case OrderTag::OneOneTwo:
    case OrderTag::OneTwoOne:
    case OrderTag::OneS: return {2, 1};
    default: return {2, 2};
  }
}

// A realized point of (C1 u C2) on the common line ell.
struct LPoint {
  QuadExt t;     // parameter along ell
  int label;     // 1, 2, or 3 for a shared point
  Vec3d point;   // location in space
};

struct OrderType {
  OrderTag tag = OrderTag::Empty;
  IntersectionType m;
  std::vector<LPoint> points;  // ordered along ell
  Line<Rat> ell;               // may be at infinity (parallel planes)
  bool parallel_planes = false;
  bool swapped = false;  // the circle labeled "1" is the second input
};

namespace detail {

inline Poly<Rat> restriction_poly(const RootClassification<Rat>& rc) {
  return Poly<Rat>({rc.c, rc.b, rc.a});
}

inline Vec3d ell_point(const Line<Rat>& ell, const QuadExt& t) {
  Vec3d base = to_d(ell.base), dir = to_d(ell.direction);
  return base + dir * t.value();
}

}  // namespace detail

inline OrderType order_type(const CircleQ& c1, const CircleQ& c2) {
  OrderType out;
  try {
    out.ell = plane_intersection(c1.plane(), c2.plane());
  } catch (const IdenticalPlanes&) {
    throw CoplanarCircles();
  }
  if (out.ell.at_infinity) {
    // parallel distinct planes: both circles pass through the circular
    // points of the common direction, a length-2 intersection scheme
    out.tag = OrderTag::TwoC;
    out.m = {0, 0};
    out.parallel_planes = true;
    return out;
  }
  auto rc1 = circle_line_roots(c1, out.ell);
  auto rc2 = circle_line_roots(c2, out.ell);
  int n1 = rc1.real_count(), n2 = rc2.real_count();
  out.m = {std::max(n1, n2), std::min(n1, n2)};
  out.swapped = n2 > n1;
  const auto& big = out.swapped ? rc2 : rc1;    // the circle labeled 1
  const auto& small = out.swapped ? rc1 : rc2;  // the circle labeled 2

  Poly<Rat> q1 = detail::restriction_poly(big), q2 = detail::restriction_poly(small);
  Poly<Rat> g = gcd(q1, q2);
  const bool proportional = g.degree() == 2;
  std::optional<Rat> shared;
  if (g.degree() == 1) shared = -g.c[0] / g.c[1];

  auto push = [&](const QuadExt& t, int label) {
    out.points.push_back({t, label, detail::ell_point(out.ell, t)});
  };
  auto sort_points = [&] {
    std::sort(out.points.begin(), out.points.end(),
              [](const LPoint& a, const LPoint& b) { return compare(a.t, b.t) < 0; });
  };

  if (proportional) {
    int ds = sign(big.discriminant);
    if (ds < 0) {
      out.tag = OrderTag::TwoC;
      return out;
    }
    if (ds == 0) {
      out.tag = OrderTag::S;
      push(big.roots_exact[0], 3);
      return out;
    }
    out.tag = OrderTag::SS;
    push(big.roots_exact[0], 3);
    push(big.roots_exact[1], 3);
    sort_points();
    return out;
  }

  if (out.m.m1 == 0) {
    out.tag = OrderTag::Empty;
    return out;
  }
  if (out.m == IntersectionType{1, 0}) {
    out.tag = OrderTag::One;
    push(big.roots_exact[0], 1);
    return out;
  }
  if (out.m == IntersectionType{2, 0}) {
    out.tag = OrderTag::OneOne;
    push(big.roots_exact[0], 1);
    push(big.roots_exact[1], 1);
    sort_points();
    return out;
  }
  if (out.m == IntersectionType{1, 1}) {
    // shared tangency would make the quadratics proportional
    out.tag = OrderTag::OneTwo;
    push(big.roots_exact[0], 1);
    push(small.roots_exact[0], 2);
    sort_points();
    return out;
  }
  if (out.m == IntersectionType{2, 1}) {
    QuadExt p2 = small.roots_exact[0];
    if (shared) {
      out.tag = OrderTag::OneS;
      // the big circle's other root: sum of roots minus the shared one
      Rat other = -q1.c[1] / q1.c[2] - *shared;
      push(QuadExt{other}, 1);
      push(QuadExt{*shared}, 3);
      sort_points();
      return out;
    }
    bool between = compare(big.roots_exact[0], p2) < 0 && compare(p2, big.roots_exact[1]) < 0;
    out.tag = between ? OrderTag::OneTwoOne : OrderTag::OneOneTwo;
    push(big.roots_exact[0], 1);
    push(big.roots_exact[1], 1);
    push(p2, 2);
    sort_points();
    return out;
  }
  // [2,2]
  if (shared) {
    Rat other1 = -q1.c[1] / q1.c[2] - *shared;
    Rat other2 = -q2.c[1] / q2.c[2] - *shared;
    push(QuadExt{other1}, 1);
    push(QuadExt{other2}, 2);
    push(QuadExt{*shared}, 3);
    sort_points();
    out.tag = (out.points[1].label == 3) ? OrderTag::OneSTwo : OrderTag::OneTwoS;
    return out;
  }
  push(big.roots_exact[0], 1);
  push(big.roots_exact[1], 1);
  push(small.roots_exact[0], 2);
  push(small.roots_exact[1], 2);
  sort_points();
  // canonicalize over direction reversal and label swap
  std::array<int, 4> seq;
  for (int i = 0; i < 4; ++i) seq[i] = out.points[i].label;
  auto lex_min = seq;
  auto consider = [&](std::array<int, 4> cand) {
    if (cand < lex_min) lex_min = cand;
  };
  std::array<int, 4> rev = {seq[3], seq[2], seq[1], seq[0]};
  std::array<int, 4> swp, swr;
  for (int i = 0; i < 4; ++i) swp[i] = 3 - seq[i];
  for (int i = 0; i < 4; ++i) swr[i] = 3 - rev[i];
  consider(rev);
  consider(swp);
  consider(swr);
  if (lex_min == std::array<int, 4>{1, 1, 2, 2}) out.tag = OrderTag::OneOneTwoTwo;
  else if (lex_min == std::array<int, 4>{1, 2, 1, 2}) out.tag = OrderTag::OneTwoOneTwo;
  else out.tag = OrderTag::OneTwoTwoOne;
  // if only the label-swapped sequence is canonical, swap the roles
  if (lex_min != seq && (lex_min == swp || lex_min == swr) && out.m.m1 == out.m.m2) {
    out.swapped = !out.swapped;
    for (auto& p : out.points)
      if (p.label != 3) p.label = 3 - p.label;
  }
  return out;
}

inline OrderType order_type(const CircleD& c1, const CircleD& c2, double tol = kTol) {
  return order_type(snap(c1, tol), snap(c2, tol));
}

inline IntersectionType intersection_type(const CircleQ& c1, const CircleQ& c2) {
  return order_type(c1, c2).m;
}

// ---------------------------------------------------------------------------
// Face lattice: the eleven combinatorial classes (static), plus the realized
// arcs, faces, and special points for a concrete pair.

struct FaceLatticeClass {
  int id = 0;
  const char* zero_faces = "";
  const char* one_faces = "";
  const char* two_faces = "";
  int nonexposed_points = 0;
  int nonexposed_bisecants = 0;
  bool isolated_bisecant = false;
  bool operator==(const FaceLatticeClass& o) const {
    return id == o.id && std::string(zero_faces) == o.zero_faces &&
           std::string(one_faces) == o.one_faces && std::string(two_faces) == o.two_faces &&
           nonexposed_points == o.nonexposed_points &&
           nonexposed_bisecants == o.nonexposed_bisecants &&
           isolated_bisecant == o.isolated_bisecant;
  }
};

inline const FaceLatticeClass& face_lattice_class(OrderTag tag) {
  static const FaceLatticeClass table[] = {
      {1, "points on C1 and C2", "one family parameterized by C1", "D1, D2", 0, 0, false},
      {2, "points on C1 and an arc of C2", "one family parameterized by C1", "D1", 2, 0, false},
      {3, "points on C1 and two arcs of C2", "two families parameterized by C1", "none", 4, 0,
       false},
      {4, "points on an arc of C1 and an arc of C2",
       "one family parameterized by a 2-fold branched cover of an arc", "none", 4, 0, false},
      {5, "points on C1 and an arc of C2",
       "two families parameterized by C1 minus the shared point", "none", 2, 0, false},
      {6, "points on C1 and C2", "four families, two parameterized by each arc of C1 minus C2",
       "none", 0, 0, false},
      {7, "points on C1 and an arc of C2",
       "one family parameterized by C1 minus the shared point", "D1", 2, 0, false},
      {8, "points on an arc of C1 and an arc of C2",
       "one family parameterized by the arc of C1", "conv(D1, p2)", 4, 2, false},
      {9, "points on C1 and an arc of C2", "one family parameterized by the arc of C2",
       "D1, conv(D2, p1)", 2, 2, false},
      {10, "points on an arc of C1 and an arc of C2",
       "one family parameterized by either arc, plus an isolated bisecant",
       "conv(D1, p2), conv(D2, p1)", 4, 0, true},
      {11, "points on C1 and C2",
       "one family parameterized by either circle minus the shared point", "D1, D2", 0, 0,
       false},
  };
  switch (tag) {
    case OrderTag::Empty:
    case OrderTag::TwoC: return table[0];
    case OrderTag::OneOne:
    case OrderTag::OneTwoOne: return table[1];
    case OrderTag::OneTwoTwoOne: return table[2];
    case OrderTag::OneOneTwoTwo:
    case OrderTag::OneTwoOneTwo:
    case OrderTag::OneSTwo: return table[3];
    case OrderTag::OneTwoS: return table[4];
    case OrderTag::SS: return table[5];
    case OrderTag::OneS: return table[6];
    case OrderTag::OneOneTwo: return table[7];
    case OrderTag::One: return table[8];
    case OrderTag::OneTwo: return table[9];
    case OrderTag::S: return table[10];
  }
  return table[0];
}

// Extreme set of one circle: full, or arcs between nonexposed endpoints.
struct ExtremeSet {
  int circle = 0;  // 0 = first input, 1 = second input
  bool full = true;
  // counterclockwise arcs [start, end] in the canonical frame angle
  std::vector<std::array<double, 2>> arcs;
  std::vector<double> excluded_angles;  // exposed points carrying no bisecant
};

struct TwoFaceRealization {
  int disc = 0;                 // which input circle bounds the planar face
  std::optional<Vec3d> apex;    // conv(D, apex) when present
};

struct BisecantFamilyInfo {
  int param_circle = 0;
  bool full_circle = true;
  std::array<double, 2> arc{0, 0};
  int edges_per_interior_point = 1;
  bool branched_double_cover = false;
};

struct FaceLatticeDescriptor {
  OrderTag tag = OrderTag::Empty;
  int combinatorial_class = 1;
  FaceLatticeClass table_row;
  std::array<ExtremeSet, 2> extreme;
  std::vector<TwoFaceRealization> two_faces;
  std::vector<BisecantFamilyInfo> families;
  std::vector<Vec3d> nonexposed_points;
  std::vector<std::array<Vec3d, 2>> nonexposed_bisecants;
  std::optional<std::array<Vec3d, 2>> isolated_bisecant;
};

namespace detail {

// Arcs of circle `c` that remain extreme against the exterior pins: the
// complement of the near-arcs facing each pin, built by scanning the
// breakpoint circle and merging gaps that touch.
inline ExtremeSet extreme_set(const CircleD& c, int index, const std::vector<Vec3d>& pins) {
  ExtremeSet out;
  out.circle = index;
  if (pins.empty()) return out;
  out.full = false;
  auto [u, v] = circle_frame<double>(c.normal);
  auto norm_ang = [](double a) {
    a = std::fmod(a, 2 * M_PI);
    if (a < 0) a += 2 * M_PI;
    return a;
  };
  struct Bad { double s, e; };  // counterclockwise from s to e, width < pi
  std::vector<Bad> bad;
  for (const auto& z : pins) {
    Vec3d w = z - c.center;
    double alpha = std::atan2(w.dot(v), w.dot(u));
    double psi = std::acos(std::min(1.0, c.radius / norm(w)));
    bad.push_back({norm_ang(alpha - psi), norm_ang(alpha + psi)});
  }
  auto in_bad = [&](double x) {
    for (const auto& b : bad)
      if (norm_ang(x - b.s) < norm_ang(b.e - b.s)) return true;
    return false;
  };
  std::vector<double> bps;
  for (const auto& b : bad) {
    bps.push_back(b.s);
    bps.push_back(b.e);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
            bps.end());
  std::vector<std::array<double, 2>> free_arcs;
  int n = (int)bps.size();
  for (int i = 0; i < n; ++i) {
    double a = bps[i], b = (i + 1 < n) ? bps[i + 1] : bps[0] + 2 * M_PI;
    if (b - a < 1e-12) continue;
    if (!in_bad(0.5 * (a + b))) free_arcs.push_back({a, b});
  }
  // merge consecutive free gaps sharing a breakpoint (nested bad arcs leave
  // spurious splits), including across the wrap
  for (std::size_t i = 0; i + 1 < free_arcs.size();) {
    if (std::fabs(free_arcs[i][1] - free_arcs[i + 1][0]) < 1e-12) {
      free_arcs[i][1] = free_arcs[i + 1][1];
      free_arcs.erase(free_arcs.begin() + i + 1);
    } else {
      ++i;
    }
  }
  if (free_arcs.size() > 1 &&
      std::fabs(norm_ang(free_arcs.back()[1]) - norm_ang(free_arcs.front()[0])) < 1e-12) {
    free_arcs.front()[0] = free_arcs.back()[0] - 2 * M_PI;
    free_arcs.pop_back();
  }
  out.arcs = std::move(free_arcs);
  return out;
}

inline double angle_of_point(const CircleD& c, const Vec3d& p) {
  auto [u, v] = circle_frame<double>(c.normal);
  Vec3d w = p - c.center;
  return std::atan2(w.dot(v), w.dot(u));
}

}  // namespace detail

inline FaceLatticeDescriptor face_lattice(const OrderType& ot, const CircleQ& c1q,
                                          const CircleQ& c2q) {
  FaceLatticeDescriptor out;
  out.tag = ot.tag;
  out.table_row = face_lattice_class(ot.tag);
  out.combinatorial_class = out.table_row.id;

  CircleD cd[2] = {to_d(c1q), to_d(c2q)};
  // roles: index of the circle playing "C1" in the table
  int major = ot.swapped ? 1 : 0;
  int minor = 1 - major;

  // pins per circle: the other circle's real ell-points, split by position
  std::vector<Vec3d> ext_pins[2];  // exterior pins against each circle
  std::vector<Vec3d> shared_pts;
  std::optional<Vec3d> tangency[2];  // circle i's own tangency point on the other plane
  for (const auto& lp : ot.points) {
    // label: 1 -> point of major circle, 2 -> minor, 3 -> both
    if (lp.label == 3) {
      shared_pts.push_back(lp.point);
      continue;
    }
    int owner = (lp.label == 1) ? major : minor;
    int other = 1 - owner;
    // exterior to the other disc?
    double d2 = (lp.point - cd[other].center).norm2();
    double r2 = cd[other].radius * cd[other].radius;
    if (d2 > r2 + 1e-12) ext_pins[other].push_back(lp.point);
    // the owner's tangency point (double root)
    auto mo = intersection_type_of(ot.tag);
    int owner_m = (owner == major) ? mo.m1 : mo.m2;
    if (owner_m == 1) tangency[owner] = lp.point;
  }
  for (const auto& sp : shared_pts) {
    auto mo = intersection_type_of(ot.tag);
    if (mo.m2 == 1 && ot.tag == OrderTag::S) {
      tangency[0] = sp;
      tangency[1] = sp;
    }
    if (ot.tag == OrderTag::OneS) tangency[minor] = sp;
  }

  // extreme sets; shared points on the circle are pins only for (1,S) where
  // the shared point is a genuine arc endpoint through the other pin
  for (int i = 0; i < 2; ++i) out.extreme[i] = detail::extreme_set(cd[i], i, ext_pins[i]);

  // shared points that are exposed but carry no bisecant; in (1,S,2) the
  // shared point is not extreme at all and needs no exclusion
  if (ot.tag == OrderTag::S || ot.tag == OrderTag::SS || ot.tag == OrderTag::OneTwoS) {
    for (const auto& sp : shared_pts) {
      out.extreme[0].excluded_angles.push_back(detail::angle_of_point(cd[0], sp));
      out.extreme[1].excluded_angles.push_back(detail::angle_of_point(cd[1], sp));
    }
  }

  // nonexposed points: arc endpoints (their tangents pass through a pin on
  // the other circle); shared points stay exposed
  for (int i = 0; i < 2; ++i) {
    if (out.extreme[i].full) continue;
    for (const auto& arc : out.extreme[i].arcs) {
      for (double ang : {arc[0], arc[1]}) {
        Vec3d p = circle_point(cd[i], ang);
        bool is_shared = false;
        for (const auto& sp : shared_pts)
          if (norm(sp - p) < 1e-9) is_shared = true;
        if (ot.tag == OrderTag::OneS && is_shared) is_shared = false;  // endpoint nonexposed
        if (!is_shared) out.nonexposed_points.push_back(p);
      }
    }
  }

  // two-faces
  switch (out.combinatorial_class) {
    case 1:
    case 11:
      out.two_faces = {{major, std::nullopt}, {minor, std::nullopt}};
      break;
    case 2:
    case 7:
      out.two_faces = {{major, std::nullopt}};
      break;
    case 8:
      out.two_faces = {{major, tangency[minor]}};
      break;
    case 9:
      out.two_faces = {{major, std::nullopt}, {minor, tangency[major]}};
      break;
    case 10:
      out.two_faces = {{major, tangency[minor]}, {minor, tangency[major]}};
      break;
    default:
      break;  // classes 3,4,5,6: no two-faces
  }

  // families
  auto arc_or_full = [&](int i) {
    BisecantFamilyInfo f;
    f.param_circle = i;
    f.full_circle = out.extreme[i].full;
    if (!f.full_circle && !out.extreme[i].arcs.empty()) f.arc = out.extreme[i].arcs[0];
    return f;
  };
  switch (out.combinatorial_class) {
    case 1: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = 1;
      out.families = {f};
      break;
    }
    case 2: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = 1;
      out.families = {f};
      break;
    }
    case 3: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = 2;
      out.families = {f, f};
      break;
    }
    case 4: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = 2;
      f.branched_double_cover = true;
      out.families = {f};
      break;
    }
    case 5: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = 2;
      out.families = {f, f};
      break;
    }
    case 6: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = 2;
      out.families = {f, f, f, f};
      break;
    }
    case 7:
    case 8: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = (out.combinatorial_class == 7) ? 2 : 1;
      out.families = {f};
      break;
    }
    case 9: {
      auto f = arc_or_full(minor);
      f.edges_per_interior_point = 2;
      out.families = {f};
      break;
    }
    case 10: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = 1;
      out.families = {f};
      break;
    }
    case 11: {
      auto f = arc_or_full(major);
      f.edges_per_interior_point = 1;
      out.families = {f};
      break;
    }
  }

  // nonexposed bisecants and the isolated bisecant
  if (out.combinatorial_class == 8 && tangency[minor]) {
    for (const auto& arc : out.extreme[major].arcs)
      for (double ang : {arc[0], arc[1]}) {
        Vec3d p = circle_point(cd[major], ang);
        out.nonexposed_bisecants.push_back({p, *tangency[minor]});
      }
    // only the endpoints whose tangent passes through the apex qualify; with
    // a single pin both arc endpoints do
    while (out.nonexposed_bisecants.size() > 2) out.nonexposed_bisecants.pop_back();
  }
  if (out.combinatorial_class == 9 && tangency[major]) {
    for (const auto& arc : out.extreme[minor].arcs)
      for (double ang : {arc[0], arc[1]}) {
        Vec3d p = circle_point(cd[minor], ang);
        out.nonexposed_bisecants.push_back({p, *tangency[major]});
      }
    while (out.nonexposed_bisecants.size() > 2) out.nonexposed_bisecants.pop_back();
  }
  if (out.combinatorial_class == 10 && tangency[0] && tangency[1]) {
    out.isolated_bisecant = {{*tangency[0], *tangency[1]}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadric pencil through both circles: exact nullspace of the ten-coefficient
// incidence system on five rational points per circle.

struct QuadricPencil {
  // coefficient vectors in the monomial order
  // X0^2, X0X1, X0X2, X0X3, X1^2, X1X2, X1X3, X2^2, X2X3, X3^2
  std::vector<std::array<Rat, 10>> basis;
  int dimension = 0;

  static std::array<std::array<Rat, 4>, 4> to_matrix(const std::array<Rat, 10>& q) {
    std::array<std::array<Rat, 4>, 4> M{};
    static const int idx[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
    static const bool diag[10] = {true, false, false, false, true, false, false, true, false, true};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        int k = idx[i][j];
        M[i][j] = diag[k] ? q[k] : q[k] / 2;
      }
    return M;
  }
};

inline std::optional<QuadricPencil> quadric_pencil(const CircleQ& c1, const CircleQ& c2) {
  try {
    plane_intersection(c1.plane(), c2.plane());
  } catch (const IdenticalPlanes&) {
    throw CoplanarCircles();
  }
  static const std::array<std::pair<Rat, Rat>, 5> params = {
      std::pair<Rat, Rat>{1, 0}, {0, 1}, {1, 1}, {1, -1}, {1, 2}};
  std::vector<std::array<Rat, 10>> rows;
  for (const CircleQ* c : {&c1, &c2}) {
    ConicQ pc = circle_parametrization(*c);
    for (const auto& [s, t] : params) {
      std::array<Rat, 4> X;
      for (int i = 0; i < 4; ++i) X[i] = pc.f[i].eval(s, t);
      rows.push_back({X[0] * X[0], X[0] * X[1], X[0] * X[2], X[0] * X[3], X[1] * X[1],
                      X[1] * X[2], X[1] * X[3], X[2] * X[2], X[2] * X[3], X[3] * X[3]});
    }
  }
  // exact Gaussian elimination, track pivots
  int rank = 0;
  std::array<int, 10> pivot_col{};
  for (int col = 0; col < 10 && rank < 10; ++col) {
    int pr = -1;
    for (int r = rank; r < 10; ++r)
      if (rows[r][col] != 0) { pr = r; break; }
    if (pr < 0) continue;
    std::swap(rows[rank], rows[pr]);
    for (int r = 0; r < 10; ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Rat f = rows[r][col] / rows[rank][col];
      for (int j = 0; j < 10; ++j) rows[r][j] -= f * rows[rank][j];
    }
    pivot_col[rank++] = col;
  }
  int dim = 10 - rank;
  if (dim <= 1) return std::nullopt;
  QuadricPencil out;
  out.dimension = dim;
  std::array<bool, 10> is_pivot{};
  for (int r = 0; r < rank; ++r) is_pivot[pivot_col[r]] = true;
  for (int free = 0; free < 10; ++free) {
    if (is_pivot[free]) continue;
    std::array<Rat, 10> v{};
    v[free] = 1;
    for (int r = rank - 1; r >= 0; --r) {
      Rat acc = rows[r][free];
      v[pivot_col[r]] = -acc / rows[r][pivot_col[r]];
    }
    out.basis.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectrahedron decision and LMI construction. The hull is a spectrahedron
// exactly when the intersection scheme has length two (order type (S,S),
// (2c) or (S)); the LMI assembles one 2x2 second-order-cone block per usable
// rank-3 pencil member plus a halfspace slab for each circle plane that
// bounds the hull, validated against the membership oracle.

struct LMIBlock {
  // affine forms coefficients against (1, x, y, z)
  std::array<double, 4> u{}, v{}, w{};
  double eval(const std::array<double, 4>& f, const Vec3d& p) const {
    return f[0] + f[1] * p.x + f[2] * p.y + f[3] * p.z;
  }
  double det(const Vec3d& p) const {
    double uu = eval(u, p), vv = eval(v, p), ww = eval(w, p);
    return ww * ww - uu * uu - vv * vv;
  }
  double min_eigenvalue(const Vec3d& p) const {
    double uu = eval(u, p), vv = eval(v, p), ww = eval(w, p);
    return ww - std::sqrt(uu * uu + vv * vv);
  }
};

struct LMISlab {
  std::array<double, 4> a{};
  double eval(const Vec3d& p) const { return a[0] + a[1] * p.x + a[2] * p.y + a[3] * p.z; }
};

struct LMIRepresentation {
  std::vector<LMIBlock> blocks;
  std::vector<LMISlab> slabs;

  double min_eigenvalue(const Vec3d& p) const {
    double m = std::numeric_limits<double>::max();
    for (const auto& b : blocks) m = std::min(m, b.min_eigenvalue(p));
    for (const auto& s : slabs) m = std::min(m, s.eval(p));
    return m;
  }
  bool feasible(const Vec3d& p, double tol = 0) const { return min_eigenvalue(p) >= -tol; }

  // block-diagonal A0 + x A1 + y A2 + z A3, for reports
  std::vector<std::array<std::vector<std::vector<double>>, 4>> matrices() const {
    std::vector<std::array<std::vector<std::vector<double>>, 4>> out;
    for (const auto& b : blocks) {
      std::array<std::vector<std::vector<double>>, 4> mats;
      for (int k = 0; k < 4; ++k)
        mats[k] = {{b.w[k] + b.u[k], b.v[k]}, {b.v[k], b.w[k] - b.u[k]}};
      out.push_back(mats);
    }
    for (const auto& s : slabs) {
      std::array<std::vector<std::vector<double>>, 4> mats;
      for (int k = 0; k < 4; ++k) mats[k] = {{s.a[k]}};
      out.push_back(mats);
    }
    return out;
  }
};

struct SpectrahedronResult {
  bool is_spectrahedron = false;
  std::string reason;
  std::optional<LMIRepresentation> lmi;
};

namespace detail {

inline BinaryForm<Rat> pencil_determinant(const std::array<Rat, 10>& q1,
                                          const std::array<Rat, 10>& q2) {
  auto M1 = QuadricPencil::to_matrix(q1), M2 = QuadricPencil::to_matrix(q2);
  std::vector<std::vector<BinaryForm<Rat>>> m(4, std::vector<BinaryForm<Rat>>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = BinaryForm<Rat>({M1[i][j], M2[i][j]});
  return determinant(m);
}

}  // namespace detail

inline SpectrahedronResult spectrahedron(const CircleQ& c1, const CircleQ& c2) {
  SpectrahedronResult out;
  OrderType ot = order_type(c1, c2);
  bool length_two = ot.tag == OrderTag::SS || ot.tag == OrderTag::TwoC || ot.tag == OrderTag::S;
  out.is_spectrahedron = length_two;
  if (!length_two) {
    out.reason = (ot.tag == OrderTag::Empty)
                     ? "edge surface meets the interior: not basic semialgebraic"
                     : "nonexposed face";
    return out;
  }

  auto pencil = quadric_pencil(c1, c2);
  if (!pencil) throw NoSuitableRealCone("no quadric pencil found");
  BinaryForm<Rat> det4 = detail::pencil_determinant(pencil->basis[0], pencil->basis[1]);

  CircleD c1d = to_d(c1), c2d = to_d(c2);
  Vec3d mid = (c1d.center + c2d.center) / 2.0;
  std::vector<Vec3d> samples;
  for (int k = 0; k < 16; ++k) {
    samples.push_back(circle_point(c1d, k * M_PI / 8));
    samples.push_back(circle_point(c2d, k * M_PI / 8));
  }

  LMIRepresentation lmi;
  if (!det4.is_zero()) {
    for (const auto& root : projective_roots(det4)) {
      if (!root.real) continue;
      double alpha = root.s.real(), beta = root.t.real();
      Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
      auto M1 = QuadricPencil::to_matrix(pencil->basis[0]);
      auto M2 = QuadricPencil::to_matrix(pencil->basis[1]);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          M(i, j) = alpha * to_double(M1[i][j]) + beta * to_double(M2[i][j]);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(M);
      Eigen::Vector4d ev = es.eigenvalues();
      double scale = std::max(std::fabs(ev[0]), std::fabs(ev[3]));
      if (scale == 0) continue;
      int pos = 0, neg = 0;
      for (int i = 0; i < 4; ++i) {
        if (ev[i] > 1e-7 * scale) ++pos;
        if (ev[i] < -1e-7 * scale) ++neg;
      }
      if (pos + neg != 3) continue;           // need rank 3
      if (pos == 1 && neg == 2) {             // flip sign to signature (2,1)
        M = -M;
        es.compute(M);
        ev = es.eigenvalues();
        std::swap(pos, neg);
      }
      if (pos != 2 || neg != 1) continue;
      LMIBlock blk;
      int pi = 0;
      for (int i = 0; i < 4; ++i) {
        double lam = ev[i];
        Eigen::Vector4d g = es.eigenvectors().col(i);
        if (lam < -1e-7 * scale) {
          double s = std::sqrt(-lam);
          blk.w = {s * g[0], s * g[1], s * g[2], s * g[3]};
        } else if (lam > 1e-7 * scale) {
          auto& dst = (pi++ == 0) ? blk.u : blk.v;
          double s = std::sqrt(lam);
          dst = {s * g[0], s * g[1], s * g[2], s * g[3]};
        }
      }
      // orient w to the hull side
      double wm = blk.eval(blk.w, mid);
      if (wm < 0) {
        for (auto& cwk : blk.w) cwk = -cwk;
        wm = -wm;
      }
      // all circle points must sit on the chosen nappe, the midpoint strictly
      bool ok = wm > 1e-9 && blk.det(mid) > 1e-12;
      for (const auto& sp : samples)
        if (blk.eval(blk.w, sp) < -1e-7 * (1 + std::fabs(wm))) ok = false;
      if (ok) lmi.blocks.push_back(blk);
    }
  }

  // slabs: the plane of circle i bounds the hull iff the other circle does
  // not cross it
  for (int i = 0; i < 2; ++i) {
    const CircleD& self = (i == 0) ? c1d : c2d;
    const CircleD& other = (i == 0) ? c2d : c1d;
    Plane<double> pl = self.plane();
    double lo = 0, hi = 0;
    for (int k = 0; k < 32; ++k) {
      double val = pl.eval(circle_point(other, k * M_PI / 16));
      lo = std::min(lo, val);
      hi = std::max(hi, val);
    }
    if (lo < -1e-9 && hi > 1e-9) continue;  // other circle crosses: no slab
    double sgn = (hi > 1e-9) ? 1.0 : -1.0;  // keep the side containing `other`
    LMISlab slab;
    slab.a = {-sgn * pl.offset, sgn * pl.normal.x, sgn * pl.normal.y, sgn * pl.normal.z};
    lmi.slabs.push_back(slab);
  }

  // validate against the membership oracle on a coarse grid
  Vec3d bb_lo = samples[0], bb_hi = samples[0];
  for (const auto& sp : samples) {
    bb_lo = {std::min(bb_lo.x, sp.x), std::min(bb_lo.y, sp.y), std::min(bb_lo.z, sp.z)};
    bb_hi = {std::max(bb_hi.x, sp.x), std::max(bb_hi.y, sp.y), std::max(bb_hi.z, sp.z)};
  }
  Vec3d pad = (bb_hi - bb_lo) * 0.15 + Vec3d{1e-3, 1e-3, 1e-3};
  bb_lo = bb_lo - pad;
  bb_hi = bb_hi + pad;
  int mismatches = 0, tested = 0;
  const int N = 9;
  for (int ix = 0; ix < N; ++ix)
    for (int iy = 0; iy < N; ++iy)
      for (int iz = 0; iz < N; ++iz) {
        Vec3d p{bb_lo.x + (bb_hi.x - bb_lo.x) * ix / (N - 1.0),
                bb_lo.y + (bb_hi.y - bb_lo.y) * iy / (N - 1.0),
                bb_lo.z + (bb_hi.z - bb_lo.z) * iz / (N - 1.0)};
        double me = lmi.min_eigenvalue(p);
        if (std::fabs(me) < 1e-6) continue;  // boundary band
        auto verdict = membership(c1d, c2d, p, 1e-7).verdict;
        if (verdict == Verdict::Boundary) continue;
        ++tested;
        if ((me > 0) != (verdict == Verdict::Inside)) ++mismatches;
      }
  if (lmi.blocks.empty() || mismatches > 0)
    throw NoSuitableRealCone("no pencil member assembly matches the membership oracle");
  out.lmi = std::move(lmi);
  return out;
}

}  // namespace bicircle
