#pragma once

// Convex hull machinery for two discs: stationary bisecant fans through a
// point, the boundary-bisecant halfspace test, the exact support function,
// a membership oracle (golden-section over the Minkowski blend, alternating
// projections inside), and the degree-eight line-section count against the
// edge surface.

#include "bicircle/edge.hpp"
#include "bicircle/errors.hpp"
#include "bicircle/geom3.hpp"

#include <optional>

namespace bicircle {

// ---------------------------------------------------------------------------
// Stationary bisecants through a point of C1.

enum class FanKind { TwoReal, OneReal, NoneReal, Pencil };

struct BisecantFan {
  FanKind kind = FanKind::TwoReal;
  Vec3d p;                      // the source point on C1
  Vec3d pierce;                 // T_p C1 meets Pi2 here (finite case)
  bool pierce_at_infinity = false;
  std::vector<Vec3d> tangency;  // contact points on C2 (0, 1 or 2)
  double power = 0;             // power of the pierce point w.r.t. C2
};

inline BisecantFan stationary_bisecants_through(const CircleD& c1, const CircleD& c2,
                                                double theta, double tol = kTol) {
  BisecantFan fan;
  fan.p = circle_point(c1, theta);
  Line<double> tl = tangent_line_at_angle(c1, theta);
  Plane<double> pi2 = c2.plane();
  Vec3d d = normalized(tl.direction);

  double slope = pi2.normal.dot(d);
  double height = pi2.eval(fan.p);
  if (std::fabs(slope) <= tol && std::fabs(height) <= tol) {
    fan.kind = FanKind::Pencil;  // tangent line inside the plane of C2
    return fan;
  }
  if (std::fabs(slope) <= tol) {
    // tangent parallel to Pi2: pierce point at infinity; the two tangents to
    // C2 with direction d touch at the diameter perpendicular to d
    fan.pierce_at_infinity = true;
    Vec3d wdir = normalized(c2.normal.cross(d));
    fan.kind = FanKind::TwoReal;
    fan.tangency = {c2.center + wdir * c2.radius, c2.center - wdir * c2.radius};
    fan.power = std::numeric_limits<double>::infinity();
    return fan;
  }
  Vec3d qt = fan.p - d * (height / slope);
  fan.pierce = qt;
  Vec3d w = qt - c2.center;
  double d2 = w.norm2();
  fan.power = d2 - c2.radius * c2.radius;
  if (fan.power > tol * (1 + d2)) {
    double r = c2.radius;
    Vec3d along = w * (r * r / d2);
    Vec3d across = c2.normal.cross(w) * (r * std::sqrt(fan.power) / d2);
    fan.kind = FanKind::TwoReal;
    fan.tangency = {c2.center + along + across, c2.center + along - across};
  } else if (fan.power >= -tol * (1 + d2)) {
    fan.kind = FanKind::OneReal;
    fan.tangency = {c2.center + w * (c2.radius / std::sqrt(d2))};
  } else {
    fan.kind = FanKind::NoneReal;
  }
  return fan;
}

// ---------------------------------------------------------------------------
// Support function of conv(D1 u D2): exact closed form per disc.

enum class SupportFace { ExposedPoint, BisecantSegment, TwoFace };

struct SupportResult {
  double value = 0;
  int attaining = 0;  // 0: c1, 1: c2, 2: both
  SupportFace kind = SupportFace::ExposedPoint;
  std::vector<Vec3d> argmax;  // one point, or both endpoints of a bisecant
  int disc_index = -1;        // for TwoFace: which disc the plane exposes
};

inline double disc_support(const CircleD& c, const Vec3d& w) {
  Vec3d wp = w - c.normal * w.dot(c.normal);
  return w.dot(c.center) + c.radius * std::sqrt(wp.norm2());
}

inline SupportResult support(const CircleD& c1, const CircleD& c2, const Vec3d& w,
                             double tol = kTol) {
  if (w.norm2() == 0) throw ZeroDirection();
  SupportResult out;
  double scale = std::sqrt(w.norm2());
  auto arg = [&](const CircleD& c) -> std::optional<Vec3d> {
    Vec3d wp = w - c.normal * w.dot(c.normal);
    double n = std::sqrt(wp.norm2());
    if (n <= tol * scale) return std::nullopt;  // plane of the disc supports
    return c.center + wp * (c.radius / n);
  };
  double h1 = disc_support(c1, w), h2 = disc_support(c2, w);
  out.value = std::max(h1, h2);
  double band = tol * (1 + std::fabs(out.value));
  bool a1 = h1 >= out.value - band, a2 = h2 >= out.value - band;
  out.attaining = a1 && a2 ? 2 : (a1 ? 0 : 1);
  auto p1 = arg(c1), p2 = arg(c2);
  if (a1 && a2) {
    if (p1 && p2) {
      out.kind = SupportFace::BisecantSegment;
      out.argmax = {*p1, *p2};
    } else {
      out.kind = SupportFace::TwoFace;
      out.disc_index = p1 ? 1 : 0;  // the degenerate one is the exposed disc
      if (p1) out.argmax = {*p1};
      if (p2) out.argmax = {*p2};
    }
  } else if (a1) {
    if (!p1) {
      out.kind = SupportFace::TwoFace;
      out.disc_index = 0;
    } else {
      out.kind = SupportFace::ExposedPoint;
      out.argmax = {*p1};
    }
  } else {
    if (!p2) {
      out.kind = SupportFace::TwoFace;
      out.disc_index = 1;
    } else {
      out.kind = SupportFace::ExposedPoint;
      out.argmax = {*p2};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary-bisecant test: the plane spanned by the meeting tangents supports
// the hull iff both circles lie in one closed halfspace of it.

inline bool circle_in_halfspace(const CircleD& c, const Vec3d& w, double offset,
                                double tol = kTol) {
  return disc_support(c, w) <= offset + tol * (1 + std::fabs(offset));
}

inline bool is_boundary_bisecant(const CircleD& c1, const CircleD& c2, double theta1,
                                 double theta2, double tol = kTol) {
  Vec3d p = circle_point(c1, theta1), q = circle_point(c2, theta2);
  Line<double> t1 = tangent_line_at_angle(c1, theta1);
  Line<double> t2 = tangent_line_at_angle(c2, theta2);
  Vec3d d1 = normalized(t1.direction), d2 = normalized(t2.direction);
  Vec3d n = d1.cross(d2);
  double res = std::fabs((q - p).dot(n)) / (1 + norm(q - p));
  if (res > 1e-9) throw NotOnEdgeCurve("tangent lines do not meet");
  if (norm(n) < 1e-10) {
    n = d1.cross(q - p);  // parallel tangents: plane through both lines
    if (norm(n) < 1e-12) return true;  // collinear: degenerate support
  }
  n = normalized(n);
  double off = n.dot(p);
  bool below = circle_in_halfspace(c1, n, off, tol) && circle_in_halfspace(c2, n, off, tol);
  bool above = circle_in_halfspace(c1, -n, -off, tol) && circle_in_halfspace(c2, -n, -off, tol);
  return below || above;
}

// ---------------------------------------------------------------------------
// Membership oracle for K = conv(D1 u D2) = union over lambda of
// lambda D1 + (1-lambda) D2. The blend distance d(lambda) is convex, so a
// golden-section search with an alternating-projection inner solve decides
// membership; outside verdicts carry a support-certified separator.

enum class Verdict { Inside, Boundary, Outside };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Inside: return "inside";
    case Verdict::Boundary: return "boundary";
    case Verdict::Outside: return "outside";
  }
  return "?";
}

struct MembershipResult {
  Verdict verdict = Verdict::Inside;
  double distance = 0;  // distance to K when outside
  Vec3d nearest;        // nearest point of K found
  double lambda = 0.5;
  std::optional<Vec3d> separator;  // unit direction with w.x > support(w)
  double separation_margin = 0;
};

namespace detail {

inline Vec3d project_disc(const Vec3d& y, const CircleD& c) {
  Vec3d w = y - c.center;
  double h = w.dot(c.normal);
  Vec3d ip = w - c.normal * h;
  double rho = std::sqrt(ip.norm2());
  if (rho > c.radius) ip = ip * (c.radius / rho);
  return c.center + ip;
}

// distance from x to lambda D1 + (1 - lambda) D2
inline double blend_distance(const Vec3d& x, const CircleD& c1, const CircleD& c2,
                             double lambda, Vec3d& a, Vec3d& b, Vec3d& nearest,
                             int iter_cap = 10000, double conv = 1e-12) {
  if (lambda < 1e-14) {
    nearest = project_disc(x, c2);
    return norm(x - nearest);
  }
  if (lambda > 1 - 1e-14) {
    nearest = project_disc(x, c1);
    return norm(x - nearest);
  }
  double prev = std::numeric_limits<double>::max();
  for (int i = 0; i < iter_cap; ++i) {
    a = project_disc((x - b * (1 - lambda)) / lambda, c1);
    b = project_disc((x - a * lambda) / (1 - lambda), c2);
    double d = norm(x - a * lambda - b * (1 - lambda));
    if (prev - d < conv && i > 2) break;
    prev = d;
  }
  nearest = a * lambda + b * (1 - lambda);
  return norm(x - nearest);
}

}  // namespace detail

inline MembershipResult membership(const CircleD& c1, const CircleD& c2, const Vec3d& x,
                                   double tol = 1e-7) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  MembershipResult out;
  Vec3d a = c1.center, b = c2.center;

  auto dist_at = [&](double lambda, Vec3d& nearest) {
    return detail::blend_distance(x, c1, c2, lambda, a, b, nearest);
  };

  Vec3d nearest;
  double lo = 0, hi = 1;
  const double phi = 0.5 * (std::sqrt(5.0) - 1);
  double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
  Vec3d n1v, n2v;
  double f1 = dist_at(m1, n1v), f2 = dist_at(m2, n2v);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 <= f2) {
      hi = m2; m2 = m1; f2 = f1;
      m1 = hi - phi * (hi - lo);
      f1 = dist_at(m1, n1v);
    } else {
      lo = m1; m1 = m2; f1 = f2;
      m2 = lo + phi * (hi - lo);
      f2 = dist_at(m2, n2v);
    }
  }
  double lam = 0.5 * (lo + hi);
  double d = dist_at(lam, nearest);
  for (double le : {0.0, 1.0}) {  // endpoints are closed-form
    Vec3d ne;
    double de = dist_at(le, ne);
    if (de < d) { d = de; lam = le; nearest = ne; }
  }
  out.nearest = nearest;
  out.lambda = lam;
  out.distance = std::max(0.0, d);

  if (d > tol) {
    out.verdict = Verdict::Outside;
    Vec3d w = normalized(x - nearest);
    auto sup = support(c1, c2, w);
    out.separator = w;
    out.separation_margin = w.dot(x) - sup.value;
    return out;
  }
  // inside vs boundary: probe a ball of radius 2 tol around x
  static const Vec3d dirs[] = {
      {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
      {0.5773502691896258, 0.5773502691896258, 0.5773502691896258},
      {-0.5773502691896258, 0.5773502691896258, 0.5773502691896258},
      {0.5773502691896258, -0.5773502691896258, 0.5773502691896258},
      {0.5773502691896258, 0.5773502691896258, -0.5773502691896258},
      {-0.5773502691896258, -0.5773502691896258, 0.5773502691896258},
      {-0.5773502691896258, 0.5773502691896258, -0.5773502691896258},
      {0.5773502691896258, -0.5773502691896258, -0.5773502691896258},
      {-0.5773502691896258, -0.5773502691896258, -0.5773502691896258}};
  for (const Vec3d& dir : dirs) {
    Vec3d probe = x + dir * (2 * tol);
    a = c1.center; b = c2.center;
    double lo2 = 0, hi2 = 1;
    double p1 = hi2 - phi * (hi2 - lo2), p2 = lo2 + phi * (hi2 - lo2);
    Vec3d nn;
    double g1 = detail::blend_distance(probe, c1, c2, p1, a, b, nn);
    double g2 = detail::blend_distance(probe, c1, c2, p2, a, b, nn);
    for (int it = 0; it < 60 && hi2 - lo2 > 1e-10; ++it) {
      if (g1 <= g2) {
        hi2 = p2; p2 = p1; g2 = g1;
        p1 = hi2 - phi * (hi2 - lo2);
        g1 = detail::blend_distance(probe, c1, c2, p1, a, b, nn);
      } else {
        lo2 = p1; p1 = p2; g1 = g2;
        p2 = lo2 + phi * (hi2 - lo2);
        g2 = detail::blend_distance(probe, c1, c2, p2, a, b, nn);
      }
    }
    double dp = std::min({g1, g2, detail::blend_distance(probe, c1, c2, 0, a, b, nn),
                          detail::blend_distance(probe, c1, c2, 1, a, b, nn)});
    if (dp > tol) {
      out.verdict = Verdict::Boundary;
      return out;
    }
  }
  out.verdict = Verdict::Inside;
  return out;
}

// ---------------------------------------------------------------------------
// Line sections of the edge surface: the incidence curve M of parameter pairs
// whose secant meets m has bidegree (2,2); eliminating (u,v) against the edge
// form by a Sylvester resultant gives a degree-eight binary form.

struct LineSectionCount {
  int total_with_multiplicity = 8;
  int real_count = 0;  // with multiplicity
  int dropped_factor_degree = 0;  // twice the (1,0)-content degree of E
  BinaryForm<Rat> eliminant;      // after removing the content factor
  std::vector<std::array<double, 4>> real_pairs;  // (s,t,u,v) solutions
};

// Incidence form: det of rows f1(s,t), f2(u,v), P, Q for P, Q spanning m.
inline Bideg22Form<Rat> incidence_form(const ConicQ& pc1, const ConicQ& pc2,
                                       const std::array<Rat, 4>& P, const std::array<Rat, 4>& Q) {
  // expand along the last two rows: det = sum_{i<j} (-1)^{i+j+1} pl(i,j) m12(comp)
  auto pl = [&](int i, int j) { return P[i] * Q[j] - P[j] * Q[i]; };
  static const int pair_idx[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  static const int comp_idx[6][2] = {{2, 3}, {1, 3}, {1, 2}, {0, 3}, {0, 2}, {0, 1}};
  Bideg22Form<Rat> M(2, 2);
  for (int k = 0; k < 6; ++k) {
    int i = pair_idx[k][0], j = pair_idx[k][1];
    // minor of rows (f1, f2) at columns comp(k): f1_a f2_b - f1_b f2_a
    int a = comp_idx[k][0], b = comp_idx[k][1];
    int sgn = ((i + j + 1) % 2 == 0) ? 1 : -1;
    Rat w = pl(i, j);
    if (w == 0) continue;
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; q <= 2; ++q) {
        Rat term = w * (pc1.f[a].c[p] * pc2.f[b].c[q] - pc1.f[b].c[p] * pc2.f[a].c[q]);
        M.at(p, q) += (sgn > 0) ? term : Rat(-term);
      }
  }
  return M;
}

inline BinaryForm<Rat> resultant_uv(const Bideg22Form<Rat>& E, const Bideg22Form<Rat>& M) {
  auto zero2 = BinaryForm<Rat>::zero(2);
  std::vector<std::vector<BinaryForm<Rat>>> syl = {
      {E.uv_coefficient(0), E.uv_coefficient(1), E.uv_coefficient(2), zero2},
      {zero2, E.uv_coefficient(0), E.uv_coefficient(1), E.uv_coefficient(2)},
      {M.uv_coefficient(0), M.uv_coefficient(1), M.uv_coefficient(2), zero2},
      {zero2, M.uv_coefficient(0), M.uv_coefficient(1), M.uv_coefficient(2)}};
  return determinant(syl);
}

inline LineSectionCount line_section_count(const CircleQ& c1, const CircleQ& c2,
                                           const Point3<Rat>& m_base, const Vec3<Rat>& m_dir) {
  ConicQ pc1 = circle_parametrization(c1), pc2 = circle_parametrization(c2);
  std::array<Rat, 4> P = {Rat(1), m_base.x, m_base.y, m_base.z};
  std::array<Rat, 4> Q = {Rat(0), m_dir.x, m_dir.y, m_dir.z};
  Bideg22Form<Rat> E = edge_form(pc1, pc2);
  Bideg22Form<Rat> M = incidence_form(pc1, pc2, P, Q);
  BinaryForm<Rat> res = resultant_uv(E, M);
  if (res.is_zero()) throw DegenerateLine();

  LineSectionCount out;
  // a (1,0)-content of E contributes its square as a spurious factor
  auto [gs, gu, R] = extract_line_components(E);
  if (gs.degree() > 0) {
    BinaryForm<Rat> g2 = gs * gs;
    res = exact_div(res, g2);
    out.dropped_factor_degree = g2.degree();
  }
  out.eliminant = res;
  out.total_with_multiplicity = res.degree();

  auto roots = projective_roots(res);
  for (const auto& r : roots) {
    if (!r.real) continue;
    out.real_count += r.multiplicity;
    // recover the (u,v) partners: common roots of the two fiber quadratics
    double s0 = r.s.real(), t0 = r.t.real();
    double ns = std::hypot(s0, t0);
    s0 /= ns;
    t0 /= ns;
    double Ae = E.uv_coefficient(0).eval_d(s0, t0), Be = E.uv_coefficient(1).eval_d(s0, t0),
           Ce = E.uv_coefficient(2).eval_d(s0, t0);
    double disc = Be * Be - 4 * Ae * Ce;
    std::vector<std::array<double, 2>> uvs;
    if (std::fabs(Ae) > 1e-13) {
      double sq = std::sqrt(std::max(0.0, disc));
      uvs.push_back({(-Be + sq) / (2 * Ae), 1.0});
      uvs.push_back({(-Be - sq) / (2 * Ae), 1.0});
    } else if (std::fabs(Ce) > 1e-13) {
      double sq = std::sqrt(std::max(0.0, disc));
      uvs.push_back({1.0, (-Be + sq) / (2 * Ce)});
      uvs.push_back({1.0, (-Be - sq) / (2 * Ce)});
    } else {
      uvs.push_back({1.0, 0.0});
      uvs.push_back({0.0, 1.0});
    }
    double best = std::numeric_limits<double>::max();
    std::array<double, 2> bestuv = uvs[0];
    for (auto& uv : uvs) {
      double nm = std::hypot(uv[0], uv[1]);
      double val = std::fabs(M.eval_d(s0, t0, uv[0] / nm, uv[1] / nm));
      if (val < best) { best = val; bestuv = {uv[0] / nm, uv[1] / nm}; }
    }
    for (int mrep = 0; mrep < r.multiplicity; ++mrep)
      out.real_pairs.push_back({s0, t0, bestuv[0], bestuv[1]});
  }
  return out;
}

}  // namespace bicircle
