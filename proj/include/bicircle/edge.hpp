#pragma once

// Edge curve of stationary bisecants between two conics: construction of the
// bidegree-(2,2) form as a 4x4 determinant of tangent-direction rows, its
// discriminant quartics and branch points, curve-type classification through
// exact content extraction and squarefree analysis, singular points with the
// five-case labels, the j-invariant, a real-component tracer on the parameter
// torus, and the prescribed-branch-point circle construction.

#include "bicircle/errors.hpp"
#include "bicircle/geom3.hpp"
#include "bicircle/parallel.hpp"
#include "bicircle/poly.hpp"
#include "bicircle/scalar.hpp"

#include <array>
#include <complex>
#include <map>
#include <numeric>

namespace bicircle {

// ---------------------------------------------------------------------------
// Bihomogeneous form of bidegree (deg_st, deg_uv):
//   sum c[i][j] s^(deg_st - i) t^i u^(deg_uv - j) v^j

template <typename T>
struct BiForm {
  int deg_st = 0, deg_uv = 0;
  std::vector<T> c;  // (deg_st+1) x (deg_uv+1), row-major

  BiForm() : c(1, T(0)) {}
  BiForm(int dst, int duv) : deg_st(dst), deg_uv(duv), c((dst + 1) * (duv + 1), T(0)) {}

  T& at(int i, int j) { return c[i * (deg_uv + 1) + j]; }
  const T& at(int i, int j) const { return c[i * (deg_uv + 1) + j]; }

  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](const T& v) { return v == T(0); });
  }
  bool operator==(const BiForm& o) const {
    return deg_st == o.deg_st && deg_uv == o.deg_uv && c == o.c;
  }

  // coefficient of u^(deg_uv-j) v^j as a binary form in (s,t)
  BinaryForm<T> uv_coefficient(int j) const {
    std::vector<T> r(deg_st + 1);
    for (int i = 0; i <= deg_st; ++i) r[i] = at(i, j);
    return BinaryForm<T>(std::move(r));
  }
  // coefficient of s^(deg_st-i) t^i as a binary form in (u,v)
  BinaryForm<T> st_coefficient(int i) const {
    std::vector<T> r(deg_uv + 1);
    for (int j = 0; j <= deg_uv; ++j) r[j] = at(i, j);
    return BinaryForm<T>(std::move(r));
  }

  BinaryForm<T> fiber_st(const T& s, const T& t) const {  // quadratic in (u,v)
    std::vector<T> r(deg_uv + 1, T(0));
    for (int j = 0; j <= deg_uv; ++j) r[j] = uv_coefficient(j).eval(s, t);
    return BinaryForm<T>(std::move(r));
  }
  BinaryForm<T> fiber_uv(const T& u, const T& v) const {
    std::vector<T> r(deg_st + 1, T(0));
    for (int i = 0; i <= deg_st; ++i) r[i] = st_coefficient(i).eval(u, v);
    return BinaryForm<T>(std::move(r));
  }

  T eval(const T& s, const T& t, const T& u, const T& v) const {
    return fiber_st(s, t).eval(u, v);
  }
  double eval_d(double s, double t, double u, double v) const {
    double acc = 0;
    for (int i = 0; i <= deg_st; ++i)
      for (int j = 0; j <= deg_uv; ++j) {
        double term = to_double(at(i, j));
        for (int k = 0; k < deg_st - i; ++k) term *= s;
        for (int k = 0; k < i; ++k) term *= t;
        for (int k = 0; k < deg_uv - j; ++k) term *= u;
        for (int k = 0; k < j; ++k) term *= v;
        acc += term;
      }
    return acc;
  }

  BiForm swapped() const {  // (s,t) <-> (u,v)
    BiForm r(deg_uv, deg_st);
    for (int i = 0; i <= deg_st; ++i)
      for (int j = 0; j <= deg_uv; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  BiForm d_s() const {
    if (deg_st == 0) return BiForm(0, deg_uv);
    BiForm r(deg_st - 1, deg_uv);
    for (int i = 0; i < deg_st; ++i)
      for (int j = 0; j <= deg_uv; ++j) r.at(i, j) = at(i, j) * T(deg_st - i);
    return r;
  }
  BiForm d_t() const {
    if (deg_st == 0) return BiForm(0, deg_uv);
    BiForm r(deg_st - 1, deg_uv);
    for (int i = 1; i <= deg_st; ++i)
      for (int j = 0; j <= deg_uv; ++j) r.at(i - 1, j) = at(i, j) * T(i);
    return r;
  }
  BiForm d_u() const { return swapped().d_s().swapped(); }
  BiForm d_v() const { return swapped().d_t().swapped(); }
};

template <typename T>
using Bideg22Form = BiForm<T>;

// ---------------------------------------------------------------------------
// Edge form: determinant of the 4x4 matrix with rows ds f1, dt f1, du f2, dv f2,
// expanded by Laplace along the first two rows. Exact over Rat.

template <typename T>
Bideg22Form<T> edge_form(const ParametrizedConic<T>& pc1, const ParametrizedConic<T>& pc2) {
  // 2x2 minors of the derivative rows of one conic: for columns (i, j),
  //   m[i][j](s,t) = ds f_i dt f_j - ds f_j dt f_i  (a binary quadratic)
  auto minors = [](const ParametrizedConic<T>& pc) {
    std::array<std::array<BinaryForm<T>, 4>, 4> m;
    std::array<BinaryForm<T>, 4> ds, dt;
    for (int i = 0; i < 4; ++i) {
      ds[i] = pc.f[i].ds();
      dt[i] = pc.f[i].dt();
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] = ds[i] * dt[j] - ds[j] * dt[i];
    return m;
  };
  auto m1 = minors(pc1), m2 = minors(pc2);

  static const int pair_idx[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  static const int comp_idx[6][2] = {{2, 3}, {1, 3}, {1, 2}, {0, 3}, {0, 2}, {0, 1}};

  Bideg22Form<T> E(2, 2);
  for (int k = 0; k < 6; ++k) {
    int i = pair_idx[k][0], j = pair_idx[k][1];
    int sgn = ((1 + i + j) % 2 == 0) ? 1 : -1;
    BinaryForm<T> a = m1[i][j];
    BinaryForm<T> b = m2[comp_idx[k][0]][comp_idx[k][1]];
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; q <= 2; ++q) {
        T add = a.c[p] * b.c[q];
        E.at(p, q) += (sgn > 0) ? add : T(-add);
      }
  }
  if (E.is_zero()) throw CoplanarConics();
  return E;
}

template <typename T>
Bideg22Form<T> edge_form(const Circle<T>& c1, const Circle<T>& c2) {
  return edge_form(circle_parametrization(c1), circle_parametrization(c2));
}

// ---------------------------------------------------------------------------
// Discriminants and branch data. Writing E = A(s,t) u^2 + B(s,t) uv + C(s,t) v^2,
// the projection to the (s,t) factor is branched over Delta = B^2 - 4AC.

struct BranchData {
  BinaryForm<Rat> quartic;      // Delta, degree 4
  std::vector<ProjRoot> roots;  // projective roots with multiplicity
  int real_count = 0;           // counted with multiplicity
};

inline BranchData branch_data(const BinaryForm<Rat>& A, const BinaryForm<Rat>& B,
                              const BinaryForm<Rat>& C) {
  BranchData out;
  out.quartic = B * B - A * C * Rat(4);
  if (!out.quartic.is_zero()) {
    out.roots = projective_roots(out.quartic);
    for (const auto& r : out.roots)
      if (r.real) out.real_count += r.multiplicity;
  }
  return out;
}

inline std::pair<BranchData, BranchData> discriminants(const Bideg22Form<Rat>& f) {
  if (f.is_zero()) throw ZeroForm();
  BranchData st = branch_data(f.uv_coefficient(0), f.uv_coefficient(1), f.uv_coefficient(2));
  BranchData uv = branch_data(f.st_coefficient(0), f.st_coefficient(1), f.st_coefficient(2));
  return {st, uv};
}

// ---------------------------------------------------------------------------
// Curve type classification.

enum class CurveTag {
  SmoothGenusOne,
  NodalIrreducibleRational,
  Cuspidal,
  TwoOneOne,          // (1,1) + (1,1)
  TwoOnePlusZeroOne,  // (2,1) + (0,1)
  OneTwoPlusOneZero,  // (1,2) + (1,0)
  MixedThree,         // (1,1) + (0,1) + (1,0)
  FourLines,          // 2(1,0) + 2(0,1)
  OtherDegenerate,
};

inline const char* to_string(CurveTag t) {
  switch (t) {
    case CurveTag::SmoothGenusOne: return "smooth genus one";
    case CurveTag::NodalIrreducibleRational: return "nodal irreducible rational";
    case CurveTag::Cuspidal: return "cuspidal";
    case CurveTag::TwoOneOne: return "2(1,1)";
    case CurveTag::TwoOnePlusZeroOne: return "(2,1)+(0,1)";
    case CurveTag::OneTwoPlusOneZero: return "(1,2)+(1,0)";
    case CurveTag::MixedThree: return "(1,1)+(0,1)+(1,0)";
    case CurveTag::FourLines: return "2(1,0)+2(0,1)";
    case CurveTag::OtherDegenerate: return "degenerate";
  }
  return "?";
}

enum class LemmaCase { I, II, III, IV, V };

struct SingularPoint {
  double s = 1, t = 0, u = 1, v = 0;
  std::optional<std::array<Rat, 4>> exact;  // (s, t, u, v) when rational
  LemmaCase lemma_case = LemmaCase::I;
  bool is_node = true;
};

struct CurveType {
  CurveTag tag = CurveTag::SmoothGenusOne;
  bool pair_real = true;              // TwoOneOne: two real vs complex-conjugate pair
  BinaryForm<Rat> line_factor_st;     // content in (s,t): product of (1,0) components
  BinaryForm<Rat> line_factor_uv;     // content in (u,v): product of (0,1) components
  BiForm<Rat> residual;               // content-free part
  std::vector<SingularPoint> singular_points;  // filled by singular_points()
};

namespace detail {

// content of f in the (s,t) direction: gcd of the (u,v)-coefficient forms
inline BinaryForm<Rat> st_content(const BiForm<Rat>& f) {
  std::optional<BinaryForm<Rat>> g;
  for (int j = 0; j <= f.deg_uv; ++j) {
    auto col = f.uv_coefficient(j);
    if (col.is_zero()) continue;
    g = g ? gcd(*g, col) : [&] {
      auto [a, b, core] = split_st_powers(col);
      auto p = monic(core.dehomogenize());
      std::vector<Rat> cs(a + b + p.degree() + 1, Rat(0));
      for (int i = 0; i <= p.degree(); ++i) cs[b + i] = p.c[i];
      return BinaryForm<Rat>(cs);
    }();
  }
  if (!g) throw ZeroForm();
  return *g;
}

inline BiForm<Rat> divide_st(const BiForm<Rat>& f, const BinaryForm<Rat>& g) {
  if (g.degree() == 0) {
    BiForm<Rat> r = f;
    for (auto& v : r.c) v = v / g.c[0];
    return r;
  }
  BiForm<Rat> r(f.deg_st - g.degree(), f.deg_uv);
  for (int j = 0; j <= f.deg_uv; ++j) {
    auto col = f.uv_coefficient(j);
    if (col.is_zero()) continue;
    auto q = exact_div(col, g);
    for (int i = 0; i <= r.deg_st; ++i) r.at(i, j) = q.c[i];
  }
  return r;
}

}  // namespace detail

// Exact content extraction: f = g_s(s,t) * g_u(u,v) * residual.
inline std::tuple<BinaryForm<Rat>, BinaryForm<Rat>, BiForm<Rat>> extract_line_components(
    const BiForm<Rat>& f) {
  if (f.is_zero()) throw ZeroForm();
  BinaryForm<Rat> gs = detail::st_content(f);
  BiForm<Rat> f1 = detail::divide_st(f, gs);
  BinaryForm<Rat> gu = detail::st_content(f1.swapped());
  BiForm<Rat> residual = detail::divide_st(f1.swapped(), gu).swapped();
  return {gs, gu, residual};
}

inline CurveType classify_curve(const Bideg22Form<Rat>& f) {
  if (f.is_zero()) throw ZeroForm();
  CurveType out;
  auto [gs, gu, R] = extract_line_components(f);
  out.line_factor_st = gs;
  out.line_factor_uv = gu;
  out.residual = R;
  const int ls = gs.degree(), lu = gu.degree();

  if (ls == 2 && lu == 2) {
    out.tag = CurveTag::FourLines;
    return out;
  }
  if (ls == 1 && lu == 1) {
    out.tag = CurveTag::MixedThree;
    return out;
  }
  if (ls == 1 && lu == 0) {
    out.tag = CurveTag::OneTwoPlusOneZero;
    return out;
  }
  if (ls == 0 && lu == 1) {
    out.tag = CurveTag::TwoOnePlusZeroOne;
    return out;
  }

  // residual of full bidegree (2,2): classify through the discriminant
  BinaryForm<Rat> A = R.uv_coefficient(0), B = R.uv_coefficient(1), C = R.uv_coefficient(2);
  BinaryForm<Rat> delta = B * B - A * C * Rat(4);
  if (delta.is_zero()) {
    out.tag = CurveTag::OtherDegenerate;  // non-reduced residual
    return out;
  }
  auto pattern = multiplicity_pattern(delta);
  bool all_even = std::all_of(pattern.begin(), pattern.end(), [](int m) { return m % 2 == 0; });
  if (all_even) {
    out.tag = CurveTag::TwoOneOne;
    // Delta = c * q^2; the factors are real iff c > 0
    auto [a, b, core] = split_st_powers(delta);
    out.pair_real = sign(core.c[0]) > 0;
    return out;
  }
  if (pattern == std::vector<int>{1, 1, 1, 1}) {
    out.tag = CurveTag::SmoothGenusOne;
    return out;
  }
  if (pattern == std::vector<int>{2, 1, 1}) {
    out.tag = CurveTag::NodalIrreducibleRational;
    return out;
  }
  if (pattern == std::vector<int>{3, 1}) {
    out.tag = CurveTag::Cuspidal;
    return out;
  }
  out.tag = CurveTag::OtherDegenerate;
  return out;
}

// ---------------------------------------------------------------------------
// j-invariant of a smooth edge curve from the cross-ratio of the four branch
// points: j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2), independent of ordering.

inline double j_from_cross_ratio(std::complex<double> lambda) {
  std::complex<double> num = lambda * lambda - lambda + std::complex<double>(1);
  std::complex<double> den = lambda * lambda * (lambda - std::complex<double>(1)) *
                             (lambda - std::complex<double>(1));
  return (256.0 * num * num * num / den).real();
}

inline double j_from_branch_roots(const std::vector<ProjRoot>& roots) {
  if (roots.size() != 4) throw NotSmoothGenusOne("expected four distinct branch points");
  auto cr2 = [&](int i, int j) {  // s_i t_j - s_j t_i
    return roots[i].s * roots[j].t - roots[j].s * roots[i].t;
  };
  std::complex<double> lambda = (cr2(0, 2) * cr2(1, 3)) / (cr2(1, 2) * cr2(0, 3));
  return j_from_cross_ratio(lambda);
}

// Exact route: for a binary quartic with the classical invariants
//   I = 12ae - 3bd + c^2,   J = 72ace + 9bcd - 27ad^2 - 27b^2e - 2c^3,
// the double cover branched at its roots has j = 6912 I^3 / (4 I^3 - J^2),
// which agrees with the cross-ratio formula (4 I^3 - J^2 = 27 l^2 (l-1)^2 and
// I = l^2 - l + 1 for roots {0, 1, l, inf}).
inline Rat j_exact_from_quartic(const BinaryForm<Rat>& q) {
  if (q.degree() != 4) throw NotSmoothGenusOne("branch form is not a quartic");
  const Rat &a = q.c[0], &b = q.c[1], &c = q.c[2], &d = q.c[3], &e = q.c[4];
  Rat I = 12 * a * e - 3 * b * d + c * c;
  Rat J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e - 2 * c * c * c;
  Rat denom = 4 * I * I * I - J * J;
  if (denom == 0) throw NotSmoothGenusOne("degenerate branch quartic");
  return Rat(6912) * I * I * I / denom;
}

inline double j_invariant(const Bideg22Form<Rat>& f) {
  auto ct = classify_curve(f);
  if (ct.tag != CurveTag::SmoothGenusOne) throw NotSmoothGenusOne();
  auto [st, uv] = discriminants(f);
  return to_double(j_exact_from_quartic(st.quartic));
}

// ---------------------------------------------------------------------------
// Singular points with the five-case labels of the tangency lemma.

namespace detail {

inline bool tangent_in_plane(const Line<double>& tl, const Plane<double>& pl,
                             double tol = kTol) {
  return std::fabs(pl.eval(tl.base)) <= tol && std::fabs(pl.normal.dot(tl.direction)) <=
         tol * std::sqrt(tl.direction.norm2()) * std::sqrt(pl.normal.norm2());
}

// gradient of f at a parameter pair, numeric
inline std::array<double, 4> gradient(const BiForm<Rat>& f, double s, double t, double u,
                                      double v) {
  return {f.d_s().eval_d(s, t, u, v), f.d_t().eval_d(s, t, u, v),
          f.d_u().eval_d(s, t, u, v), f.d_v().eval_d(s, t, u, v)};
}

}  // namespace detail

// All singular points of the edge form of (c1, c2), labeled (i)..(v) by the
// geometric predicates p = q, T_p C1 in Pi2, T_q C2 in Pi1, and tested for
// nodes through the affine Hessian.
inline std::vector<SingularPoint> singular_points(const Bideg22Form<Rat>& f, const CircleQ& c1,
                                                  const CircleQ& c2) {
  std::vector<SingularPoint> out;
  auto [gs, gu, R] = extract_line_components(f);

  struct Cand {
    double s, t, u, v;
    std::optional<std::array<Rat, 4>> exact;
  };
  std::vector<Cand> cands;

  auto add_cand = [&](double s, double t, double u, double v,
                      std::optional<std::array<Rat, 4>> ex) {
    // normalize representatives
    double ns = std::hypot(s, t), nu = std::hypot(u, v);
    Cand c{s / ns, t / ns, u / nu, v / nu, std::move(ex)};
    for (const auto& o : cands) {
      double d1 = std::fabs(c.s * o.t - c.t * o.s);
      double d2 = std::fabs(c.u * o.v - c.v * o.u);
      if (d1 < 1e-8 && d2 < 1e-8) return;
    }
    cands.push_back(std::move(c));
  };

  // real roots of a binary form as (s, t) representatives, exact when rational
  auto real_points = [&](const BinaryForm<Rat>& g)
      -> std::vector<std::pair<std::array<double, 2>, std::optional<std::array<Rat, 2>>>> {
    std::vector<std::pair<std::array<double, 2>, std::optional<std::array<Rat, 2>>>> pts;
    if (g.degree() < 1) return pts;
    for (const auto& r : projective_roots(g)) {
      if (!r.real) continue;
      if (r.at_infinity()) {
        pts.push_back({{0.0, 1.0}, std::array<Rat, 2>{Rat(0), Rat(1)}});
      } else {
        double x = r.t.real();
        std::optional<std::array<Rat, 2>> ex;
        Rat rx = snap_rational(x, 1e-10);
        if (g.eval(Rat(1), rx) == 0) ex = std::array<Rat, 2>{Rat(1), rx};
        pts.push_back({{1.0, x}, ex});
      }
    }
    return pts;
  };

  // 1) singular points of the residual over branch points: double (u:v) root
  //    where ds R also vanishes; content-free residuals linear in (u,v) or
  //    (s,t) are smooth, so only the full quadratic case matters
  if (R.deg_st >= 1 && R.deg_uv == 2) {
    BinaryForm<Rat> A = R.uv_coefficient(0), B = R.uv_coefficient(1), C = R.uv_coefficient(2);
    BinaryForm<Rat> delta = B * B - A * C * Rat(4);
    if (!delta.is_zero() && delta.degree() >= 1) {
      for (const auto& r : projective_roots(delta)) {
        if (!r.real) continue;
        double s0 = r.s.real(), t0 = r.t.real();
        // double root of the fiber quadratic
        double Ad = A.eval_d(s0, t0), Bd = B.eval_d(s0, t0), Cd = C.eval_d(s0, t0);
        double u0, v0;
        if (std::fabs(Ad) >= std::fabs(Cd)) { u0 = -Bd; v0 = 2 * Ad; }
        else { u0 = 2 * Cd; v0 = -Bd; }
        if (std::hypot(u0, v0) < 1e-13) continue;  // fiber vanished: line component handled below
        double scale = 1e-300;
        for (const auto& cc : R.c) scale = std::max(scale, std::fabs(to_double(cc)));
        auto grad = detail::gradient(R, s0, t0, u0 / std::hypot(u0, v0), v0 / std::hypot(u0, v0));
        double gn = 0;
        for (double g : grad) gn = std::max(gn, std::fabs(g));
        if (gn > 1e-6 * scale) continue;  // branch point but not singular
        // exact candidate?
        std::optional<std::array<Rat, 4>> ex;
        Rat rs = snap_rational(t0 / (std::fabs(s0) > 0.5 ? s0 : 1.0), 1e-10);
        if (std::fabs(s0) > 0.5 && delta.eval(Rat(1), rs) == 0) {
          BinaryForm<Rat> fq = R.fiber_st(Rat(1), rs);
          // double root (u : v) = (-c1 : 2 c0) of c0 u^2 + c1 uv + c2 v^2
          if (!fq.is_zero() && fq.degree() == 2 && fq.c[0] != 0) {
            ex = std::array<Rat, 4>{Rat(1), rs, -fq.c[1] / (2 * fq.c[0]), Rat(1)};
          }
        }
        add_cand(s0, t0, u0, v0, ex);
      }
    }
  }

  // 2) intersections of (1,0)-line components with the residual and with
  //    (0,1)-line components
  auto s_lines = real_points(gs);
  auto u_lines = real_points(gu);
  for (const auto& [sd, sx] : s_lines) {
    // line {s0} x P^1 meets the residual where the fiber form vanishes
    if (sx) {
      BinaryForm<Rat> fib = R.fiber_st((*sx)[0], (*sx)[1]);
      if (!fib.is_zero()) {
        for (const auto& r : projective_roots(fib)) {
          if (!r.real) continue;
          std::optional<std::array<Rat, 4>> ex;
          if (!r.at_infinity()) {
            Rat ru = snap_rational(r.t.real(), 1e-10);
            if (fib.eval(Rat(1), ru) == 0)
              ex = std::array<Rat, 4>{(*sx)[0], (*sx)[1], Rat(1), ru};
          } else {
            ex = std::array<Rat, 4>{(*sx)[0], (*sx)[1], Rat(0), Rat(1)};
          }
          add_cand(sd[0], sd[1], r.s.real(), r.t.real(), ex);
        }
      }
    } else if (R.deg_uv == 2) {
      // irrational line position: numeric fiber roots
      double Ad = R.uv_coefficient(0).eval_d(sd[0], sd[1]);
      double Bd = R.uv_coefficient(1).eval_d(sd[0], sd[1]);
      double Cd = R.uv_coefficient(2).eval_d(sd[0], sd[1]);
      double disc = Bd * Bd - 4 * Ad * Cd;
      if (disc >= -1e-12 && std::fabs(Ad) > 1e-13) {
        double sq = std::sqrt(std::max(0.0, disc));
        add_cand(sd[0], sd[1], (-Bd + sq), 2 * Ad, std::nullopt);
        add_cand(sd[0], sd[1], (-Bd - sq), 2 * Ad, std::nullopt);
      }
    }
    // meets every (0,1)-line
    for (const auto& [ud, ux] : u_lines) {
      std::optional<std::array<Rat, 4>> ex;
      if (sx && ux) ex = std::array<Rat, 4>{(*sx)[0], (*sx)[1], (*ux)[0], (*ux)[1]};
      add_cand(sd[0], sd[1], ud[0], ud[1], ex);
    }
  }
  for (const auto& [ud, ux] : u_lines) {
    BinaryForm<Rat> fib = (ux) ? R.fiber_uv((*ux)[0], (*ux)[1]) : BinaryForm<Rat>::zero(R.deg_st);
    if (ux && !fib.is_zero()) {
      for (const auto& r : projective_roots(fib)) {
        if (!r.real) continue;
        std::optional<std::array<Rat, 4>> ex;
        if (!r.at_infinity()) {
          Rat rs = snap_rational(r.t.real(), 1e-10);
          if (fib.eval(Rat(1), rs) == 0) ex = std::array<Rat, 4>{Rat(1), rs, (*ux)[0], (*ux)[1]};
        } else {
          ex = std::array<Rat, 4>{Rat(0), Rat(1), (*ux)[0], (*ux)[1]};
        }
        add_cand(r.s.real(), r.t.real(), ud[0], ud[1], ex);
      }
    }
  }

  // Label the candidates.
  CircleD c1d = to_d(c1), c2d = to_d(c2);
  auto pc1 = circle_parametrization(c1d);
  auto pc2 = circle_parametrization(c2d);
  Plane<double> pi1 = c1d.plane(), pi2 = c2d.plane();

  for (const auto& cd : cands) {
    // verify the full gradient of f vanishes (f includes line factors)
    auto grad = detail::gradient(f, cd.s, cd.t, cd.u, cd.v);
    double scale = 0;
    for (const auto& cc : f.c) scale = std::max(scale, std::fabs(to_double(cc)));
    bool singular = true;
    for (double g : grad)
      if (std::fabs(g) > 1e-6 * std::max(1.0, scale)) singular = false;
    if (!singular) continue;

    SingularPoint sp;
    sp.s = cd.s; sp.t = cd.t; sp.u = cd.u; sp.v = cd.v;
    sp.exact = cd.exact;

    Vec3d p = pc1.point_d(cd.s, cd.t);
    Vec3d q = pc2.point_d(cd.u, cd.v);
    auto tl1 = tangent_line(pc1, cd.s, cd.t);
    auto tl2 = tangent_line(pc2, cd.u, cd.v);
    bool same = norm(p - q) <= 1e-7 * (1 + norm(p));
    bool t1_in_pi2 = detail::tangent_in_plane(tl1, pi2, 1e-7);
    bool t2_in_pi1 = detail::tangent_in_plane(tl2, pi1, 1e-7);

    if (same) {
      if (t1_in_pi2 && t2_in_pi1) sp.lemma_case = LemmaCase::III;
      else if (t1_in_pi2 || t2_in_pi1) sp.lemma_case = LemmaCase::II;
      else sp.lemma_case = LemmaCase::I;
    } else {
      sp.lemma_case = (t1_in_pi2 && t2_in_pi1) ? LemmaCase::V : LemmaCase::IV;
    }

    // node test: affine Hessian at the point in the chart where the
    // representative is farthest from the coordinate axes
    {
      // charts: fix s=1 or t=1, u=1 or v=1
      bool chart_s = std::fabs(cd.s) >= std::fabs(cd.t);
      bool chart_u = std::fabs(cd.u) >= std::fabs(cd.v);
      double x0 = chart_s ? cd.t / cd.s : cd.s / cd.t;
      double y0 = chart_u ? cd.v / cd.u : cd.u / cd.v;
      auto F = [&](double x, double y) {
        double s = chart_s ? 1 : x, t = chart_s ? x : 1;
        double u = chart_u ? 1 : y, v = chart_u ? y : 1;
        return f.eval_d(s, t, u, v);
      };
      double h = 1e-4;
      double fxx = (F(x0 + h, y0) - 2 * F(x0, y0) + F(x0 - h, y0)) / (h * h);
      double fyy = (F(x0, y0 + h) - 2 * F(x0, y0) + F(x0, y0 - h)) / (h * h);
      double fxy = (F(x0 + h, y0 + h) - F(x0 + h, y0 - h) - F(x0 - h, y0 + h) +
                    F(x0 - h, y0 - h)) / (4 * h * h);
      double disc = fxy * fxy - fxx * fyy;
      double sc = std::max({std::fabs(fxx), std::fabs(fyy), std::fabs(fxy), 1e-12});
      sp.is_node = disc > 1e-6 * sc * sc || disc < -1e-6 * sc * sc;
      // nodes have nonzero Hessian discriminant regardless of sign
      sp.is_node = std::fabs(disc) > 1e-6 * sc * sc;
    }
    out.push_back(sp);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Real connected components of the zero set in RP^1 x RP^1. Fiber solutions
// are traced over live arcs between real branch angles; union-find joins
// branches across nodes, caps at simple branch points, line components, and
// isolated real points. The grid is a heuristic; multiplicities of branch
// points are exact, so the connection topology at them is not guessed from
// floats.

struct RealComponents {
  int count = 0;
  // (theta_st, theta_uv) angle pairs in [0, pi) x [0, pi), one chain per
  // component (line components contribute synthetic sweeps)
  std::vector<std::vector<std::array<double, 2>>> chains;
};

namespace detail {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

inline double angle_mod_pi(double a) {
  a = std::fmod(a, M_PI);
  if (a < 0) a += M_PI;
  if (a >= M_PI - 1e-15) a = 0;
  return a;
}
inline double rp1_dist(double a, double b) {
  double d = std::fabs(angle_mod_pi(a) - angle_mod_pi(b));
  return std::min(d, M_PI - d);
}

// the two projective solutions of a u^2 + b uv + c v^2 = 0 as angles, given
// disc >= 0; falls back to a double root when disc is slightly negative
inline std::array<double, 2> fiber_angles(double a, double b, double c) {
  double disc = b * b - 4 * a * c;
  double sq = std::sqrt(std::max(0.0, disc));
  if (std::fabs(a) >= std::fabs(c)) {
    double x0 = (-b - sq) / (2 * a), x1 = (-b + sq) / (2 * a);
    return {std::atan2(1.0, x0), std::atan2(1.0, x1)};  // (u, v) = (x, 1)
  }
  if (std::fabs(c) < 1e-300) {  // a ~ c ~ 0: b uv = 0 -> (1:0), (0:1)
    return {0.0, M_PI / 2};
  }
  double y0 = (-b - sq) / (2 * c), y1 = (-b + sq) / (2 * c);
  return {std::atan2(y0, 1.0), std::atan2(y1, 1.0)};  // (u, v) = (1, y)
}

}  // namespace detail

inline RealComponents real_components(const Bideg22Form<Rat>& f, int grid = 4096) {
  if (f.is_zero()) throw ZeroForm();
  RealComponents out;
  auto [gs, gu, R] = extract_line_components(f);

  // node ids: lines first, then per-arc branches, then isolated points
  struct LineInfo { double theta; bool vertical; };
  std::vector<LineInfo> lines;
  for (const auto& g : {std::pair{&gs, true}, std::pair{&gu, false}}) {
    if (g.first->degree() < 1) continue;
    for (const auto& r : projective_roots(*g.first)) {
      if (!r.real) continue;
      double th = r.at_infinity() ? M_PI / 2
                                  : detail::angle_mod_pi(std::atan2(r.t.real(), r.s.real()));
      lines.push_back({th, g.second});
    }
  }

  const bool has_residual = R.deg_st >= 1;
  const bool quadratic_fiber = R.deg_uv == 2;

  // arcs and branch angles of the residual
  struct BranchAngle { double theta; int mult; };
  std::vector<BranchAngle> branch;
  BinaryForm<Rat> A = BinaryForm<Rat>({Rat(0)}), B = A, C = A, delta = BinaryForm<Rat>({Rat(1)});
  if (has_residual && quadratic_fiber) {
    A = R.uv_coefficient(0);
    B = R.uv_coefficient(1);
    C = R.uv_coefficient(2);
    delta = B * B - A * C * Rat(4);
    if (delta.is_zero()) throw DegenerateConfiguration("form has a non-reduced factor");
    for (const auto& r : projective_roots(delta)) {
      if (!r.real) continue;
      double th = r.at_infinity() ? M_PI / 2
                                  : detail::angle_mod_pi(std::atan2(r.t.real(), r.s.real()));
      branch.push_back({th, r.multiplicity});
    }
    std::sort(branch.begin(), branch.end(),
              [](const BranchAngle& a, const BranchAngle& b) { return a.theta < b.theta; });
  }

  const int n_lines = (int)lines.size();
  const int n_arcs = branch.empty() ? 1 : (int)branch.size();
  // ids: line i -> i; arc a branch b -> n_lines + 2a + b; isolated points appended
  detail::Dsu dsu(n_lines + 2 * n_arcs + (int)branch.size());
  int iso_base = n_lines + 2 * n_arcs;
  std::vector<bool> present(dsu.parent.size(), false);
  for (int i = 0; i < n_lines; ++i) present[i] = true;

  std::vector<std::vector<std::array<double, 2>>> arc_samples(2 * n_arcs);
  std::vector<bool> arc_live(n_arcs, false);
  std::vector<std::array<double, 2>> iso_pt(branch.size(), {0, 0});

  auto fiber_at = [&](double th) -> std::array<double, 3> {
    double s = std::cos(th), t = std::sin(th);
    return {A.eval_d(s, t), B.eval_d(s, t), C.eval_d(s, t)};
  };
  auto delta_at = [&](double th) {
    auto [a, b, c] = fiber_at(th);
    return b * b - 4 * a * c;
  };

  if (has_residual && quadratic_fiber) {
    // liveness per arc
    for (int a = 0; a < n_arcs; ++a) {
      double lo = branch.empty() ? 0.0 : branch[a].theta;
      double hi = branch.empty() ? M_PI : (a + 1 < n_arcs ? branch[a + 1].theta : branch[0].theta + M_PI);
      double mid = detail::angle_mod_pi(0.5 * (lo + hi));
      arc_live[a] = delta_at(mid) > 0;
    }
    // sample live arcs with refinement toward the endpoints
    parallel_for(n_arcs, [&](std::size_t ai) {
      int a = (int)ai;
      if (!arc_live[a]) return;
      double lo = branch.empty() ? 0.0 : branch[a].theta;
      double hi = branch.empty() ? M_PI : (a + 1 < n_arcs ? branch[a + 1].theta : branch[0].theta + M_PI);
      double len = hi - lo;
      int n = std::max(16, (int)(grid * len / M_PI));
      std::vector<double> thetas;
      thetas.reserve(n + 64);
      for (int k = 0; k <= n; ++k) {
        // clustered toward both ends (branch points need refinement)
        double x = (double)k / n;
        double w = 0.5 - 0.5 * std::cos(M_PI * x);
        thetas.push_back(lo + len * w);
      }
      if (!branch.empty()) {  // keep away from the exact branch angle
        thetas.front() += 1e-9 * std::max(1.0, len);
        thetas.back() -= 1e-9 * std::max(1.0, len);
      }
      auto& ch0 = arc_samples[2 * a];
      auto& ch1 = arc_samples[2 * a + 1];
      double prev0 = 0, prev1 = 0;
      bool first = true;
      for (double th : thetas) {
        auto [aa, bb, cc] = fiber_at(th);
        if (std::fabs(aa) < 1e-300 && std::fabs(bb) < 1e-300 && std::fabs(cc) < 1e-300)
          continue;  // passing through a vertical line position
        auto [p0, p1] = detail::fiber_angles(aa, bb, cc);
        if (!first) {
          double keep = detail::rp1_dist(p0, prev0) + detail::rp1_dist(p1, prev1);
          double swap = detail::rp1_dist(p1, prev0) + detail::rp1_dist(p0, prev1);
          if (swap < keep) std::swap(p0, p1);
        }
        first = false;
        prev0 = p0;
        prev1 = p1;
        double thm = detail::angle_mod_pi(th);
        ch0.push_back({thm, detail::angle_mod_pi(p0)});
        ch1.push_back({thm, detail::angle_mod_pi(p1)});
      }
    });
    for (int a = 0; a < n_arcs; ++a) {
      if (arc_live[a]) {
        present[n_lines + 2 * a] = true;
        present[n_lines + 2 * a + 1] = true;
      }
    }
    // wire up connections at branch angles
    if (branch.empty()) {
      if (arc_live[0]) {
        // full circle: decide monodromy by matching the wrap
        auto& ch0 = arc_samples[0];
        auto& ch1 = arc_samples[1];
        if (!ch0.empty()) {
          double f0 = ch0.front()[1], e0 = ch0.back()[1];
          double f1 = ch1.front()[1], e1 = ch1.back()[1];
          double keep = detail::rp1_dist(e0, f0) + detail::rp1_dist(e1, f1);
          double swap = detail::rp1_dist(e0, f1) + detail::rp1_dist(e1, f0);
          if (swap < keep) dsu.unite(n_lines + 0, n_lines + 1);
        }
      }
    } else {
      for (int k = 0; k < (int)branch.size(); ++k) {
        int arc_r = k;                                  // arc starting at branch[k]
        int arc_l = (k + n_arcs - 1) % n_arcs;          // arc ending at branch[k]
        bool live_l = arc_live[arc_l], live_r = arc_live[arc_r];
        int l0 = n_lines + 2 * arc_l, l1 = l0 + 1;
        int r0 = n_lines + 2 * arc_r, r1 = r0 + 1;
        if (live_l && live_r) {
          dsu.unite(l0, l1);
          dsu.unite(l0, r0);
          dsu.unite(r0, r1);
        } else if (live_l && !live_r) {
          dsu.unite(l0, l1);
        } else if (!live_l && live_r) {
          dsu.unite(r0, r1);
        } else {
          // isolated real point at the double fiber root
          auto [aa, bb, cc] = fiber_at(branch[k].theta);
          auto [p0, p1] = detail::fiber_angles(aa, bb, cc);
          double mid = (std::fabs(p0 - p1) > M_PI / 2)
                           ? detail::angle_mod_pi(0.5 * (p0 + p1) + M_PI / 2)
                           : detail::angle_mod_pi(0.5 * (p0 + p1));
          iso_pt[k] = {branch[k].theta, mid};
          present[iso_base + k] = true;
        }
      }
    }
  } else if (has_residual && R.deg_uv == 1) {
    // linear fiber: a single closed chain (u : v) = (-Q : P)
    present[n_lines] = true;
    auto& ch = arc_samples[0];
    BinaryForm<Rat> P = R.uv_coefficient(0), Q = R.uv_coefficient(1);
    for (int k = 0; k < grid; ++k) {
      double th = k * M_PI / grid;
      double s = std::cos(th), t = std::sin(th);
      double p = P.eval_d(s, t), q = Q.eval_d(s, t);
      if (std::hypot(p, q) < 1e-300) continue;
      ch.push_back({th, detail::angle_mod_pi(std::atan2(p, -q))});
    }
  }

  // connect lines to everything they meet
  for (int i = 0; i < n_lines; ++i) {
    for (int j = i + 1; j < n_lines; ++j)
      if (lines[i].vertical != lines[j].vertical) dsu.unite(i, j);
    if (!has_residual) continue;
    // does the line meet the residual in a real point?
    double th = lines[i].theta;
    double aa, bb, cc;
    if (lines[i].vertical) {
      if (R.deg_uv < 2) {  // linear fiber always meets
        if (R.deg_uv == 1) dsu.unite(i, n_lines);
        continue;
      }
      auto fi = fiber_at(th);
      aa = fi[0]; bb = fi[1]; cc = fi[2];
    } else {
      if (R.deg_st < 2) {
        if (R.deg_st == 1) dsu.unite(i, n_lines);
        continue;
      }
      double u = std::cos(th), v = std::sin(th);
      aa = R.st_coefficient(0).eval_d(u, v);
      bb = R.st_coefficient(1).eval_d(u, v);
      cc = R.st_coefficient(2).eval_d(u, v);
    }
    double disc = bb * bb - 4 * aa * cc;
    double scale = std::max({std::fabs(aa), std::fabs(bb), std::fabs(cc), 1e-12});
    if (disc < -1e-9 * scale * scale) continue;  // no real crossing
    if (!lines[i].vertical) {
      // horizontal line: meets the residual; join with chains passing nearby
      for (int a = 0; a < n_arcs; ++a)
        for (int b = 0; b < 2; ++b) {
          if (!present[n_lines + 2 * a + b]) continue;
          for (const auto& smp : arc_samples[2 * a + b])
            if (detail::rp1_dist(smp[1], th) < 2e-3) {
              dsu.unite(i, n_lines + 2 * a + b);
              break;
            }
        }
      continue;
    }
    // vertical line: find the arc containing theta (or the nearest branch point)
    if (branch.empty()) {
      if (arc_live.size() && arc_live[0]) {
        dsu.unite(i, n_lines);
        dsu.unite(i, n_lines + 1);
      }
      continue;
    }
    bool at_branch = false;
    for (int k = 0; k < (int)branch.size(); ++k) {
      if (detail::rp1_dist(branch[k].theta, th) < 1e-9) {
        int arc_r = k, arc_l = (k + n_arcs - 1) % n_arcs;
        if (arc_live[arc_l]) dsu.unite(i, n_lines + 2 * arc_l);
        if (arc_live[arc_r]) dsu.unite(i, n_lines + 2 * arc_r);
        if (present[iso_base + k]) dsu.unite(i, iso_base + k);
        at_branch = true;
      }
    }
    if (at_branch) continue;
    for (int a = 0; a < n_arcs; ++a) {
      double lo = branch[a].theta;
      double hi = (a + 1 < n_arcs) ? branch[a + 1].theta : branch[0].theta + M_PI;
      double thn = th < lo ? th + M_PI : th;
      if (thn > lo && thn < hi && arc_live[a]) {
        dsu.unite(i, n_lines + 2 * a);
        dsu.unite(i, n_lines + 2 * a + 1);
      }
    }
  }

  // collect components
  std::map<int, int> comp_of_root;
  for (int id = 0; id < (int)present.size(); ++id) {
    if (!present[id]) continue;
    int root = dsu.find(id);
    if (!comp_of_root.count(root)) {
      comp_of_root[root] = out.count++;
      out.chains.emplace_back();
    }
    auto& chain = out.chains[comp_of_root[root]];
    if (id < n_lines) {
      for (int k = 0; k < 64; ++k) {
        double sweep = k * M_PI / 64;
        chain.push_back(lines[id].vertical ? std::array<double, 2>{lines[id].theta, sweep}
                                           : std::array<double, 2>{sweep, lines[id].theta});
      }
    } else if (id < iso_base) {
      const auto& smp = arc_samples[id - n_lines];
      chain.insert(chain.end(), smp.begin(), smp.end());
    } else {
      chain.push_back(iso_pt[id - iso_base]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// A circle C2 whose edge curve with c1 is branched exactly over four given
// parameters of c1: the tangents at each pair meet in a point (p resp. q) and
// any circle through p and q transversal to the plane of c1 works; we take
// the circle with diameter p q in the plane through them tilted by
// plane_pick radians away from the plane of c1.

inline CircleD circle_with_branch_points(const CircleD& c1, const std::array<double, 4>& angles,
                                         const std::array<std::array<int, 2>, 2>& partition,
                                         double plane_pick) {
  // distinctness
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (detail::rp1_dist(angles[i] / 2, angles[j] / 2) < 1e-12)
        throw DegenerateConfiguration("branch parameters must be distinct");

  auto pair_point = [&](const std::array<int, 2>& pr) {
    Line<double> l1 = tangent_line_at_angle(c1, angles[pr[0]]);
    Line<double> l2 = tangent_line_at_angle(c1, angles[pr[1]]);
    Vec3d cr = l1.direction.cross(l2.direction);
    double denom = cr.norm2();
    if (denom < 1e-18 * l1.direction.norm2() * l2.direction.norm2())
      throw DegenerateConfiguration("pair tangents are parallel");
    double tpar = (l2.base - l1.base).cross(l2.direction).dot(cr) / denom;
    return l1.at(tpar);
  };
  Vec3d p = pair_point(partition[0]);
  Vec3d q = pair_point(partition[1]);
  if (norm(q - p) < 1e-9 * (1 + c1.radius)) throw DegenerateConfiguration("pair points coincide");
  if (std::fabs(std::sin(plane_pick)) < 1e-9)
    throw DegenerateConfiguration("plane pick keeps the circle coplanar");

  Vec3d axis = normalized(q - p);
  Vec3d n2 = c1.normal * std::cos(plane_pick) + axis.cross(c1.normal) * std::sin(plane_pick);
  return CircleD((p + q) / 2.0, norm(q - p) / 2.0, normalized(n2));
}

}  // namespace bicircle
