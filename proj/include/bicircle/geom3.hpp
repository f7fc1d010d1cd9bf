#pragma once

// Geometric primitives: points, planes, lines, circles, and the rational
// parametrization of a circle as a quadruple of binary quadratics in
// homogeneous coordinates [X0 : X1 : X2 : X3], affine point = (X1,X2,X3)/X0.

#include "bicircle/errors.hpp"
#include "bicircle/poly.hpp"
#include "bicircle/scalar.hpp"

#include <array>
#include <optional>

namespace bicircle {

template <typename T>
struct Vec3 {
  T x{0}, y{0}, z{0};

  Vec3() = default;
  Vec3(T x_, T y_, T z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(const T& k) const { return {x * k, y * k, z * k}; }
  Vec3 operator/(const T& k) const { return {x / k, y / k, z / k}; }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  T dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  T norm2() const { return dot(*this); }
  bool is_zero() const { return x == T(0) && y == T(0) && z == T(0); }
};

template <typename T>
using Point3 = Vec3<T>;

using Vec3d = Vec3<double>;
using Vec3q = Vec3<Rat>;

inline Vec3d to_d(const Vec3q& v) { return {to_double(v.x), to_double(v.y), to_double(v.z)}; }
inline Vec3d to_d(const Vec3d& v) { return v; }
inline double norm(const Vec3d& v) { return std::sqrt(v.norm2()); }
inline Vec3d normalized(const Vec3d& v) { return v / norm(v); }

// Locus normal . x = offset.
template <typename T>
struct Plane {
  Vec3<T> normal;
  T offset{0};

  Plane() = default;
  Plane(Vec3<T> n, T d) : normal(std::move(n)), offset(std::move(d)) {
    if (normal.is_zero()) throw std::invalid_argument("plane with zero normal");
  }
  T eval(const Point3<T>& p) const { return normal.dot(p) - offset; }
  bool contains(const Point3<T>& p) const { return eval(p) == T(0); }
};

// base + span * direction; at_infinity lines carry only a direction class:
// for a pencil of parallel planes the common normal identifies the line at
// infinity, stored in `direction`.
template <typename T>
struct Line {
  Point3<T> base;
  Vec3<T> direction;
  bool at_infinity = false;

  Line() = default;
  Line(Point3<T> b, Vec3<T> d, bool inf = false)
      : base(std::move(b)), direction(std::move(d)), at_infinity(inf) {
    if (direction.is_zero()) throw std::invalid_argument("line with zero direction");
  }
  Point3<T> at(const T& t) const { return base + direction * t; }
};

template <typename T>
struct Circle {
  Point3<T> center;
  T radius{1};
  Vec3<T> normal;  // unit (exact mode: exactly, float mode: within kTol)

  Circle() = default;
  Circle(Point3<T> c, T r, Vec3<T> n)
      : center(std::move(c)), radius(std::move(r)), normal(std::move(n)) {
    if (!(radius > T(0))) throw std::invalid_argument("circle radius must be positive");
    check_unit_normal();
  }

  Plane<T> plane() const { return Plane<T>(normal, normal.dot(center)); }

 private:
  void check_unit_normal() const {
    if constexpr (std::is_same_v<T, Rat>) {
      if (normal.norm2() != Rat(1)) throw std::invalid_argument("normal must be unit (exact)");
    } else {
      if (std::fabs(normal.norm2() - 1.0) > 32 * kTol)
        throw std::invalid_argument("normal must be unit");
    }
  }
};

using CircleQ = Circle<Rat>;
using CircleD = Circle<double>;

inline CircleD to_d(const CircleQ& c) {
  CircleD r;
  r.center = to_d(c.center);
  r.radius = to_double(c.radius);
  r.normal = to_d(c.normal);
  return r;
}
inline CircleD to_d(const CircleD& c) { return c; }

// Nearest rational point on the unit sphere within tol, via a snapped
// stereographic chart (so the result is exactly unit).
inline Vec3q snap_unit(const Vec3d& n0, double tol = kTol) {
  Vec3d n = normalized(n0);
  // direct snap first: catches axis directions and Pythagorean normals
  Vec3q direct{snap_rational(n.x, tol), snap_rational(n.y, tol), snap_rational(n.z, tol)};
  if (!direct.is_zero() && is_square(direct.norm2())) {
    Vec3q u = direct / *exact_sqrt(direct.norm2());
    Vec3d err = to_d(u) - n;
    if (norm(err) <= 4 * tol) return u;
  }
  bool south = n.z > 0.5;  // project from the farther pole
  double denom = south ? 1 + n.z : 1 - n.z;
  double p = n.x / denom, q = n.y / denom;
  for (double t = tol / 4; ; t /= 16) {
    Rat rp = snap_rational(p, t), rq = snap_rational(q, t);
    Rat s2 = rp * rp + rq * rq;
    Vec3q cand{2 * rp / (1 + s2), 2 * rq / (1 + s2),
               (south ? (Rat(1) - s2) : (s2 - Rat(1))) / (1 + s2)};
    if (norm(to_d(cand) - n) <= tol) return cand;
    if (t < 1e-18) return cand;  // double precision exhausted
  }
}

inline CircleQ snap(const CircleD& c, double tol = kTol) {
  return CircleQ({snap_rational(c.center.x, tol), snap_rational(c.center.y, tol),
                  snap_rational(c.center.z, tol)},
                 snap_rational(c.radius, tol), snap_unit(c.normal, tol));
}

// Four binary quadratics f0..f3 spanning the full space of quadratics; the
// unique linear relation among them cuts out the plane of the conic.
template <typename T>
struct ParametrizedConic {
  std::array<BinaryForm<T>, 4> f;

  Point3<T> point(const T& s, const T& t) const {
    T w = f[0].eval(s, t);
    if (w == T(0)) throw std::domain_error("point at infinity");
    return {f[1].eval(s, t) / w, f[2].eval(s, t) / w, f[3].eval(s, t) / w};
  }
  Vec3d point_d(double s, double t) const {
    double w = f[0].eval_d(s, t);
    return Vec3d{f[1].eval_d(s, t), f[2].eval_d(s, t), f[3].eval_d(s, t)} / w;
  }
};

using ConicQ = ParametrizedConic<Rat>;

// rank of the 4x3 coefficient matrix must be 3 for a genuine conic
template <typename T>
int coefficient_rank(const ParametrizedConic<T>& pc);

// ---------------------------------------------------------------------------
// Deterministic in-plane frame (u, v = n x u). u is the first column of the
// Householder reflection through w = n + sign(n_z) e3; this is exactly unit
// and exactly rational for every rational unit normal, and the same formula
// serves float mode, so parameter angles agree across modes. (A Gram-Schmidt
// completion against a standard basis vector is irrational for most rational
// unit normals, which would break exact-mode parametrization.)

template <typename T>
std::pair<Vec3<T>, Vec3<T>> circle_frame(const Vec3<T>& n) {
  if (n.is_zero()) throw std::invalid_argument("zero normal");
  T s3 = (n.z >= T(0)) ? T(1) : T(-1);
  Vec3<T> w{n.x, n.y, n.z + s3};
  T d = w.norm2();  // 2 (1 + |n_z|) for unit n, never zero
  Vec3<T> u = Vec3<T>{T(1), T(0), T(0)} - w * (T(2) * w.x / d);
  return {u, n.cross(u)};
}

// f0 = s^2 + t^2, affine part = center (s^2+t^2) + radius ((s^2-t^2) u + 2st v).
template <typename T>
ParametrizedConic<T> circle_parametrization(const Circle<T>& c, const Vec3<T>& u,
                                            const Vec3<T>& v) {
  ParametrizedConic<T> pc;
  pc.f[0] = BinaryForm<T>({T(1), T(0), T(1)});
  auto coord = [&](const T& ctr, const T& uu, const T& vv) {
    // ctr (s^2+t^2) + r uu (s^2-t^2) + r vv (2 s t)
    return BinaryForm<T>({ctr + c.radius * uu, T(2) * c.radius * vv, ctr - c.radius * uu});
  };
  pc.f[1] = coord(c.center.x, u.x, v.x);
  pc.f[2] = coord(c.center.y, u.y, v.y);
  pc.f[3] = coord(c.center.z, u.z, v.z);
  return pc;
}

template <typename T>
ParametrizedConic<T> circle_parametrization(const Circle<T>& c) {
  auto [u, v] = circle_frame<T>(c.normal);
  return circle_parametrization(c, u, v);
}

// Point on the circle at angle theta (measured in the canonical frame).
inline Vec3d circle_point(const CircleD& c, double theta) {
  auto [u, v] = circle_frame<double>(c.normal);
  return c.center + u * (c.radius * std::cos(theta)) + v * (c.radius * std::sin(theta));
}

// (s : t) parameter of an on-circle point; the parametrization traces angle
// theta with tan(theta/2) = t/s.
inline std::pair<double, double> circle_param_of_point(const CircleD& c, const Vec3d& p) {
  auto [u, v] = circle_frame<double>(c.normal);
  Vec3d w = p - c.center;
  double theta = std::atan2(w.dot(v), w.dot(u));
  return {std::cos(theta / 2), std::sin(theta / 2)};
}

// Exact variant for rational points on rational-frame circles.
inline std::pair<Rat, Rat> circle_param_of_point(const CircleQ& c, const Vec3q& p) {
  auto [u, v] = circle_frame<Rat>(c.normal);
  Vec3q w = p - c.center;
  Rat cs = w.dot(u) / c.radius, sn = w.dot(v) / c.radius;  // cos, sin of theta
  if (cs * cs + sn * sn != 1) throw std::invalid_argument("point not on circle");
  if (cs == -1) return {Rat(0), Rat(1)};
  return {Rat(1), sn / (cs + 1)};  // tan(theta/2)
}

// ---------------------------------------------------------------------------
// Tangent line at (s : t): spanned by the partials of the parametrization.

namespace detail {
// Line through two projective points given as 4-vectors [X0,X1,X2,X3].
template <typename T>
Line<T> line_through_projective(const std::array<T, 4>& P, const std::array<T, 4>& Q) {
  const bool p_fin = P[0] != T(0), q_fin = Q[0] != T(0);
  if (p_fin && q_fin) {
    Point3<T> p{P[1] / P[0], P[2] / P[0], P[3] / P[0]};
    Point3<T> q{Q[1] / Q[0], Q[2] / Q[0], Q[3] / Q[0]};
    return Line<T>(p, q - p);
  }
  if (p_fin) {
    return Line<T>({P[1] / P[0], P[2] / P[0], P[3] / P[0]}, {Q[1], Q[2], Q[3]});
  }
  if (q_fin) {
    return Line<T>({Q[1] / Q[0], Q[2] / Q[0], Q[3] / Q[0]}, {P[1], P[2], P[3]});
  }
  // both at infinity: the tangent is the line at infinity of some plane;
  // report it with the spanned direction pair reduced to one representative
  return Line<T>(Point3<T>{}, Vec3<T>{P[1], P[2], P[3]}, /*inf=*/true);
}
}  // namespace detail

template <typename T>
Line<T> tangent_line(const ParametrizedConic<T>& pc, const T& s, const T& t) {
  if (s == T(0) && t == T(0)) throw ZeroParameter();
  std::array<T, 4> ds, dt;
  for (int i = 0; i < 4; ++i) {
    ds[i] = pc.f[i].ds().eval(s, t);
    dt[i] = pc.f[i].dt().eval(s, t);
  }
  return detail::line_through_projective(ds, dt);
}

template <typename T>
Line<T> tangent_line(const Circle<T>& c, const T& s, const T& t) {
  return tangent_line(circle_parametrization(c), s, t);
}

// Tangent line in float mode at a circle angle, no frame restrictions.
inline Line<double> tangent_line_at_angle(const CircleD& c, double theta) {
  auto [u, v] = circle_frame<double>(c.normal);
  Vec3d p = c.center + u * (c.radius * std::cos(theta)) + v * (c.radius * std::sin(theta));
  Vec3d dir = u * (-std::sin(theta)) + v * std::cos(theta);
  return Line<double>(p, dir);
}

// ---------------------------------------------------------------------------
// Plane intersection. Parallel distinct planes give the at-infinity line
// carrying the common normal direction.

template <typename T>
Line<T> plane_intersection(const Plane<T>& p1, const Plane<T>& p2) {
  Vec3<T> d = p1.normal.cross(p2.normal);
  if (d.is_zero()) {
    // parallel; identical iff offsets match after scaling normals
    // n2 = k n1 with k = (n1.n2)/(n1.n1); identical iff offset2 == k offset1
    T k = p1.normal.dot(p2.normal) / p1.normal.norm2();
    if (p2.offset == k * p1.offset &&
        (p2.normal - p1.normal * k).is_zero())
      throw IdenticalPlanes();
    return Line<T>(Point3<T>{}, p1.normal, /*inf=*/true);
  }
  // base point solving n1.x = d1, n2.x = d2 in span(n1, n2)
  T n11 = p1.normal.norm2(), n22 = p2.normal.norm2(), n12 = p1.normal.dot(p2.normal);
  T det = n11 * n22 - n12 * n12;
  T a = (p1.offset * n22 - p2.offset * n12) / det;
  T b = (p2.offset * n11 - p1.offset * n12) / det;
  return Line<T>(p1.normal * a + p2.normal * b, d);
}

// ---------------------------------------------------------------------------
// Circle vs in-plane line: the restricted quadratic and its root structure.

enum class RootKind { TwoReal, Tangent, ComplexPair, ComplexAtCircularPoints };

template <typename T>
struct RootClassification {
  RootKind kind;
  // q(t) = a t^2 + b t + c along line.base + t * line.direction
  T a{0}, b{0}, c{0};
  T discriminant{0};
  std::vector<QuadExt> roots_exact;  // populated in exact mode (real roots)
  std::vector<double> roots;         // real roots, numeric
  int multiplicity = 1;              // of each listed root (2 for Tangent)

  int real_count() const {
    return kind == RootKind::TwoReal ? 2 : (kind == RootKind::Tangent ? 1 : 0);
  }
};

template <typename T>
RootClassification<T> circle_line_roots(const Circle<T>& c, const Line<T>& l,
                                        double tol = kTol) {
  RootClassification<T> out;
  if (l.at_infinity) {
    // the plane's line at infinity meets the circle at the circular points
    out.kind = RootKind::ComplexAtCircularPoints;
    out.discriminant = T(-1);
    return out;
  }
  const Plane<T> pl = c.plane();
  bool in_plane;
  if constexpr (std::is_same_v<T, Rat>) {
    in_plane = pl.contains(l.base) && pl.normal.dot(l.direction) == T(0);
  } else {
    in_plane = std::fabs(pl.eval(l.base)) <= tol && std::fabs(pl.normal.dot(l.direction)) <= tol;
  }
  if (!in_plane) throw LineNotInPlane();

  Vec3<T> w = l.base - c.center;
  out.a = l.direction.norm2();
  out.b = T(2) * l.direction.dot(w);
  out.c = w.norm2() - c.radius * c.radius;
  out.discriminant = out.b * out.b - T(4) * out.a * out.c;

  int ds;
  if constexpr (std::is_same_v<T, Rat>) ds = sign(out.discriminant);
  else ds = std::fabs(out.discriminant) <= tol * to_double(out.a) ? 0 : sign(out.discriminant);

  if (ds > 0) {
    out.kind = RootKind::TwoReal;
    if constexpr (std::is_same_v<T, Rat>) {
      Rat p = -out.b / (2 * out.a), q = Rat(1) / (2 * out.a);
      out.roots_exact = {QuadExt{p, -q, out.discriminant}, QuadExt{p, q, out.discriminant}};
      for (auto& r : out.roots_exact) out.roots.push_back(r.value());
    } else {
      double sq = std::sqrt(to_double(out.discriminant));
      out.roots = {(-to_double(out.b) - sq) / (2 * to_double(out.a)),
                   (-to_double(out.b) + sq) / (2 * to_double(out.a))};
    }
  } else if (ds == 0) {
    out.kind = RootKind::Tangent;
    out.multiplicity = 2;
    T r = -out.b / (T(2) * out.a);
    if constexpr (std::is_same_v<T, Rat>) out.roots_exact = {QuadExt{r}};
    out.roots = {to_double(r)};
  } else {
    out.kind = RootKind::ComplexPair;
  }
  return out;
}

template <typename T>
int coefficient_rank(const ParametrizedConic<T>& pc) {
  // Gaussian elimination on the 4x3 matrix of quadratic coefficients
  std::array<std::array<T, 3>, 4> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = pc.f[i].c[j];
  int rank = 0;
  for (int col = 0; col < 3 && rank < 4; ++col) {
    int pivot = -1;
    for (int r = rank; r < 4; ++r)
      if (m[r][col] != T(0)) { pivot = r; break; }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = 0; r < 4; ++r) {
      if (r == rank || m[r][col] == T(0)) continue;
      T f = m[r][col] / m[rank][col];
      for (int j = 0; j < 3; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

// The plane of a parametrized conic from the unique linear relation among
// f0..f3 (exact mode): coefficients (k0,k1,k2,k3) with sum k_i f_i = 0 give
// the plane k1 x + k2 y + k3 z = -k0.
inline Plane<Rat> conic_plane(const ConicQ& pc) {
  // solve the 3x4 homogeneous system: rows = quadratic coefficient slots
  std::array<std::array<Rat, 4>, 3> m{};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i) m[j][i] = pc.f[i].c[j];
  // eliminate
  std::array<int, 4> piv{-1, -1, -1, -1};
  int rank = 0;
  for (int col = 0; col < 4 && rank < 3; ++col) {
    int p = -1;
    for (int r = rank; r < 3; ++r)
      if (m[r][col] != 0) { p = r; break; }
    if (p < 0) continue;
    std::swap(m[rank], m[p]);
    for (int r = 0; r < 3; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rat f = m[r][col] / m[rank][col];
      for (int j = 0; j < 4; ++j) m[r][j] -= f * m[rank][j];
    }
    piv[rank] = col;
    ++rank;
  }
  if (rank != 3) throw std::invalid_argument("conic coefficients not rank 3");
  // free column -> kernel vector
  std::array<Rat, 4> k{0, 0, 0, 0};
  int free_col = 0;
  std::array<bool, 4> is_piv{false, false, false, false};
  for (int r = 0; r < 3; ++r) is_piv[piv[r]] = true;
  for (int c = 0; c < 4; ++c)
    if (!is_piv[c]) free_col = c;
  k[free_col] = 1;
  for (int r = 2; r >= 0; --r) {
    Rat acc = m[r][free_col];
    k[piv[r]] = -acc / m[r][piv[r]];
  }
  Vec3q n{k[1], k[2], k[3]};
  if (n.is_zero()) throw std::invalid_argument("degenerate conic plane");
  return Plane<Rat>(n, -k[0]);
}

}  // namespace bicircle
