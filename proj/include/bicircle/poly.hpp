#pragma once

// Small polynomial kernel for binary forms of low degree: exact gcd,
// squarefree decomposition, Sturm root counting, Sylvester resultants, and
// numeric projective roots. Everything exact runs over Rat; numeric roots are
// double precision with Newton polishing.

#include "bicircle/scalar.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <functional>
#include <vector>

namespace bicircle {

// ---------------------------------------------------------------------------
// Univariate polynomial, c[i] * x^i. Trailing zero coefficients are trimmed.

template <typename T>
struct Poly {
  std::vector<T> c;

  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
  static Poly constant(T v) { return Poly(std::vector<T>{std::move(v)}); }

  void trim() {
    while (!c.empty() && c.back() == T(0)) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return (int)c.size() - 1; }  // -1 for zero poly
  const T& lead() const { return c.back(); }

  T eval(const T& x) const {
    T acc(0);
    for (int i = (int)c.size() - 1; i >= 0; --i) acc = acc * x + c[i];
    return acc;
  }
  double eval_d(double x) const {
    double acc = 0;
    for (int i = (int)c.size() - 1; i >= 0; --i) acc = acc * x + to_double(c[i]);
    return acc;
  }

  Poly derivative() const {
    if (c.size() <= 1) return Poly();
    std::vector<T> d(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * T((long)i);
    return Poly(std::move(d));
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& v : r.c) v = -v;
    return r;
  }
  Poly operator+(const Poly& o) const {
    std::vector<T> r(std::max(c.size(), o.c.size()), T(0));
    for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
    return Poly(std::move(r));
  }
  Poly operator-(const Poly& o) const { return *this + (-o); }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<T> r(c.size() + o.c.size() - 1, T(0));
    for (size_t i = 0; i < c.size(); ++i)
      for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
    return Poly(std::move(r));
  }
  Poly operator*(const T& s) const {
    Poly r = *this;
    for (auto& v : r.c) v = v * s;
    r.trim();
    return r;
  }
};

// Division with remainder over a field (T = Rat or double).
template <typename T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& a, const Poly<T>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  Poly<T> q, r = a;
  if (a.degree() < b.degree()) return {q, r};
  q.c.assign(a.degree() - b.degree() + 1, T(0));
  while (!r.is_zero() && r.degree() >= b.degree()) {
    T f = r.lead() / b.lead();
    int shift = r.degree() - b.degree();
    q.c[shift] = f;
    for (int i = 0; i <= b.degree(); ++i) r.c[i + shift] -= f * b.c[i];
    r.trim();
  }
  q.trim();
  return {q, r};
}

template <typename T>
Poly<T> monic(const Poly<T>& p) {
  if (p.is_zero()) return p;
  Poly<T> r = p;
  T l = p.lead();
  for (auto& v : r.c) v = v / l;
  return r;
}

// Monic Euclidean gcd; exact over Rat.
inline Poly<Rat> gcd(Poly<Rat> a, Poly<Rat> b) {
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b);
    (void)q;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

inline Poly<Rat> exact_div(const Poly<Rat>& a, const Poly<Rat>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
  return q;
}

// Yun's squarefree decomposition: p = lead * prod factors[i].first^(factors[i].second),
// factors squarefree, pairwise coprime, monic.
inline std::vector<std::pair<Poly<Rat>, int>> squarefree_decomposition(const Poly<Rat>& p) {
  std::vector<std::pair<Poly<Rat>, int>> out;
  if (p.degree() < 1) return out;
  Poly<Rat> a = monic(p);
  Poly<Rat> g = gcd(a, a.derivative());
  if (g.degree() == 0) {
    out.push_back({a, 1});
    return out;
  }
  Poly<Rat> w = exact_div(a, g);
  Poly<Rat> y = exact_div(a.derivative(), g);
  Poly<Rat> z = y - w.derivative();
  int i = 1;
  while (!z.is_zero()) {
    Poly<Rat> f = gcd(w, z);
    if (f.degree() > 0) out.push_back({f, i});
    w = exact_div(w, f);
    y = exact_div(z, f);
    z = y - w.derivative();
    ++i;
  }
  if (w.degree() > 0) out.push_back({w, i});
  return out;
}

inline Poly<Rat> squarefree_part(const Poly<Rat>& p) {
  if (p.degree() < 1) return monic(p);
  Poly<Rat> g = gcd(monic(p), p.derivative());
  return g.degree() == 0 ? monic(p) : exact_div(monic(p), g);
}

// ---------------------------------------------------------------------------
// Sturm sequences: exact real root counting over Rat.

inline std::vector<Poly<Rat>> sturm_chain(const Poly<Rat>& p) {
  std::vector<Poly<Rat>> chain;
  chain.push_back(p);
  chain.push_back(p.derivative());
  while (!chain.back().is_zero()) {
    auto [q, r] = divmod(chain[chain.size() - 2], chain.back());
    (void)q;
    chain.push_back(-r);
  }
  chain.pop_back();
  return chain;
}

inline int sign_changes_at(const std::vector<Poly<Rat>>& chain, const Rat& x) {
  int changes = 0, prev = 0;
  for (const auto& p : chain) {
    int s = sign(p.eval(x));
    if (s != 0) {
      if (prev != 0 && s != prev) ++changes;
      prev = s;
    }
  }
  return changes;
}

inline int sign_changes_at_inf(const std::vector<Poly<Rat>>& chain, int dir) {
  int changes = 0, prev = 0;
  for (const auto& p : chain) {
    if (p.is_zero()) continue;
    int s = sign(p.lead());
    if (dir < 0 && (p.degree() % 2 == 1)) s = -s;
    if (s != 0) {
      if (prev != 0 && s != prev) ++changes;
      prev = s;
    }
  }
  return changes;
}

// Number of distinct real roots in (a, b]; pass nullopt for +/- infinity.
inline int count_real_roots(const Poly<Rat>& p, std::optional<Rat> a = std::nullopt,
                            std::optional<Rat> b = std::nullopt) {
  if (p.degree() < 1) return 0;
  auto chain = sturm_chain(squarefree_part(p));
  int va = a ? sign_changes_at(chain, *a) : sign_changes_at_inf(chain, -1);
  int vb = b ? sign_changes_at(chain, *b) : sign_changes_at_inf(chain, +1);
  return va - vb;
}

// Isolating intervals (a_i, b_i] for the distinct real roots of p.
inline std::vector<std::pair<Rat, Rat>> isolate_real_roots(const Poly<Rat>& p) {
  std::vector<std::pair<Rat, Rat>> out;
  Poly<Rat> sf = squarefree_part(p);
  if (sf.degree() < 1) return out;
  auto chain = sturm_chain(sf);
  // Cauchy bound, padded so the bracket is strict
  Rat bound(2);
  for (int i = 0; i < sf.degree(); ++i) {
    Rat q = abs_val(sf.c[i] / sf.lead());
    if (q + 2 > bound) bound = q + 2;
  }
  std::function<void(Rat, Rat, int)> rec = [&](Rat lo, Rat hi, int nroots) {
    if (nroots == 0) return;
    if (nroots == 1) {
      out.push_back({lo, hi});
      return;
    }
    Rat mid = (lo + hi) / 2;
    int vlo = sign_changes_at(chain, lo), vmid = sign_changes_at(chain, mid);
    rec(lo, mid, vlo - vmid);
    rec(mid, hi, vmid - sign_changes_at(chain, hi));
  };
  int total = sign_changes_at(chain, -bound) - sign_changes_at(chain, bound);
  rec(-bound, bound, total);
  std::sort(out.begin(), out.end());
  return out;
}

// Bisection refinement of an isolating interval to double precision.
inline double refine_root(const Poly<Rat>& sf, Rat lo, Rat hi) {
  int slo = sign(sf.eval(lo));
  if (slo == 0) return to_double(lo);
  for (int i = 0; i < 200 && to_double(hi - lo) > 1e-30; ++i) {
    Rat mid = (lo + hi) / 2;
    int sm = sign(sf.eval(mid));
    if (sm == 0) return to_double(mid);
    if (sm == slo) lo = mid;
    else hi = mid;
    if (to_double(hi) - to_double(lo) < 1e-15 * (1 + std::fabs(to_double(lo)))) break;
  }
  return 0.5 * (to_double(lo) + to_double(hi));
}

// ---------------------------------------------------------------------------
// Numeric roots (complex) via companion matrix, Newton-polished.

inline std::vector<std::complex<double>> complex_roots(const Poly<Rat>& p) {
  std::vector<std::complex<double>> roots;
  int n = p.degree();
  if (n < 1) return roots;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  double lead = to_double(p.lead());
  for (int i = 0; i < n; ++i) {
    C(i, n - 1) = -to_double(p.c[i]) / lead;
    if (i > 0) C(i, i - 1) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    // Newton polish on p/gcd-free value
    for (int it = 0; it < 8; ++it) {
      std::complex<double> f(0), df(0);
      for (int k = n; k >= 0; --k) {
        df = df * z + (k > 0 ? f : std::complex<double>(0));
        f = f * z + to_double(p.c[k]);
      }
      if (std::abs(df) < 1e-300) break;
      std::complex<double> step = f / df;
      z -= step;
      if (std::abs(step) < 1e-15 * (1 + std::abs(z))) break;
    }
    roots.push_back(z);
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Binary form of degree d in (s, t): c[i] * s^(d-i) * t^i.

template <typename T>
struct BinaryForm {
  std::vector<T> c;  // size d+1; may be all zero (the zero form of degree d)

  BinaryForm() = default;
  explicit BinaryForm(std::vector<T> coeffs) : c(std::move(coeffs)) {}
  static BinaryForm zero(int degree) { return BinaryForm(std::vector<T>(degree + 1, T(0))); }

  int degree() const { return (int)c.size() - 1; }
  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](const T& v) { return v == T(0); });
  }

  T eval(const T& s, const T& t) const {
    // Horner in two stages: sum c[i] s^(d-i) t^i
    int d = degree();
    T acc(0);
    for (int i = 0; i <= d; ++i) {
      T term = c[i];
      for (int k = 0; k < d - i; ++k) term *= s;
      for (int k = 0; k < i; ++k) term *= t;
      acc += term;
    }
    return acc;
  }
  double eval_d(double s, double t) const {
    int d = degree();
    double acc = 0;
    for (int i = 0; i <= d; ++i) {
      double term = to_double(c[i]);
      for (int k = 0; k < d - i; ++k) term *= s;
      for (int k = 0; k < i; ++k) term *= t;
      acc += term;
    }
    return acc;
  }
  std::complex<double> eval_c(std::complex<double> s, std::complex<double> t) const {
    int d = degree();
    std::complex<double> acc(0);
    for (int i = 0; i <= d; ++i) {
      std::complex<double> term(to_double(c[i]), 0);
      for (int k = 0; k < d - i; ++k) term *= s;
      for (int k = 0; k < i; ++k) term *= t;
      acc += term;
    }
    return acc;
  }

  BinaryForm ds() const {  // partial derivative in s
    int d = degree();
    if (d < 1) return zero(0);
    std::vector<T> r(d, T(0));
    for (int i = 0; i < d; ++i) r[i] = c[i] * T(d - i);
    return BinaryForm(std::move(r));
  }
  BinaryForm dt() const {
    int d = degree();
    if (d < 1) return zero(0);
    std::vector<T> r(d, T(0));
    for (int i = 1; i <= d; ++i) r[i - 1] = c[i] * T(i);
    return BinaryForm(std::move(r));
  }

  BinaryForm operator*(const BinaryForm& o) const {
    std::vector<T> r(degree() + o.degree() + 1, T(0));
    for (size_t i = 0; i < c.size(); ++i)
      for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
    return BinaryForm(std::move(r));
  }
  BinaryForm operator*(const T& k) const {
    BinaryForm r = *this;
    for (auto& v : r.c) v = v * k;
    return r;
  }
  BinaryForm operator+(const BinaryForm& o) const {
    if (degree() != o.degree()) throw std::invalid_argument("degree mismatch");
    BinaryForm r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
    return r;
  }
  BinaryForm operator-(const BinaryForm& o) const {
    if (degree() != o.degree()) throw std::invalid_argument("degree mismatch");
    BinaryForm r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
    return r;
  }
  BinaryForm operator-() const {
    BinaryForm r = *this;
    for (auto& v : r.c) v = -v;
    return r;
  }
  bool operator==(const BinaryForm& o) const { return c == o.c; }

  // Dehomogenization p(x) = f(1, x); roots at t/s = x. The form also has a
  // root at (0:1) iff c[0] == 0 (s | f counts as roots at "s = 0").
  Poly<T> dehomogenize() const { return Poly<T>(c); }
};

// f = s^a * t^b * core, core with nonzero first and last coefficient.
inline std::tuple<int, int, BinaryForm<Rat>> split_st_powers(const BinaryForm<Rat>& f) {
  if (f.is_zero()) throw std::invalid_argument("zero form");
  int d = f.degree();
  int b = 0;
  while (f.c[b] == 0) ++b;  // s^(d-i) t^i: leading zeros of c mean t | f? careful below
  int a = 0;
  while (f.c[d - a] == 0) ++a;
  // c[i] multiplies s^(d-i) t^i. c[0..b-1] == 0 means lowest t-power present is b -> t^b | f.
  // c[d-a+1..d] == 0 means highest t-power is d-a, i.e. s^a | f.
  std::vector<Rat> core(f.c.begin() + b, f.c.begin() + (d - a) + 1);
  return {a, b, BinaryForm<Rat>(std::move(core))};
}

// gcd of binary forms, monic-normalized core times common s,t powers.
inline BinaryForm<Rat> gcd(const BinaryForm<Rat>& f, const BinaryForm<Rat>& g) {
  if (f.is_zero() || g.is_zero()) throw std::invalid_argument("gcd with zero form");
  auto [af, bf, cf] = split_st_powers(f);
  auto [ag, bg, cg] = split_st_powers(g);
  int a = std::min(af, ag), b = std::min(bf, bg);
  Poly<Rat> pg = gcd(cf.dehomogenize(), cg.dehomogenize());
  // re-homogenize pg to degree pg.degree() and multiply by s^a t^b
  int dg = pg.degree();
  std::vector<Rat> coeffs(a + b + dg + 1, Rat(0));
  for (int i = 0; i <= dg; ++i) coeffs[b + i] = pg.c[i];
  // note: core dehomog p(x) = sum core[i] x^i with x = t/s; homogeneous deg dg
  return BinaryForm<Rat>(std::move(coeffs));
}

inline BinaryForm<Rat> exact_div(const BinaryForm<Rat>& f, const BinaryForm<Rat>& g) {
  auto [af, bf, cf] = split_st_powers(f);
  auto [ag, bg, cg] = split_st_powers(g);
  if (ag > af || bg > bf) throw std::domain_error("inexact form division");
  Poly<Rat> q = exact_div(cf.dehomogenize(), cg.dehomogenize());
  int dq = (af - ag) + (bf - bg) + q.degree();
  std::vector<Rat> coeffs(dq + 1, Rat(0));
  for (int i = 0; i <= q.degree(); ++i) coeffs[(bf - bg) + i] = q.c[i];
  return BinaryForm<Rat>(std::move(coeffs));
}

// Projective root of a binary form.
struct ProjRoot {
  std::complex<double> s{1, 0}, t{0, 0};
  int multiplicity = 1;
  bool real = true;

  double ratio() const { return (t / s).real(); }  // t/s for finite real roots
  bool at_infinity(double tol = 1e-12) const { return std::abs(s) < tol; }
};

// All projective roots of f over C, with exact multiplicity structure
// (squarefree decomposition over Q decides multiplicities).
inline std::vector<ProjRoot> projective_roots(const BinaryForm<Rat>& f) {
  std::vector<ProjRoot> out;
  if (f.is_zero()) throw std::invalid_argument("zero form has no root set");
  auto [a, b, core] = split_st_powers(f);
  if (a > 0) out.push_back({{0, 0}, {1, 0}, a, true});  // s = 0, i.e. (0:1)
  if (b > 0) out.push_back({{1, 0}, {0, 0}, b, true});  // t = 0, i.e. (1:0)
  Poly<Rat> p = core.dehomogenize();
  for (auto& [factor, mult] : squarefree_decomposition(p)) {
    // real roots exactly counted; numeric values from isolation + polish
    auto ivals = isolate_real_roots(factor);
    std::vector<double> reals;
    for (auto& [lo, hi] : ivals) reals.push_back(refine_root(factor, lo, hi));
    for (double r : reals) out.push_back({{1, 0}, {r, 0}, mult, true});
    // complex roots: numeric; the exact real count decides how many there are,
    // so take the candidates of largest |imag| rather than using a cutoff
    int ncplx = factor.degree() - (int)reals.size();
    if (ncplx > 0) {
      auto all = complex_roots(factor);
      std::sort(all.begin(), all.end(), [](auto u, auto v) {
        return std::abs(u.imag()) > std::abs(v.imag());
      });
      all.resize(ncplx);
      std::sort(all.begin(), all.end(), [](auto u, auto v) {
        return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
      });
      for (auto z : all) out.push_back({{1, 0}, z, mult, false});
    }
  }
  return out;
}

// Multiplicity pattern of a form, sorted descending, over C (projective).
inline std::vector<int> multiplicity_pattern(const BinaryForm<Rat>& f) {
  std::vector<int> pat;
  auto [a, b, core] = split_st_powers(f);
  if (a > 0) pat.push_back(a);
  if (b > 0) pat.push_back(b);
  Poly<Rat> p = core.dehomogenize();
  for (auto& [factor, mult] : squarefree_decomposition(p))
    for (int i = 0; i < factor.degree(); ++i) pat.push_back(mult);
  std::sort(pat.rbegin(), pat.rend());
  return pat;
}

// Determinant over a commutative ring by cofactor expansion. Assumes all
// entries are homogeneous of one common degree so that sums stay well formed.
template <typename R>
R determinant(const std::vector<std::vector<R>>& m) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  std::optional<R> det;
  int sgn = 1;
  for (size_t k = 0; k < n; ++k) {
    std::vector<std::vector<R>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<R> row;
      for (size_t j = 0; j < n; ++j)
        if (j != k) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    R term = m[0][k] * determinant(minor);
    if (sgn < 0) term = -term;
    det = det ? (*det + term) : term;
    sgn = -sgn;
  }
  return *det;
}

}  // namespace bicircle
