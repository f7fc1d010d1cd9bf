#pragma once

// Scalar layer: exact rationals, perfect-square tests, quadratic surds with
// exact sign computation, and rational snapping for float input.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bicircle {

// expression templates off: arithmetic yields values, which generic
// polynomial code relies on
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                          boost::multiprecision::et_off>;

// Default absolute tolerance for float-mode comparisons.
inline constexpr double kTol = 1e-9;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline int sign(const Rat& q) { return q.sign(); }
inline int sign(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline Rat abs_val(const Rat& q) { return q < 0 ? Rat(-q) : q; }
inline double abs_val(double x) { return std::fabs(x); }

// Integer square root (floor). n must be nonnegative.
inline Int isqrt_floor(const Int& n) {
  if (n < 0) throw std::invalid_argument("isqrt of negative");
  if (n == 0) return 0;
  Int x = Int(1) << (unsigned)((msb(n) / 2) + 1);
  for (;;) {
    Int y = (x + n / x) / 2;
    if (y >= x) return x;
    x = y;
  }
}

inline std::optional<Int> exact_sqrt(const Int& n) {
  if (n < 0) return std::nullopt;
  Int r = isqrt_floor(n);
  if (r * r == n) return r;
  return std::nullopt;
}

inline std::optional<Rat> exact_sqrt(const Rat& q) {
  if (q < 0) return std::nullopt;
  auto n = exact_sqrt(numerator(q));
  if (!n) return std::nullopt;
  auto d = exact_sqrt(denominator(q));
  if (!d) return std::nullopt;
  return Rat(*n, *d);
}

inline bool is_square(const Rat& q) { return exact_sqrt(q).has_value(); }

// Parses "3/4", "-12", "0.8", "2.5e-3" into an exact rational.
inline Rat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rat(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
  }
  std::string mant = text;
  long exp10 = 0;
  auto e = text.find_first_of("eE");
  if (e != std::string::npos) {
    mant = text.substr(0, e);
    exp10 = std::stol(text.substr(e + 1));
  }
  std::string digits;
  bool neg = false;
  long frac_digits = 0;
  bool seen_dot = false;
  for (char ch : mant) {
    if (ch == '-') neg = true;
    else if (ch == '+') continue;
    else if (ch == '.') seen_dot = true;
    else if (ch >= '0' && ch <= '9') {
      digits += ch;
      if (seen_dot) ++frac_digits;
    } else {
      throw std::invalid_argument("bad rational literal: " + text);
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad rational literal: " + text);
  // strip leading zeros; a bare "0" prefix would switch Int() to octal
  auto nz = digits.find_first_not_of('0');
  digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
  Rat r{Int(digits)};
  if (neg) r = -r;
  long net = exp10 - frac_digits;
  Int p10 = 1;
  for (long i = 0; i < (net < 0 ? -net : net); ++i) p10 *= 10;
  return net >= 0 ? Rat(r * p10) : Rat(r / Rat(p10));
}

// Exact rational from a double (binary expansion, no rounding).
inline Rat rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("nonfinite double");
  int exp = 0;
  double m = std::frexp(x, &exp);
  Int num = 0;
  for (int i = 0; i < 64 && m != 0.0; ++i) {
    m *= 2;
    double ip;
    m = std::modf(m, &ip);
    num = num * 2 + Int((long)ip);
    --exp;
  }
  Rat r(num);
  if (exp >= 0) r *= Rat(Int(1) << (unsigned)exp);
  else r /= Rat(Int(1) << (unsigned)(-exp));
  return r;
}

// Best rational approximation of x within absolute tolerance tol (continued
// fraction convergents). Keeps denominators small so topological decisions on
// snapped input match the intended exact values.
inline Rat snap_rational(double x, double tol = kTol) {
  if (std::fabs(x) < tol) return Rat(0);
  if (x < 0) return -snap_rational(-x, tol);
  double whole = std::floor(x);
  Int a((long long)whole);
  double frac = x - whole;
  if (frac <= tol) return Rat(a);
  if (frac >= 1.0 - tol) return Rat(a + 1);
  // convergents h_n = a_n h_{n-1} + h_{n-2}; start h_{-1}=1, h_{-2}=0
  Int h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  double y = frac;
  Rat best(0);
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(y);
    Int ai((long long)fl);
    Int hn = ai * h1 + h2, kn = ai * k1 + k2;
    h2 = h1; k2 = k1; h1 = hn; k1 = kn;
    if (kn > 0) {
      best = Rat(hn, kn);
      if (std::fabs(to_double(best) - frac) <= tol) break;
    }
    double rem = y - fl;
    if (rem < 1e-18) break;
    y = 1.0 / rem;
  }
  return Rat(a) + best;
}

// ---------------------------------------------------------------------------
// Quadratic surd p + q*sqrt(D) with rational p, q and D >= 0.
// Supports the exact sign and comparison tests needed to order circle/line
// intersection points along a line without floating point.

struct QuadExt {
  Rat p{0}, q{0}, D{0};

  QuadExt() = default;
  QuadExt(Rat p_, Rat q_, Rat D_) : p(std::move(p_)), q(std::move(q_)), D(std::move(D_)) {
    if (D < 0) throw std::invalid_argument("QuadExt with negative radicand");
    if (auto r = exact_sqrt(D)) {  // fold rational radicals
      p += q * *r;
      q = 0;
    }
    if (D == 0 || q == 0) { q = 0; D = 0; }
  }
  explicit QuadExt(Rat v) : p(std::move(v)) {}

  bool is_rational() const { return q == 0; }
  double value() const { return to_double(p) + to_double(q) * std::sqrt(to_double(D)); }
};

// sign of p + q*sqrt(D)
inline int sign(const QuadExt& x) {
  if (x.q == 0) return sign(x.p);
  if (x.p == 0) return sign(x.q);
  int sp = sign(x.p), sq = sign(x.q);
  if (sp == sq) return sp;
  Rat lhs = x.p * x.p, rhs = x.q * x.q * x.D;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sp : sq;
}

namespace detail {
// sign of alpha + beta*sqrt(D1) + gamma*sqrt(D2), D1 != D2
inline int sign_two_radicals(const Rat& alpha, const Rat& beta, const Rat& D1,
                             const Rat& gamma, const Rat& D2) {
  int sT;  // sign of T = beta*sqrt(D1) + gamma*sqrt(D2)
  if (beta == 0 && gamma == 0) sT = 0;
  else if (beta == 0) sT = sign(gamma);
  else if (gamma == 0) sT = sign(beta);
  else if (sign(beta) == sign(gamma)) sT = sign(beta);
  else {
    Rat lhs = beta * beta * D1, rhs = gamma * gamma * D2;
    sT = (lhs == rhs) ? 0 : (lhs > rhs ? sign(beta) : sign(gamma));
  }
  if (alpha == 0) return sT;
  if (sT == 0) return sign(alpha);
  if (sign(alpha) == sT) return sT;
  // |T| vs |alpha|: T^2 = beta^2 D1 + gamma^2 D2 + 2 beta gamma sqrt(D1 D2)
  QuadExt diff{beta * beta * D1 + gamma * gamma * D2 - alpha * alpha, 2 * beta * gamma, D1 * D2};
  int s2 = sign(diff);
  if (s2 == 0) return 0;
  return s2 > 0 ? sT : sign(alpha);
}
}  // namespace detail

inline int compare(const QuadExt& a, const QuadExt& b) {
  if (a.q == 0) return sign(QuadExt{a.p - b.p, -b.q, b.D});
  if (b.q == 0) return sign(QuadExt{a.p - b.p, a.q, a.D});
  if (a.D == b.D) return sign(QuadExt{a.p - b.p, a.q - b.q, a.D});
  return detail::sign_two_radicals(a.p - b.p, a.q, a.D, -b.q, b.D);
}

inline bool operator<(const QuadExt& a, const QuadExt& b) { return compare(a, b) < 0; }
inline bool operator==(const QuadExt& a, const QuadExt& b) { return compare(a, b) == 0; }

}  // namespace bicircle
