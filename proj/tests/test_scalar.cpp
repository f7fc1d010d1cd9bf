#include "bicircle/scalar.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace bicircle;

TEST_CASE("exact square roots") {
  CHECK(*exact_sqrt(Int(0)) == 0);
  CHECK(*exact_sqrt(Int(1)) == 1);
  CHECK(*exact_sqrt(Int(144)) == 12);
  CHECK(!exact_sqrt(Int(2)).has_value());
  CHECK(!exact_sqrt(Int(-4)).has_value());
  CHECK(*exact_sqrt(Rat(9, 25)) == Rat(3, 5));
  CHECK(!exact_sqrt(Rat(8, 9)).has_value());

  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Int n = Int(rng() % 100000);
    Int sq = n * n;
    CHECK(*exact_sqrt(sq) == n);
    if (n > 1) CHECK(!exact_sqrt(sq + 1).has_value() == (sq + 1 != (n + 1) * (n + 1)));
  }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rat(3, 4));
  CHECK(parse_rational("-12") == Rat(-12));
  CHECK(parse_rational("0.8") == Rat(4, 5));
  CHECK(parse_rational("2.5e-3") == Rat(1, 400));
  CHECK(parse_rational("-0.125") == Rat(-1, 8));
  CHECK(parse_rational("1e3") == Rat(1000));
}

TEST_CASE("rational snapping recovers simple fractions") {
  CHECK(snap_rational(0.5) == Rat(1, 2));
  CHECK(snap_rational(-0.75) == Rat(-3, 4));
  CHECK(snap_rational(to_double(Rat(4, 5))) == Rat(4, 5));
  CHECK(snap_rational(3.0) == Rat(3));
  CHECK(snap_rational(to_double(Rat(22, 7))) == Rat(22, 7));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Rat q(Int((long)(rng() % 2001)) - 1000, Int((long)(rng() % 997) + 1));
    CHECK(snap_rational(to_double(q)) == q);
  }
}

TEST_CASE("quadratic surd signs and comparisons") {
  // sqrt(2) - 1 > 0, 1 - sqrt(2) < 0
  CHECK(sign(QuadExt{Rat(-1), Rat(1), Rat(2)}) == 1);
  CHECK(sign(QuadExt{Rat(1), Rat(-1), Rat(2)}) == -1);
  CHECK(sign(QuadExt{Rat(3), Rat(-1), Rat(9)}) == 0);  // 3 - sqrt(9)

  // sqrt(3) vs sqrt(5/3): 1.732 > 1.291
  QuadExt a{Rat(0), Rat(1), Rat(3)}, b{Rat(0), Rat(1), Rat(5, 3)};
  CHECK(compare(a, b) == 1);
  CHECK(compare(b, a) == -1);
  CHECK(compare(a, a) == 0);

  // 1 + sqrt(2) vs 2 + sqrt(1/2): 2.414... vs 2.707...
  CHECK(compare(QuadExt{Rat(1), Rat(1), Rat(2)}, QuadExt{Rat(2), Rat(1), Rat(1, 2)}) == -1);

  // equal via different radicands: sqrt(8) == 2 sqrt(2)
  CHECK(compare(QuadExt{Rat(0), Rat(1), Rat(8)}, QuadExt{Rat(0), Rat(2), Rat(2)}) == 0);

  std::mt19937_64 rng(3);
  auto rnd = [&](int lo, int hi) { return Rat((long)(rng() % (hi - lo + 1)) + lo); };
  for (int i = 0; i < 2000; ++i) {
    QuadExt x{rnd(-6, 6), rnd(-4, 4), abs_val(rnd(0, 9))};
    QuadExt y{rnd(-6, 6), rnd(-4, 4), abs_val(rnd(0, 9))};
    int cmp = compare(x, y);
    double dx = x.value(), dy = y.value();
    if (std::fabs(dx - dy) > 1e-9) CHECK(cmp == (dx < dy ? -1 : 1));
    CHECK(compare(y, x) == -cmp);
  }
}
