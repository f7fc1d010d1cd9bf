#include "bicircle/geom3.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace bicircle;
using bicircle::testing::random_exact_circle;
using bicircle::testing::unit_circle_xy;

namespace {
BinaryForm<Rat> B(long a, long b, long c) { return BinaryForm<Rat>({Rat(a), Rat(b), Rat(c)}); }
}  // namespace

TEST_CASE("circle parametrization reproduces the textbook quadruples") {
  // unit circle, center 0, normal (0,0,1) -> [s^2+t^2, s^2-t^2, 2st, 0]
  auto pc = circle_parametrization(unit_circle_xy());
  CHECK(pc.f[0] == B(1, 0, 1));
  CHECK(pc.f[1] == B(1, 0, -1));
  CHECK(pc.f[2] == B(0, 2, 0));
  CHECK(pc.f[3] == B(0, 0, 0));

  // unit circle, center (3,0,0), normal (0,1,0), explicit frame
  CircleQ c2({Rat(3), Rat(0), Rat(0)}, Rat(1), {Rat(0), Rat(1), Rat(0)});
  auto pc2 = circle_parametrization(c2, Vec3q{Rat(-1), Rat(0), Rat(0)},
                                    Vec3q{Rat(0), Rat(0), Rat(1)});
  CHECK(pc2.f[0] == B(1, 0, 1));
  CHECK(pc2.f[1] == B(2, 0, 4));
  CHECK(pc2.f[2] == B(0, 0, 0));
  CHECK(pc2.f[3] == B(0, 2, 0));

  // radius 2 at (0,0,5): [s^2+t^2, 2(s^2-t^2), 4st, 5(s^2+t^2)]
  CircleQ c3({Rat(0), Rat(0), Rat(5)}, Rat(2), {Rat(0), Rat(0), Rat(1)});
  auto pc3 = circle_parametrization(c3);
  CHECK(pc3.f[1] == B(2, 0, -2));
  CHECK(pc3.f[2] == B(0, 4, 0));
  CHECK(pc3.f[3] == B(5, 0, 5));
}

TEST_CASE("tangent lines of the unit circle") {
  auto pc = circle_parametrization(unit_circle_xy());

  auto l = tangent_line(pc, Rat(1), Rat(0));
  CHECK(l.base == (Vec3q{Rat(1), Rat(0), Rat(0)}));
  CHECK(l.direction.cross(Vec3q{Rat(0), Rat(1), Rat(0)}).is_zero());

  auto l2 = tangent_line(pc, Rat(0), Rat(1));
  CHECK(l2.base == (Vec3q{Rat(-1), Rat(0), Rat(0)}));
  CHECK(l2.direction.cross(Vec3q{Rat(0), Rat(1), Rat(0)}).is_zero());

  auto l3 = tangent_line(pc, Rat(1), Rat(1));
  // line through (0,1,0) with direction (1,0,0)
  CHECK(l3.direction.cross(Vec3q{Rat(1), Rat(0), Rat(0)}).is_zero());
  Rat t = (Rat(0) - l3.base.x) / l3.direction.x;
  CHECK(l3.at(t) == (Vec3q{Rat(0), Rat(1), Rat(0)}));

  CHECK_THROWS_AS(tangent_line(pc, Rat(0), Rat(0)), ZeroParameter);
}

TEST_CASE("plane intersection") {
  Plane<Rat> xy({Rat(0), Rat(0), Rat(1)}, Rat(0));
  Plane<Rat> xz({Rat(0), Rat(1), Rat(0)}, Rat(0));
  auto l = plane_intersection(xy, xz);
  CHECK(!l.at_infinity);
  CHECK(l.direction.cross(Vec3q{Rat(1), Rat(0), Rat(0)}).is_zero());
  CHECK(l.base.y == 0);
  CHECK(l.base.z == 0);

  Plane<Rat> x1({Rat(1), Rat(0), Rat(0)}, Rat(1));
  auto l2 = plane_intersection(xy, x1);
  CHECK(l2.direction.cross(Vec3q{Rat(0), Rat(1), Rat(0)}).is_zero());
  CHECK(l2.base.x == 1);
  CHECK(l2.base.z == 0);

  Plane<Rat> z1({Rat(0), Rat(0), Rat(1)}, Rat(1));
  auto l3 = plane_intersection(xy, z1);
  CHECK(l3.at_infinity);

  Plane<Rat> xy2({Rat(0), Rat(0), Rat(2)}, Rat(0));
  CHECK_THROWS_AS(plane_intersection(xy, xy2), IdenticalPlanes);
}

TEST_CASE("circle line roots") {
  auto c = unit_circle_xy();
  Line<Rat> xaxis({Rat(0), Rat(0), Rat(0)}, {Rat(1), Rat(0), Rat(0)});
  auto rc = circle_line_roots(c, xaxis);
  CHECK(rc.kind == RootKind::TwoReal);
  REQUIRE(rc.roots_exact.size() == 2);
  CHECK(rc.roots_exact[0].is_rational());
  CHECK(rc.roots_exact[0].p == Rat(-1));
  CHECK(rc.roots_exact[1].p == Rat(1));

  Line<Rat> y1({Rat(0), Rat(1), Rat(0)}, {Rat(1), Rat(0), Rat(0)});
  auto rt = circle_line_roots(c, y1);
  CHECK(rt.kind == RootKind::Tangent);
  CHECK(rt.multiplicity == 2);
  CHECK(rt.roots_exact[0].p == Rat(0));

  Line<Rat> y2({Rat(0), Rat(2), Rat(0)}, {Rat(1), Rat(0), Rat(0)});
  auto rx = circle_line_roots(c, y2);
  CHECK(rx.kind == RootKind::ComplexPair);
  CHECK(sign(rx.discriminant) < 0);

  Line<Rat> off({Rat(0), Rat(0), Rat(1)}, {Rat(1), Rat(0), Rat(0)});
  CHECK_THROWS_AS(circle_line_roots(c, off), LineNotInPlane);

  // root count + multiplicity totals 2 over C in each case
  CHECK(rc.real_count() * rc.multiplicity + 0 == 2);
  CHECK(rt.real_count() * rt.multiplicity == 2);
  CHECK(rx.real_count() == 0);
}

TEST_CASE("random rational circles: exact incidence and frames") {
  std::mt19937_64 rng(2024);
  int circles = 0;
  while (circles < 1000) {
    CircleQ c = random_exact_circle(rng);
    ++circles;
    auto pc = circle_parametrization(c);
    CHECK(coefficient_rank(pc) == 3);

    // the linear relation among the four forms cuts out the plane of c
    auto pl = conic_plane(pc);
    CHECK(pl.contains(c.center + c.normal.cross(pl.normal)));  // sanity: evaluates
    // proportional to the circle's own plane
    auto cp = c.plane();
    CHECK(pl.normal.cross(cp.normal).is_zero());
    Rat k = (cp.normal.x != 0)   ? pl.normal.x / cp.normal.x
            : (cp.normal.y != 0) ? pl.normal.y / cp.normal.y
                                 : pl.normal.z / cp.normal.z;
    CHECK(pl.offset == k * cp.offset);

    for (int j = 0; j < 100; ++j) {
      Rat s = bicircle::testing::random_rat(rng, 6, 3);
      Rat t = bicircle::testing::random_rat(rng, 6, 3);
      if (s == 0 && t == 0) t = 1;
      Point3<Rat> p = pc.point(s, t);
      // exactly on the circle: |p - center|^2 == r^2 and on the plane
      CHECK((p - c.center).norm2() == c.radius * c.radius);
      CHECK(c.normal.dot(p - c.center) == 0);
      // tangent direction orthogonal to the radius vector
      auto tl = tangent_line(pc, s, t);
      CHECK(tl.direction.dot(p - c.center) == 0);
    }
  }
}
