#include "bicircle/mesh.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace bicircle;
using namespace bicircle::testing;

TEST_CASE("oloid mesh area converges to the sphere area") {
  auto [c1, c2] = fixture_oloid();
  auto mesh = boundary_mesh(c1, c2, 1024);
  double area = mesh.area();
  CHECK(std::fabs(area - 4 * M_PI) < 0.005 * 4 * M_PI);
  // no planar faces for the oloid
  for (const auto& p : mesh.patches) CHECK(p.find("planar") == std::string::npos);
}

TEST_CASE("empty type meshes closed") {
  CircleQ e1({Rat(0), Rat(2), Rat(0)}, Rat(1), {Rat(0), Rat(0), Rat(1)});
  CircleQ e2({Rat(3), Rat(0), Rat(2)}, Rat(1), {Rat(0), Rat(1), Rat(0)});
  auto mesh = boundary_mesh(e1, e2, 48);
  int discs = 0, strips = 0;
  for (const auto& p : mesh.patches) {
    if (p.find("planar") != std::string::npos) ++discs;
    else ++strips;
  }
  CHECK(discs == 2);
  CHECK(strips == 1);
  CHECK(mesh.euler_characteristic(1e-9) == 2);
}

TEST_CASE("mesh vertices sit on the hull boundary") {
  auto [c1, c2] = fixture_unlinked();
  auto mesh = boundary_mesh(c1, c2, 96);
  CircleD d1 = to_d(c1), d2 = to_d(c2);
  int checked = 0;
  for (std::size_t i = 0; i < mesh.vertices.size(); i += 7) {
    auto m = membership(d1, d2, mesh.vertices[i], 1e-6);
    CHECK(m.verdict == Verdict::Boundary);
    ++checked;
  }
  CHECK(checked > 20);
}
