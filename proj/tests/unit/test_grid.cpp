#include "doctest.h"

#include <cmath>
#include <numbers>

#include "json.hpp"
#include "vqcfd/grid.hpp"

using namespace vqcfd;

TEST_CASE("make_uniform_grid sizes and spacing") {
  const Grid g = make_uniform_grid(1.0, 3);
  CHECK(g.size() == 8);
  CHECK(g.spacing() == 0.125);
  const Grid two_pi = make_uniform_grid(2.0 * std::numbers::pi, 1);
  const auto pts = two_pi.points();
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == 0.0);
  CHECK(pts[1] == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  const Grid fine = make_uniform_grid(1.0, 8);
  CHECK(fine.size() == 256);
  CHECK(fine.spacing() == 1.0 / 256.0);
  for (std::size_t k = 1; k < pts.size(); ++k)
    CHECK(pts[k] > pts[k - 1]);
}

TEST_CASE("make_uniform_grid rejects bad input") {
  CHECK_THROWS_AS(make_uniform_grid(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(-1.0, 3), std::invalid_argument);
}

TEST_CASE("GridFunction invariants") {
  const Grid g(1.0, 2);
  CHECK_THROWS_AS(GridFunction(g, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(g, {1.0, 2.0, NAN, 0.0}), std::invalid_argument);
  CHECK_NOTHROW(GridFunction(g, {1.0, 2.0, 3.0, 4.0}, "velocity"));
}

TEST_CASE("analytic_hump peak and symmetry") {
  const double z = 2.0 * std::sqrt(std::numbers::pi);
  const Grid g(8.0, 6);
  const GridFunction f = analytic_hump(z, 4.0, 1.0, 1.0, g);
  // x = 4 is grid point 32
  CHECK(f[32] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t a = 1; a < 32; ++a)
    CHECK(f[32 + a] == doctest::Approx(f[32 - a]).epsilon(1e-14));
  CHECK_THROWS_AS(analytic_hump(1.0, 0.5, 0.0, 1.0, g), std::invalid_argument);
  CHECK_THROWS_AS(analytic_hump(1.0, 0.5, 1.0, 0.0, g), std::invalid_argument);
}

TEST_CASE("analytic_hump wraps to the nearest periodic image") {
  const Grid g(1.0, 6);
  const GridFunction a = analytic_hump(1.0, 0.0, 0.001, 1.0, g);
  // distance from x=0 to x=63/64 is 1/64 through the boundary
  CHECK(a[63] == doctest::Approx(a[1]).epsilon(1e-14));
}

TEST_CASE("analytic_hump mass and variance") {
  // 4 sqrt(nu t) < L/4 keeps the periodic images negligible.
  const double nu = 0.01, t = 0.2, z = 3.0;
  const Grid g(4.0, 10);
  const GridFunction f = analytic_hump(z, 2.0, nu, t, g);
  CHECK(std::abs(grid_mass(f) - z) <= 1e-6);
  const double var = grid_variance(f, 2.0);
  CHECK(var == doctest::Approx(2.0 * nu * t).epsilon(1e-3));
}

TEST_CASE("qubits_required") {
  CHECK(qubits_required(16.0, 1) == 3);
  CHECK(qubits_required(256.0, 3) == 18);
  CHECK(qubits_required(2.0, 1) == 1);
  CHECK_THROWS(qubits_required(1.0, 1));
  CHECK_THROWS(qubits_required(10.0, 4));
}

TEST_CASE("CSV and manifest round trip") {
  const Grid g(2.0, 3);
  const GridFunction f = analytic_hump(1.0, 1.0, 0.1, 0.3, g);
  const std::string csv = to_csv(f);
  CHECK(csv.rfind("x,f\n", 0) == 0);
  const GridFunction back = parse_csv(csv);
  CHECK(back.grid() == g);
  for (std::size_t k = 0; k < f.size(); ++k)
    CHECK(back[k] == f[k]);
  const auto j = nlohmann::json::parse(to_manifest_json(GridFunction(g, f.values(), "velocity")));
  CHECK(j["L"] == 2.0);
  CHECK(j["N"] == 3);
  CHECK(j["h"] == 0.25);
  CHECK_THROWS(parse_csv("x,f\n0,1\n0.5,2\n1,3\n"));
  CHECK_THROWS(parse_csv("a,b\n0,1\n0.5,2\n"));
}
