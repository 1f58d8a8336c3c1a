#include "doctest.h"

#include <cmath>

#include "vqcfd/optimizer.hpp"

using namespace vqcfd;

namespace {

double rosenbrock(std::span<const double> x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

std::vector<double> rosenbrock_grad(std::span<const double> x) {
  return {-400.0 * x[0] * (x[1] - x[0] * x[0]) - 2.0 * (1.0 - x[0]),
          200.0 * (x[1] - x[0] * x[0])};
}

} // namespace

TEST_CASE("every method minimizes a convex quadratic") {
  const Objective f = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0);
  };
  const GradientFn g = [](std::span<const double> x) {
    return std::vector<double>{2.0 * (x[0] - 1.0), 8.0 * (x[1] + 2.0)};
  };
  for (auto kind : {OptimizerKind::gradient_descent, OptimizerKind::lbfgs, OptimizerKind::compass}) {
    OptimizerOptions o;
    o.kind = kind;
    o.max_iters = 20000;
    const auto r = minimize(f, kind == OptimizerKind::compass ? GradientFn{} : g, {5.0, 5.0}, o);
    CAPTURE(to_string(kind));
    CHECK(std::abs(r.x[0] - 1.0) <= 1e-5);
    CHECK(std::abs(r.x[1] + 2.0) <= 1e-5);
    CHECK(r.value <= 1e-10);
  }
}

TEST_CASE("L-BFGS solves Rosenbrock") {
  OptimizerOptions o;
  o.kind = OptimizerKind::lbfgs;
  const auto r = minimize(rosenbrock, rosenbrock_grad, {-1.2, 1.0}, o);
  CHECK(r.value <= 1e-12);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("iteration callback sees non-increasing values") {
  OptimizerOptions o;
  o.max_iters = 50;
  std::vector<double> seen;
  minimize(rosenbrock, rosenbrock_grad, {0.0, 0.0}, o,
           [&](int, std::span<const double>, double v) { seen.push_back(v); });
  REQUIRE(!seen.empty());
  for (std::size_t k = 1; k < seen.size(); ++k)
    CHECK(seen[k] <= seen[k - 1]);
}

TEST_CASE("names and errors") {
  CHECK(parse_optimizer("lbfgs") == OptimizerKind::lbfgs);
  CHECK(to_string(OptimizerKind::compass) == "compass");
  CHECK_THROWS(parse_optimizer("adam"));
  OptimizerOptions o;
  CHECK_THROWS(minimize(rosenbrock, {}, {0.0, 0.0}, o));
  const Objective nan_f = [](std::span<const double>) { return NAN; };
  o.kind = OptimizerKind::compass;
  CHECK_THROWS(minimize(nan_f, {}, {0.0}, o));
}
