#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vqcfd/ansatz.hpp"
#include "vqcfd/optimizer.hpp"

using namespace vqcfd;

namespace {

// Dense U(theta) by multiplying Kronecker-expanded gate matrices.
Eigen::VectorXcd dense_prepare(const AnsatzCircuit &c, std::span<const double> th) {
  const int n = c.n_qubits();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  v(0) = 1.0;
  for (const Gate &g : c.gates(th))
    v = oracle::gate_matrix(g, n) * v;
  return v;
}

} // namespace

TEST_CASE("brick wall layout and parameter count") {
  const AnsatzCircuit c = build_ansatz(6, 5);
  CHECK(c.blocks().size() == 13);
  CHECK(c.n_params() == 32);
  CHECK(c.blocks()[0] == AnsatzBlock{1, 0, 1, 6, 7});
  CHECK(c.blocks()[3] == AnsatzBlock{2, 1, 2, 12, 13});
  CHECK(build_ansatz(2, 1).n_params() == 4);
  CHECK(build_ansatz(5, full_expressivity_depth(5)).n_params() == 133);
  CHECK_THROWS(build_ansatz(1, 1));
  CHECK_THROWS(build_ansatz(3, 0));
  CHECK_THROWS(AnsatzCircuit(3, 1, {{1, 0, 2, 3, 3}}));
}

TEST_CASE("zero angles prepare the all-zero state") {
  const AnsatzCircuit c = build_ansatz(4, 3);
  const std::vector<double> zero(static_cast<std::size_t>(c.n_params()), 0.0);
  const QuantumState s = prepare(c, zero);
  CHECK(s[0] == Complex{1.0});
  CHECK(std::abs(s.norm() - 1.0) <= 1e-15);
  CHECK_THROWS(prepare(c, std::vector<double>(3, 0.0)));
}

TEST_CASE("prepare matches the dense gate-product oracle and stays real") {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 5; ++n) {
    const AnsatzCircuit c = build_ansatz(n, 3);
    const auto th = oracle::random_reals(rng, static_cast<std::size_t>(c.n_params()), -3.0, 3.0);
    const QuantumState s = prepare(c, th);
    const Eigen::VectorXcd want = dense_prepare(c, th);
    for (std::size_t k = 0; k < s.size(); ++k) {
      CHECK(std::abs(s[k] - want(static_cast<Eigen::Index>(k))) <= 1e-12);
      CHECK(s[k].imag() == 0.0);
    }
    // Cross-check against the generic gate path of the state vector.
    QuantumState g(n);
    for (const Gate &gate : c.gates(th))
      g.apply(gate);
    for (std::size_t k = 0; k < s.size(); ++k)
      CHECK(std::abs(s[k] - g[k]) <= 1e-12);
  }
}

TEST_CASE("shift-rule gradients against central differences") {
  std::mt19937_64 rng(8);
  const AnsatzCircuit c = build_ansatz(3, 2);
  const auto th = oracle::random_reals(rng, static_cast<std::size_t>(c.n_params()), -2.0, 2.0);
  const auto g = oracle::random_amplitudes(rng, 8, true);
  const QuantumState target(3, g);
  // Quadratic loss: <psi|M|psi> with M a projector onto `target`.
  const StateLoss quad = [&](const QuantumState &s) { return std::norm(inner_product(target, s)); };
  // Linear loss: Re<target|psi>.
  const StateLoss lin = [&](const QuantumState &s) { return inner_product(target, s).real(); };
  auto fd = [&](const StateLoss &loss, std::size_t j) {
    auto p = th, m = th;
    p[j] += 1e-6;
    m[j] -= 1e-6;
    return (loss(prepare(c, p)) - loss(prepare(c, m))) / 2e-6;
  };
  const auto gq = parameter_shift_grad(c, th, quad, ShiftRule::two_term);
  const auto gl = parameter_shift_grad(c, th, lin, ShiftRule::four_term);
  const auto gq4 = parameter_shift_grad(c, th, quad, ShiftRule::four_term);
  for (std::size_t j = 0; j < th.size(); ++j) {
    CHECK(std::abs(gq[j] - fd(quad, j)) <= 1e-8);
    CHECK(std::abs(gl[j] - fd(lin, j)) <= 1e-8);
    CHECK(std::abs(gq4[j] - fd(quad, j)) <= 1e-8);
  }
}

TEST_CASE("JSON round trips") {
  const AnsatzCircuit c = build_ansatz(4, 3);
  CHECK(AnsatzCircuit::from_json(c.to_json()) == c);
  const ParameterVector p{2.5, {0.1, -0.2, 0.3}};
  const ParameterVector q = parameters_from_json(to_json(p));
  CHECK(q.lambda0 == 2.5);
  CHECK(q.angles == p.angles);
  CHECK_THROWS(parameters_from_json(R"({"lambda0": 1})"));
}

TEST_CASE("full-depth ansatz reaches random real states") {
  std::mt19937_64 rng(33);
  for (int n = 2; n <= 3; ++n) {
    const AnsatzCircuit c = build_ansatz(n, full_expressivity_depth(n));
    for (int trial = 0; trial < 3; ++trial) {
      const QuantumState target(n, oracle::random_amplitudes(rng, std::size_t{1} << n, true));
      const Objective f = [&](std::span<const double> th) {
        return 1.0 - std::norm(inner_product(target, prepare(c, th)));
      };
      const GradientFn grad = [&](std::span<const double> th) {
        return parameter_shift_grad(
            c, th, [&](const QuantumState &s) { return 1.0 - std::norm(inner_product(target, s)); });
      };
      OptimizerOptions opt;
      opt.kind = OptimizerKind::lbfgs;
      double best = 1.0;
      for (int start = 0; start < 4 && best > 1e-8; ++start) {
        const auto x0 = oracle::random_reals(rng, static_cast<std::size_t>(c.n_params()), -1.0, 1.0);
        best = std::min(best, minimize(f, grad, x0, opt).value);
      }
      CHECK(best <= 1e-8);
    }
  }
}
