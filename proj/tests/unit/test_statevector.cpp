#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vqcfd/statevector.hpp"

using namespace vqcfd;

TEST_CASE("init_zero_state") {
  const QuantumState one = init_zero_state(1);
  CHECK(one[0] == Complex{1.0});
  CHECK(one[1] == Complex{0.0});
  const QuantumState three = init_zero_state(3);
  CHECK(three.size() == 8);
  CHECK(three[0] == Complex{1.0});
  CHECK(three.norm() == 1.0);
  CHECK(init_zero_state(20).size() == (std::size_t{1} << 20));
  CHECK_THROWS(init_zero_state(0));
  CHECK_THROWS(init_zero_state(kMaxQubits + 1));
}

TEST_CASE("basic gate examples") {
  const QuantumState x = apply_gate(init_zero_state(1), gates::x(0));
  CHECK(x[1] == Complex{1.0});

  QuantumState s(2, Amplitudes{0.0, 0.0, 0.0, 1.0});
  s.apply(gates::cz(0, 1));
  CHECK(s[3] == Complex{-1.0});

  const QuantumState r = apply_gate(init_zero_state(1), gates::ry(0, std::numbers::pi / 2));
  CHECK(r[0].real() == doctest::Approx(std::cos(std::numbers::pi / 4)));
  CHECK(r[1].real() == doctest::Approx(std::sin(std::numbers::pi / 4)));
}

TEST_CASE("gate validation") {
  CHECK_THROWS(Gate("bad", {0}, {1.0, 1.0, 0.0, 1.0}));
  CHECK_THROWS(Gate("dup", {1, 1}, std::vector<Complex>(16, 0.0)));
  QuantumState s(2);
  CHECK_THROWS(s.apply(gates::x(2)));
  CHECK_THROWS(s.apply(gates::x(0).controlled_by({5})));
  CHECK_THROWS(gates::x(0).controlled_by({0}));
}

TEST_CASE("qubit 0 is the most significant bit") {
  QuantumState s(3);
  s.apply(gates::x(0));
  CHECK(s[4] == Complex{1.0});
  CHECK(expectation_z(s, 0) == -1.0);
  CHECK(expectation_z(s, 2) == 1.0);
}

TEST_CASE("inner_product against extended precision") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 8; ++n) {
    const auto a = oracle::random_amplitudes(rng, std::size_t{1} << n);
    const auto b = oracle::random_amplitudes(rng, std::size_t{1} << n);
    const QuantumState sa(n, a), sb(n, b);
    const Complex got = inner_product(sa, sb);
    const auto want = oracle::inner_long(a, b);
    CHECK(std::abs(got.real() - static_cast<double>(want.real())) <= 1e-13);
    CHECK(std::abs(got.imag() - static_cast<double>(want.imag())) <= 1e-13);
    CHECK(std::abs(inner_product(sa, sa) - 1.0) <= 1e-13);
  }
  const QuantumState zero(1), one(1, Amplitudes{0.0, 1.0});
  CHECK(inner_product(zero, one) == Complex{0.0});
  CHECK_THROWS(inner_product(QuantumState(2), QuantumState(3)));
}

TEST_CASE("gate composition matches the Kronecker dense oracle") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int n = 1; n <= 4; ++n) {
    const auto a = oracle::random_amplitudes(rng, std::size_t{1} << n);
    QuantumState s(n, a);
    oracle::Mat u = oracle::Mat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
    std::uniform_int_distribution<int> q(0, n - 1);
    for (int k = 0; k < 30; ++k) {
      const int t = q(rng);
      int o = q(rng);
      std::optional<Gate> g;
      switch (n == 1 ? pick(rng) % 4 : pick(rng)) {
      case 0: g = gates::h(t); break;
      case 1: g = gates::y(t); break;
      case 2: g = gates::ry(t, 0.3 * k); break;
      case 3: g = gates::z(t); break;
      case 4:
        if (o == t) o = (t + 1) % n;
        g = gates::cnot(o, t);
        break;
      default:
        if (o == t) o = (t + 1) % n;
        g = gates::cz(t, o);
        if (n >= 3) {
          int c = (std::max(t, o) + 1) % n;
          while (c == t || c == o) c = (c + 1) % n;
          g = g->controlled_by({c});
        }
      }
      s.apply(*g);
      u = oracle::gate_matrix(*g, n) * u;
    }
    Eigen::VectorXcd v(Eigen::Index{1} << n);
    for (std::size_t j = 0; j < a.size(); ++j)
      v(static_cast<Eigen::Index>(j)) = a[j];
    const Eigen::VectorXcd want = u * v;
    for (std::size_t j = 0; j < a.size(); ++j)
      CHECK(std::abs(s[j] - want(static_cast<Eigen::Index>(j))) <= 1e-12);
  }
}

TEST_CASE("norm is preserved over 10^4 gates") {
  std::mt19937_64 rng(3);
  QuantumState s(6);
  std::uniform_int_distribution<int> q(0, 5);
  std::uniform_real_distribution<double> th(-3.0, 3.0);
  for (int k = 0; k < 10000; ++k) {
    const int a = q(rng);
    const int b = (a + 1 + q(rng) % 5) % 6;
    switch (k % 4) {
    case 0: s.apply(gates::ry(a, th(rng))); break;
    case 1: s.apply(gates::h(a)); break;
    case 2: s.apply(gates::cz(a, b)); break;
    default: s.apply(gates::cnot(a, b)); break;
    }
  }
  CHECK(std::abs(s.norm() - 1.0) <= 1e-10);
}

TEST_CASE("apply_on_register with controls") {
  QuantumState s(3);
  s.apply(gates::h(0));
  // Flip register {1,2} only when qubit 0 is |1>.
  s.apply_on_register(1, 2, {0}, [](std::vector<Complex> &v) { std::swap(v[0], v[3]); });
  CHECK(std::abs(s[0] - std::numbers::sqrt2 / 2) < 1e-15);
  CHECK(std::abs(s[7] - std::numbers::sqrt2 / 2) < 1e-15);
  CHECK_THROWS(s.apply_on_register(1, 2, {1}, [](std::vector<Complex> &) {}));
}

TEST_CASE("amplitudes CSV") {
  const std::string csv = amplitudes_csv(QuantumState(1));
  CHECK(csv == "index,re,im\n0,1,0\n1,0,0\n");
}
