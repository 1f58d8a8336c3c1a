#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vqcfd/operators.hpp"

using namespace vqcfd;

namespace {

Amplitudes basis_amp(std::size_t dim, std::size_t k) {
  Amplitudes a(dim, Complex{0.0});
  a[k] = 1.0;
  return a;
}

Eigen::MatrixXcd pauli_dense(const std::string &letters) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : letters) {
    Eigen::MatrixXcd p(2, 2);
    switch (c) {
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: p << 1, 0, 0, 1;
    }
    Eigen::MatrixXcd k(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        k.block(i * 2, j * 2, 2, 2) = out(i, j) * p;
    out = k;
  }
  return out;
}

} // namespace

TEST_CASE("shift examples") {
  const OperatorSpec s = shift_plus(2);
  CHECK(vqcfd::apply(s, basis_amp(4, 3))[0] == Complex{1.0});
  CHECK(vqcfd::apply(s, basis_amp(4, 1))[2] == Complex{1.0});
  // S+^dagger S+ = I
  const Eigen::MatrixXcd d = to_dense(s);
  CHECK((d.adjoint() * d - Eigen::MatrixXcd::Identity(4, 4)).norm() <= 1e-15);
  CHECK((to_dense(adjoint(s)) - d.adjoint()).norm() <= 1e-15);
}

TEST_CASE("stencils act as documented") {
  const double h = 0.25;
  std::vector<double> f{1.0, 4.0, 9.0, 16.0};
  const auto g = apply_real(nabla(2, h), f);
  CHECK(g[1] == doctest::Approx((9.0 - 1.0) / (2 * h)));
  CHECK(g[0] == doctest::Approx((4.0 - 16.0) / (2 * h)));
  const auto l = apply_real(laplacian(2, h), f);
  CHECK(l[2] == doctest::Approx((16.0 - 18.0 + 4.0) / (h * h)));
  CHECK_THROWS(nabla(2, 0.0));
}

TEST_CASE("stencil matrices match the index-arithmetic oracle") {
  for (int n = 1; n <= 6; ++n) {
    const double h = 1.0 / (1 << n);
    const std::size_t dim = std::size_t{1} << n;
    CHECK((to_dense(nabla(n, h)).real() - oracle::nabla(dim, h)).norm() <= 1e-9);
    CHECK((to_dense(laplacian(n, h)).real() - oracle::laplacian(dim, h)).norm() <= 1e-8);
  }
}

TEST_CASE("Laplacian eigenvalues, nabla antisymmetry and telescoping") {
  const int n = 5;
  const double h = 1.0;
  const std::size_t dim = 32;
  const OperatorSpec lap = laplacian(n, h), grad = nabla(n, h);
  for (std::size_t m = 0; m < dim; ++m) {
    Amplitudes e(dim);
    for (std::size_t k = 0; k < dim; ++k)
      e[k] = std::polar(1.0, 2.0 * std::numbers::pi * double(m * k) / double(dim));
    const Amplitudes r = vqcfd::apply(lap, e);
    const double want = (2.0 * std::cos(2.0 * std::numbers::pi * double(m) / double(dim)) - 2.0);
    for (std::size_t k = 0; k < dim; ++k)
      CHECK(std::abs(r[k] - want * e[k]) <= 1e-12);
  }
  const Eigen::MatrixXcd g = to_dense(grad);
  CHECK((g + g.transpose()).norm() <= 1e-15);
  std::mt19937_64 rng(3);
  const auto f = oracle::random_reals(rng, dim);
  double sum = 0.0, lsum = 0.0;
  for (double x : apply_real(grad, f))
    sum += x;
  for (double x : apply_real(lap, f))
    lsum += x;
  CHECK(std::abs(sum) <= 1e-13);
  CHECK(std::abs(lsum) <= 1e-13);
}

TEST_CASE("Pauli decomposition examples and reconstruction") {
  const OperatorSpec p = pauli_decompose(shift_plus(1));
  // S+ on one qubit is X.
  const auto &terms = std::get<PauliSum>(p.rep()).terms;
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].letters == "X");
  CHECK(std::abs(terms[0].coeff - Complex{1.0}) <= 1e-15);

  std::mt19937_64 rng(12);
  for (int n = 1; n <= 4; ++n) {
    const double h = 0.5;
    for (const OperatorSpec &op : {nabla(n, h), laplacian(n, h), shift_plus(n)}) {
      const OperatorSpec pd = pauli_decompose(op);
      Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
      for (const auto &t : std::get<PauliSum>(pd.rep()).terms)
        sum += t.coeff * pd.scale() * pauli_dense(t.letters);
      CHECK((sum - to_dense(op)).norm() <= 1e-10);
    }
  }
  CHECK_THROWS(pauli_decompose(laplacian(kMaxPauliQubits + 1, 1.0)));
}

TEST_CASE("every representation applies like its dense matrix") {
  std::mt19937_64 rng(17);
  const int n = 3;
  const auto v = oracle::random_amplitudes(rng, 8);
  Eigen::VectorXcd ev(8);
  for (std::size_t k = 0; k < 8; ++k)
    ev(static_cast<Eigen::Index>(k)) = v[k];
  Eigen::MatrixXcd m(8, 8);
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index j = 0; j < 8; ++j)
      m(i, j) = Complex(std::sin(double(i + 2 * j)), std::cos(double(3 * i - j)));
  const std::vector<OperatorSpec> ops{
      laplacian(n, 0.3),
      OperatorSpec(n, PauliSum{{{Complex(0.5, 0.1), "XYZ"}, {2.0, "IZI"}}}, 1.5),
      OperatorSpec(n, Diagonal{oracle::random_reals(rng, 8)}, 2.0),
      OperatorSpec(n, Dense{m}, 0.5),
  };
  for (const auto &op : ops) {
    const Amplitudes r = vqcfd::apply(op, v);
    const Eigen::VectorXcd want = to_dense(op) * ev;
    for (std::size_t k = 0; k < 8; ++k)
      CHECK(std::abs(r[k] - want(static_cast<Eigen::Index>(k))) <= 1e-12);
    const Eigen::MatrixXcd adj = to_dense(adjoint(op));
    CHECK((adj - to_dense(op).adjoint()).norm() <= 1e-12);
  }
  // Explicit dense construction of the Pauli sum.
  const Eigen::MatrixXcd ps =
      1.5 * (Complex(0.5, 0.1) * pauli_dense("XYZ") + 2.0 * pauli_dense("IZI"));
  CHECK((to_dense(ops[1]) - ps).norm() <= 1e-12);
  CHECK_THROWS(vqcfd::apply(ops[0], Amplitudes(4)));
  CHECK_THROWS(OperatorSpec(n, Diagonal{{1.0, 2.0}}));
  CHECK_THROWS(OperatorSpec(n, PauliSum{{{1.0, "XQ"}}}));
}

TEST_CASE("shift gate cascades reproduce the shift operator") {
  for (int n = 1; n <= 4; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (int power : {1, -1, 3, -2}) {
      oracle::Mat u = oracle::Mat::Identity(Eigen::Index(dim), Eigen::Index(dim));
      for (const Gate &g : shift_power_gates(n, power))
        u = oracle::gate_matrix(g, n) * u;
      const OperatorSpec s(n, ShiftComposition{{{power, 1.0}}});
      CHECK((u - to_dense(s)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("unitary terms and Pauli text") {
  const auto terms = unitary_terms(nabla(3, 0.5));
  REQUIRE(terms.size() == 2);
  CHECK(std::abs(terms[0].coeff - Complex{1.0}) <= 1e-15);
  CHECK_THROWS(unitary_terms(OperatorSpec(2, Diagonal{{1, 2, 3, 4}})));

  const OperatorSpec p = pauli_decompose(laplacian(2, 0.5));
  const OperatorSpec back = parse_pauli_sum(pauli_sum_text(p));
  CHECK((to_dense(back) - to_dense(p)).norm() <= 1e-12);
  CHECK_THROWS(parse_pauli_sum("1 0 XX\n1 0 X\n"));
  CHECK_THROWS(parse_pauli_sum(""));
}
