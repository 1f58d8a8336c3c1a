// Independent reference computations used by the unit tests. Nothing here
// calls into the code under test beyond reading its data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vqcfd/statevector.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline std::vector<Complex> random_amplitudes(std::mt19937_64 &rng, std::size_t dim,
                                              bool real = false) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(dim);
  double s = 0.0;
  for (auto &x : a) {
    x = real ? Complex{g(rng), 0.0} : Complex{g(rng), g(rng)};
    s += std::norm(x);
  }
  for (auto &x : a)
    x /= std::sqrt(s);
  return a;
}

inline std::vector<double> random_reals(std::mt19937_64 &rng, std::size_t n, double lo = -1.0,
                                        double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto &x : v)
    x = u(rng);
  return v;
}

inline std::complex<long double> inner_long(const std::vector<Complex> &a,
                                            const std::vector<Complex> &b) {
  std::complex<long double> s = 0;
  for (std::size_t j = 0; j < a.size(); ++j)
    s += std::conj(std::complex<long double>(a[j])) * std::complex<long double>(b[j]);
  return s;
}

/// Full 2^N x 2^N matrix of a gate by explicit Kronecker expansion over
/// qubits (qubit 0 leftmost). Controls are expanded as projector sums.
inline Mat gate_matrix(const vqcfd::Gate &g, int n) {
  const Mat id = Mat::Identity(2, 2);
  Mat p0(2, 2), p1(2, 2);
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  auto kron = [](const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  const auto &t = g.targets();
  const auto &m = g.matrix();
  // Expand the target matrix as a sum of single-qubit operator products.
  std::vector<std::pair<Complex, std::vector<Mat>>> terms;
  if (t.size() == 1) {
    Mat u(2, 2);
    u << m[0], m[1], m[2], m[3];
    std::vector<Mat> ops(static_cast<std::size_t>(n), id);
    ops[static_cast<std::size_t>(t[0])] = u;
    terms.push_back({1.0, ops});
  } else {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        if (m[static_cast<std::size_t>(r * 4 + c)] == Complex{0.0})
          continue;
        Mat e0 = Mat::Zero(2, 2), e1 = Mat::Zero(2, 2);
        e0(r >> 1, c >> 1) = 1.0;
        e1(r & 1, c & 1) = 1.0;
        std::vector<Mat> ops(static_cast<std::size_t>(n), id);
        ops[static_cast<std::size_t>(t[0])] = e0;
        ops[static_cast<std::size_t>(t[1])] = e1;
        terms.push_back({m[static_cast<std::size_t>(r * 4 + c)], ops});
      }
  }
  auto product = [&](const std::vector<Mat> &ops) {
    Mat out = ops[0];
    for (std::size_t q = 1; q < ops.size(); ++q)
      out = kron(out, ops[q]);
    return out;
  };
  Mat u = Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (auto &[c, ops] : terms)
    u += c * product(ops);
  if (g.controls().empty())
    return u;
  // Controlled: P_on (x) U + (I - P_on) (x) I.
  std::vector<Mat> on(static_cast<std::size_t>(n), id);
  for (int q : g.controls())
    on[static_cast<std::size_t>(q)] = p1;
  const Mat proj = product(on);
  const Mat full_id = Mat::Identity(u.rows(), u.cols());
  return proj * u + (full_id - proj);
}

/// Circulant central difference and Laplacian by index arithmetic.
inline Eigen::MatrixXd nabla(std::size_t dim, double h) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>((k + 1) % dim)) += 0.5 / h;
    d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>((k + dim - 1) % dim)) -= 0.5 / h;
  }
  return d;
}

inline Eigen::MatrixXd laplacian(std::size_t dim, double h) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    d(r, static_cast<Eigen::Index>((k + 1) % dim)) += 1.0 / (h * h);
    d(r, static_cast<Eigen::Index>((k + dim - 1) % dim)) += 1.0 / (h * h);
    d(r, r) -= 2.0 / (h * h);
  }
  return d;
}

/// Nonzero eigenvalues of the reduced density matrix across `cut`, descending,
/// by explicit partial trace over the larger side.
inline std::vector<double> reduced_spectrum(const std::vector<Complex> &a, int n, int cut) {
  const std::size_t left = std::size_t{1} << cut, right = std::size_t{1} << (n - cut);
  const bool keep_left = left <= right;
  const std::size_t kept = keep_left ? left : right, traced = keep_left ? right : left;
  auto at = [&](std::size_t k, std::size_t t) {
    return keep_left ? a[k * right + t] : a[t * right + k];
  };
  Mat rho = Mat::Zero(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(kept));
  for (std::size_t i = 0; i < kept; ++i)
    for (std::size_t j = 0; j < kept; ++j) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < traced; ++t)
        s += at(i, t) * std::conj(at(j, t));
      rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
    }
  Eigen::SelfAdjointEigenSolver<Mat> eig(rho);
  std::vector<double> ev(eig.eigenvalues().data(),
                         eig.eigenvalues().data() + eig.eigenvalues().size());
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

inline double entropy_from_probs(const std::vector<double> &p) {
  double s = 0.0;
  for (double x : p)
    if (x > 1e-300)
      s -= x * std::log2(x);
  return s;
}

} // namespace oracle
