#include "vqcfd/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vqcfd/diagnostics.hpp"
#include "text_util.hpp"

namespace vqcfd {

namespace {

// Singular values below this fraction of the largest are numerical zeros.
constexpr double kRankCutoff = 1e-14;

Eigen::VectorXd singular_values(const Eigen::MatrixXcd &m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues();
}

std::vector<double> normalized(const Eigen::VectorXd &sv, Eigen::Index count) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < count; ++i)
    total += sv[i] * sv[i];
  const double scale = total > 0.0 ? 1.0 / std::sqrt(total) : 0.0;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = sv[i] * scale;
  return out;
}

Eigen::Index numerical_rank(const Eigen::VectorXd &sv) {
  if (sv.size() == 0 || sv[0] <= 0.0)
    return 1;
  Eigen::Index r = 0;
  while (r < sv.size() && sv[r] > kRankCutoff * sv[0])
    ++r;
  return std::max<Eigen::Index>(r, 1);
}

} // namespace

EncodedField encode(const GridFunction &f) {
  double sq = 0.0;
  for (double v : f.values())
    sq += v * v;
  const double lambda0 = std::sqrt(sq);
  if (!(lambda0 > 0.0))
    throw std::invalid_argument("encode: cannot encode an all-zero field");
  Amplitudes a(f.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    a[j] = f[j] / lambda0;
  return {lambda0, QuantumState(f.grid().n_qubits(), std::move(a)), f.grid(), f.tag()};
}

GridFunction decode(const EncodedField &e) {
  std::vector<double> f(e.state.size());
  double max_imag = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    f[j] = e.lambda0 * e.state[j].real();
    max_imag = std::max(max_imag, std::abs(e.state[j].imag()));
  }
  if (max_imag > 1e-8)
    warn("decode: discarding imaginary amplitude parts up to " + detail::fmt_double(max_imag));
  return GridFunction(e.grid, std::move(f), e.tag);
}

std::vector<int> MpsState::bond_dims() const {
  std::vector<int> dims;
  dims.reserve(tensors.size() + 1);
  for (const auto &t : tensors)
    dims.push_back(static_cast<int>(t[0].rows()));
  dims.push_back(tensors.empty() ? 1 : static_cast<int>(tensors.back()[0].cols()));
  return dims;
}

int MpsState::max_bond() const {
  const auto d = bond_dims();
  return *std::max_element(d.begin(), d.end());
}

MpsState to_mps(const QuantumState &state, Truncation truncation) {
  if (truncation.chi_max < 0)
    throw std::invalid_argument("to_mps: chi_max must be >= 1 (or 0 for no cap)");
  if (truncation.eps < 0.0)
    throw std::invalid_argument("to_mps: eps must be non-negative");

  const int n = state.n_qubits();
  MpsState mps;
  mps.n_qubits = n;
  mps.tensors.resize(static_cast<std::size_t>(n));

  // Remainder: rows are the left bond index, columns the not-yet-split qubits.
  Eigen::MatrixXcd rem(1, static_cast<Eigen::Index>(state.size()));
  for (std::size_t j = 0; j < state.size(); ++j)
    rem(0, static_cast<Eigen::Index>(j)) = state[j];

  for (int q = 0; q < n - 1; ++q) {
    const Eigen::Index chi_left = rem.rows();
    const Eigen::Index rest = rem.cols() / 2;
    Eigen::MatrixXcd m(chi_left * 2, rest);
    for (Eigen::Index a = 0; a < chi_left; ++a)
      for (Eigen::Index s = 0; s < 2; ++s)
        m.row(a * 2 + s) = rem.block(a, s * rest, 1, rest);

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sv = svd.singularValues();
    const Eigen::Index rank = numerical_rank(sv);

    double total = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      total += sv[i] * sv[i];

    Eigen::Index keep = rank;
    if (truncation.chi_max > 0)
      keep = std::min<Eigen::Index>(keep, truncation.chi_max);
    if (truncation.eps > 0.0 && total > 0.0) {
      // Smallest k whose tail weight fits in the budget.
      double tail = 0.0;
      Eigen::Index k = rank;
      while (k > 1) {
        const double w = sv[k - 1] * sv[k - 1] / total;
        if (tail + w > truncation.eps)
          break;
        tail += w;
        --k;
      }
      keep = std::min(keep, k);
    }

    double dropped = 0.0;
    for (Eigen::Index i = keep; i < sv.size(); ++i)
      dropped += sv[i] * sv[i];

    auto &t = mps.tensors[static_cast<std::size_t>(q)];
    const Eigen::MatrixXcd u = svd.matrixU().leftCols(keep);
    t[0].resize(chi_left, keep);
    t[1].resize(chi_left, keep);
    for (Eigen::Index a = 0; a < chi_left; ++a) {
      t[0].row(a) = u.row(a * 2);
      t[1].row(a) = u.row(a * 2 + 1);
    }
    mps.schmidt.push_back(normalized(sv, keep));
    mps.full_schmidt.push_back(normalized(sv, rank));
    mps.discarded.push_back(dropped);

    rem = sv.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
  }

  auto &last = mps.tensors.back();
  last[0] = rem.col(0);
  last[1] = rem.col(1);
  return mps;
}

MpsContraction mps_to_state(const MpsState &mps) {
  const int n = mps.n_qubits;
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("mps_to_state: qubit count beyond the amplitude cap");
  if (static_cast<int>(mps.tensors.size()) != n)
    throw std::invalid_argument("mps_to_state: tensor count does not match qubit count");

  std::vector<Eigen::RowVectorXcd> rows{Eigen::RowVectorXcd::Ones(1)};
  for (const auto &t : mps.tensors) {
    std::vector<Eigen::RowVectorXcd> next;
    next.reserve(rows.size() * 2);
    for (const auto &r : rows) {
      next.push_back(r * t[0]);
      next.push_back(r * t[1]);
    }
    rows = std::move(next);
  }
  Amplitudes a(rows.size());
  double sq = 0.0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    a[j] = rows[j](0);
    sq += std::norm(a[j]);
  }
  if (!(sq > 0.0))
    throw std::invalid_argument("mps_to_state: MPS contracts to the zero vector");
  const double inv = 1.0 / std::sqrt(sq);
  for (auto &v : a)
    v *= inv;
  return {QuantumState(n, std::move(a)), 1.0 - sq};
}

double fidelity(const QuantumState &a, const QuantumState &b) {
  return std::norm(inner_product(a, b));
}

int chi_99(const QuantumState &state, AccuracyMetric metric) {
  const int n = state.n_qubits();
  const int chi_cap = 1 << (n / 2);
  for (int chi = 1; chi < chi_cap; ++chi) {
    const auto approx = mps_to_state(to_mps(state, {chi, 0.0})).state;
    const double f = fidelity(approx, state);
    const bool ok = metric == AccuracyMetric::fidelity ? f >= 0.99
                                                        : std::sqrt(std::max(0.0, 1.0 - f)) <= 0.01;
    if (ok)
      return chi;
  }
  return chi_cap;
}

int chi_99(const GridFunction &f, AccuracyMetric metric) {
  return chi_99(encode(f).state, metric);
}

std::vector<double> schmidt_values(const QuantumState &state, int cut) {
  const int n = state.n_qubits();
  if (cut < 1 || cut > n - 1)
    throw std::out_of_range("schmidt_values: cut must satisfy 1 <= cut <= N-1");
  const Eigen::Index cols = Eigen::Index{1} << cut;
  const Eigen::Index rows = Eigen::Index{1} << (n - cut);
  // Column-major map: element (r, c) is amplitude c * 2^(N-cut) + r.
  Eigen::Map<const Eigen::MatrixXcd> m(state.amplitudes().data(), rows, cols);
  const Eigen::VectorXd sv = singular_values(m);
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  return out;
}

double entropy_bits(const std::vector<double> &schmidt) {
  double s = 0.0;
  for (double l : schmidt) {
    const double p = l * l;
    if (p > 0.0)
      s -= p * std::log2(p);
  }
  return s;
}

double interscale_entropy(const QuantumState &state, int cut) {
  return entropy_bits(schmidt_values(state, cut));
}

std::vector<BondReport> chi_spectrum(const QuantumState &state, Truncation truncation) {
  const MpsState mps = to_mps(state, truncation);
  const auto dims = mps.bond_dims();
  std::vector<BondReport> out;
  for (int b = 1; b < mps.n_qubits; ++b) {
    const auto &full = mps.full_schmidt[static_cast<std::size_t>(b - 1)];
    out.push_back({b, dims[static_cast<std::size_t>(b)], entropy_bits(full),
                   mps.discarded[static_cast<std::size_t>(b - 1)], full});
  }
  return out;
}

std::string chi_spectrum_csv(const std::vector<BondReport> &rows) {
  std::string out = "bond,chi,entropy_bits,discarded_weight\n";
  for (const auto &r : rows) {
    out += std::to_string(r.bond) + ',' + std::to_string(r.chi) + ',' +
           detail::fmt_double(r.entropy_bits) + ',' + detail::fmt_double(r.discarded_weight) + '\n';
  }
  return out;
}

} // namespace vqcfd
