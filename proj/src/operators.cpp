#include "vqcfd/operators.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace vqcfd {

namespace {

constexpr double kPauliDropTol = 1e-12;

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

std::size_t wrap(long long k, std::size_t n) {
  const long long m = static_cast<long long>(n);
  long long r = k % m;
  if (r < 0)
    r += m;
  return static_cast<std::size_t>(r);
}

// P|j> = phase * |j ^ flip>.
struct PauliAction {
  std::size_t flip = 0;
  std::size_t y_mask = 0;
  std::size_t z_mask = 0;
  int y_count = 0;

  PauliAction(const std::string &letters) {
    const int n = static_cast<int>(letters.size());
    for (int q = 0; q < n; ++q) {
      const std::size_t b = bit_of(n, q);
      switch (letters[static_cast<std::size_t>(q)]) {
      case 'I':
        break;
      case 'X':
        flip |= b;
        break;
      case 'Y':
        flip |= b;
        y_mask |= b;
        ++y_count;
        break;
      case 'Z':
        z_mask |= b;
        break;
      default:
        throw std::invalid_argument("Pauli string letters must be I, X, Y or Z");
      }
    }
  }

  Complex phase(std::size_t j) const {
    // Y|0> = i|1>, Y|1> = -i|0>, Z|1> = -|1>.
    Complex p = 1.0;
    const Complex i{0.0, 1.0};
    for (int k = 0; k < y_count; ++k)
      p *= i;
    const int y_ones = std::popcount(j & y_mask);
    const int z_ones = std::popcount(j & z_mask);
    if ((y_ones + z_ones) % 2 == 1)
      p = -p;
    return p;
  }
};

void check_size(const OperatorSpec &op, std::size_t n) {
  if (n != op.dim())
    throw std::invalid_argument("operator/state size mismatch");
}

void check_h(double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("grid spacing must be positive");
}

} // namespace

OperatorSpec::OperatorSpec(int n_qubits, Representation rep, double scale)
    : n_qubits_(n_qubits), rep_(std::move(rep)), scale_(scale) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("operator qubit count out of range");
  if (!std::isfinite(scale))
    throw std::invalid_argument("operator scale must be finite");
  std::visit(overloaded{
                 [](const ShiftComposition &) {},
                 [&](const PauliSum &p) {
                   for (const auto &t : p.terms) {
                     if (static_cast<int>(t.letters.size()) != n_qubits)
                       throw std::invalid_argument("Pauli string length must equal N");
                     PauliAction check(t.letters);
                   }
                 },
                 [&](const Diagonal &d) {
                   if (d.values.size() != dim())
                     throw std::invalid_argument("diagonal needs 2^N entries");
                 },
                 [&](const Dense &d) {
                   if (n_qubits > kMaxDenseQubits)
                     throw std::invalid_argument("dense operators are limited to N <= 8");
                   if (d.matrix.rows() != static_cast<Eigen::Index>(dim()) ||
                       d.matrix.cols() != static_cast<Eigen::Index>(dim()))
                     throw std::invalid_argument("dense matrix must be 2^N x 2^N");
                 },
             },
             rep_);
}

OperatorSpec identity_op(int n_qubits) {
  return OperatorSpec(n_qubits, ShiftComposition{{{0, 1.0}}});
}

OperatorSpec shift_plus(int n_qubits) {
  return OperatorSpec(n_qubits, ShiftComposition{{{1, 1.0}}});
}

OperatorSpec nabla(int n_qubits, double h) {
  check_h(h);
  return OperatorSpec(n_qubits, ShiftComposition{{{-1, 1.0}, {1, -1.0}}}, 1.0 / (2.0 * h));
}

OperatorSpec laplacian(int n_qubits, double h) {
  check_h(h);
  return OperatorSpec(n_qubits, ShiftComposition{{{-1, 1.0}, {0, -2.0}, {1, 1.0}}}, 1.0 / (h * h));
}

OperatorSpec diagonal_of(const GridFunction &f) {
  return OperatorSpec(f.grid().n_qubits(), Diagonal{f.values()});
}

OperatorSpec diagonal_of(const EncodedField &e) {
  std::vector<double> d(e.state.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = e.lambda0 * e.state[k].real();
  return OperatorSpec(e.state.n_qubits(), Diagonal{std::move(d)});
}

Eigen::MatrixXcd to_dense(const OperatorSpec &op) {
  if (op.n_qubits() > kMaxDenseQubits)
    throw std::invalid_argument("to_dense: N exceeds the dense size cap");
  const auto n = static_cast<Eigen::Index>(op.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  std::visit(overloaded{
                 [&](const ShiftComposition &s) {
                   for (const auto &t : s.terms)
                     for (std::size_t k = 0; k < op.dim(); ++k)
                       m(static_cast<Eigen::Index>(wrap(static_cast<long long>(k) + t.power, op.dim())),
                         static_cast<Eigen::Index>(k)) += t.coeff;
                 },
                 [&](const PauliSum &p) {
                   for (const auto &t : p.terms) {
                     PauliAction a(t.letters);
                     for (std::size_t j = 0; j < op.dim(); ++j)
                       m(static_cast<Eigen::Index>(j ^ a.flip), static_cast<Eigen::Index>(j)) +=
                           t.coeff * a.phase(j);
                   }
                 },
                 [&](const Diagonal &d) {
                   for (std::size_t k = 0; k < op.dim(); ++k)
                     m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = d.values[k];
                 },
                 [&](const Dense &d) { m = d.matrix; },
             },
             op.rep());
  return m * op.scale();
}

OperatorSpec pauli_decompose(const OperatorSpec &op) {
  const int n = op.n_qubits();
  if (n > kMaxPauliQubits)
    throw std::invalid_argument("pauli_decompose: N too large for brute-force decomposition");
  const Eigen::MatrixXcd m = to_dense(op);
  const std::size_t dim = op.dim();
  const std::size_t count = std::size_t{1} << (2 * n);
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  PauliSum out;
  std::string letters(static_cast<std::size_t>(n), 'I');
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t c = code;
    for (int q = n - 1; q >= 0; --q) {
      letters[static_cast<std::size_t>(q)] = kLetters[c & 3u];
      c >>= 2;
    }
    PauliAction a(letters);
    Complex tr = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
      tr += std::conj(a.phase(j)) *
            m(static_cast<Eigen::Index>(j ^ a.flip), static_cast<Eigen::Index>(j));
    tr /= static_cast<double>(dim);
    if (std::abs(tr) > kPauliDropTol)
      out.terms.push_back({tr, letters});
  }
  return OperatorSpec(n, std::move(out));
}

OperatorSpec adjoint(const OperatorSpec &op) {
  return std::visit(
      overloaded{
          [&](const ShiftComposition &s) {
            ShiftComposition r;
            for (const auto &t : s.terms)
              r.terms.push_back({-t.power, t.coeff});
            return OperatorSpec(op.n_qubits(), r, op.scale());
          },
          [&](const PauliSum &p) {
            PauliSum r;
            for (const auto &t : p.terms)
              r.terms.push_back({std::conj(t.coeff), t.letters});
            return OperatorSpec(op.n_qubits(), r, op.scale());
          },
          [&](const Diagonal &d) { return OperatorSpec(op.n_qubits(), d, op.scale()); },
          [&](const Dense &d) {
            return OperatorSpec(op.n_qubits(), Dense{d.matrix.adjoint()}, op.scale());
          },
      },
      op.rep());
}

Amplitudes apply(const OperatorSpec &op, std::span<const Complex> v) {
  check_size(op, v.size());
  const std::size_t n = v.size();
  Amplitudes out(n, Complex{0.0});
  std::visit(overloaded{
                 [&](const ShiftComposition &s) {
                   for (const auto &t : s.terms) {
                     const std::size_t p = wrap(t.power, n);
                     for (std::size_t k = 0; k < n; ++k)
                       out[(k + p) & (n - 1)] += t.coeff * v[k];
                   }
                 },
                 [&](const PauliSum &p) {
                   for (const auto &t : p.terms) {
                     PauliAction a(t.letters);
                     for (std::size_t j = 0; j < n; ++j)
                       out[j ^ a.flip] += t.coeff * a.phase(j) * v[j];
                   }
                 },
                 [&](const Diagonal &d) {
                   for (std::size_t k = 0; k < n; ++k)
                     out[k] = d.values[k] * v[k];
                 },
                 [&](const Dense &d) {
                   for (std::size_t r = 0; r < n; ++r) {
                     Complex s = 0.0;
                     for (std::size_t c = 0; c < n; ++c)
                       s += d.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * v[c];
                     out[r] = s;
                   }
                 },
             },
             op.rep());
  for (auto &x : out)
    x *= op.scale();
  return out;
}

Amplitudes apply(const OperatorSpec &op, const QuantumState &state) {
  return vqcfd::apply(op, state.view());
}

std::vector<double> apply_real(const OperatorSpec &op, std::span<const double> v) {
  Amplitudes c(v.begin(), v.end());
  const Amplitudes r = vqcfd::apply(op, c);
  std::vector<double> out(r.size());
  for (std::size_t k = 0; k < r.size(); ++k)
    out[k] = r[k].real();
  return out;
}

std::vector<UnitaryTerm> unitary_terms(const OperatorSpec &op) {
  std::vector<UnitaryTerm> out;
  if (const auto *s = std::get_if<ShiftComposition>(&op.rep())) {
    for (const auto &t : s->terms)
      out.push_back({t.coeff * op.scale(), t.power});
  } else if (const auto *p = std::get_if<PauliSum>(&op.rep())) {
    for (const auto &t : p->terms)
      out.push_back({t.coeff * op.scale(), t.letters});
  } else {
    throw std::invalid_argument(
        "operator has no sum-of-unitaries form; Pauli-decompose it first");
  }
  return out;
}

std::vector<Gate> shift_plus_gates(int n_qubits, int offset) {
  std::vector<Gate> out;
  for (int target = 0; target < n_qubits; ++target) {
    std::vector<int> controls;
    for (int c = target + 1; c < n_qubits; ++c)
      controls.push_back(c + offset);
    out.push_back(gates::mcx(std::move(controls), target + offset));
  }
  return out;
}

std::vector<Gate> shift_power_gates(int n_qubits, int power, int offset) {
  const auto inc = shift_plus_gates(n_qubits, offset);
  std::vector<Gate> out;
  const long long period = 1LL << n_qubits;
  long long p = power % period;
  if (p < 0)
    p += period;
  // Use whichever direction needs fewer cascades.
  const bool down = p > period / 2;
  const long long reps = down ? period - p : p;
  for (long long r = 0; r < reps; ++r) {
    if (down)
      out.insert(out.end(), inc.rbegin(), inc.rend());
    else
      out.insert(out.end(), inc.begin(), inc.end());
  }
  return out;
}

std::vector<Gate> pauli_string_gates(const std::string &letters, int offset) {
  std::vector<Gate> out;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const int qubit = static_cast<int>(q) + offset;
    switch (letters[q]) {
    case 'I':
      break;
    case 'X':
      out.push_back(gates::x(qubit));
      break;
    case 'Y':
      out.push_back(gates::y(qubit));
      break;
    case 'Z':
      out.push_back(gates::z(qubit));
      break;
    default:
      throw std::invalid_argument("Pauli string letters must be I, X, Y or Z");
    }
  }
  return out;
}

std::string pauli_sum_text(const OperatorSpec &op) {
  const auto *p = std::get_if<PauliSum>(&op.rep());
  if (!p)
    throw std::invalid_argument("pauli_sum_text: operator is not a Pauli sum");
  std::string out;
  for (const auto &t : p->terms) {
    const Complex c = t.coeff * op.scale();
    out += detail::fmt_double(c.real()) + ' ' + detail::fmt_double(c.imag()) + ' ' + t.letters + '\n';
  }
  return out;
}

OperatorSpec parse_pauli_sum(const std::string &text) {
  PauliSum sum;
  std::istringstream is(text);
  std::string line;
  int n = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream ls(line);
    std::string re, im, letters;
    if (!(ls >> re >> im >> letters))
      throw std::invalid_argument("Pauli sum line needs 'coeff_re coeff_im STRING'");
    if (n < 0)
      n = static_cast<int>(letters.size());
    else if (static_cast<int>(letters.size()) != n)
      throw std::invalid_argument("Pauli strings have inconsistent lengths");
    sum.terms.push_back({{detail::parse_double(re), detail::parse_double(im)}, letters});
  }
  if (n < 1)
    throw std::invalid_argument("empty Pauli sum");
  return OperatorSpec(n, std::move(sum));
}

} // namespace vqcfd
