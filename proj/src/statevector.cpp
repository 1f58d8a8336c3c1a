#include "vqcfd/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "text_util.hpp"

namespace vqcfd {

namespace {

constexpr double kUnitaryTol = 1e-12;

void check_unitary(const std::vector<Complex> &m, std::size_t dim) {
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        s += std::conj(m[k * dim + r]) * m[k * dim + c];
      const double expect = r == c ? 1.0 : 0.0;
      if (std::abs(s - expect) > kUnitaryTol)
        throw std::invalid_argument("gate matrix is not unitary");
    }
  }
}

// Spreads the bits of `compact` over the positions not set in `hole_mask`.
inline std::size_t deposit(std::size_t compact, const std::vector<std::size_t> &holes) {
  // holes sorted ascending
  for (std::size_t h : holes) {
    const std::size_t low = compact & (h - 1);
    compact = ((compact & ~(h - 1)) << 1) | low;
  }
  return compact;
}

} // namespace

Gate::Gate(std::string name, std::vector<int> targets, std::vector<Complex> matrix,
           std::optional<double> angle)
    : name_(std::move(name)), targets_(std::move(targets)), matrix_(std::move(matrix)),
      angle_(angle) {
  if (targets_.empty() || targets_.size() > 2)
    throw std::invalid_argument("gate arity must be 1 or 2");
  if (targets_.size() == 2 && targets_[0] == targets_[1])
    throw std::invalid_argument("gate targets must be distinct");
  for (int t : targets_)
    if (t < 0)
      throw std::invalid_argument("negative qubit index");
  const std::size_t dim = std::size_t{1} << targets_.size();
  if (matrix_.size() != dim * dim)
    throw std::invalid_argument("gate matrix has the wrong size");
  check_unitary(matrix_, dim);
}

Gate Gate::controlled_by(std::vector<int> qubits) const {
  Gate g = *this;
  for (int q : qubits) {
    if (q < 0 || std::find(targets_.begin(), targets_.end(), q) != targets_.end() ||
        std::find(g.controls_.begin(), g.controls_.end(), q) != g.controls_.end())
      throw std::invalid_argument("control qubit overlaps targets or repeats");
    g.controls_.push_back(q);
  }
  g.name_ = "c" + name_;
  return g;
}

Gate Gate::shifted(int offset) const {
  Gate g = *this;
  for (auto &t : g.targets_)
    t += offset;
  for (auto &c : g.controls_)
    c += offset;
  return g;
}

namespace gates {

Gate x(int q) { return Gate("x", {q}, {0.0, 1.0, 1.0, 0.0}); }
Gate y(int q) {
  const Complex i{0.0, 1.0};
  return Gate("y", {q}, {0.0, -i, i, 0.0});
}
Gate z(int q) { return Gate("z", {q}, {1.0, 0.0, 0.0, -1.0}); }
Gate h(int q) {
  const double s = std::numbers::sqrt2 / 2.0;
  return Gate("h", {q}, {s, s, s, -s});
}
Gate ry(int q, double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return Gate("ry", {q}, {c, -s, s, c}, theta);
}
Gate cz(int a, int b) {
  return Gate("cz", {a, b},
              {1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0});
}
Gate cnot(int control, int target) {
  return Gate("cnot", {control, target},
              {1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0});
}
Gate mcx(std::vector<int> controls, int target) {
  if (controls.empty())
    return x(target);
  return x(target).controlled_by(std::move(controls));
}

} // namespace gates

QuantumState::QuantumState(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count must be in [1, 24]");
  amps_.assign(std::size_t{1} << n_qubits, Complex{0.0});
  amps_[0] = 1.0;
}

QuantumState::QuantumState(int n_qubits, Amplitudes amplitudes, double tol)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count must be in [1, 24]");
  if (amps_.size() != (std::size_t{1} << n_qubits))
    throw std::invalid_argument("amplitude count must be 2^N");
  if (std::abs(norm() - 1.0) > tol)
    throw std::invalid_argument("state is not normalized");
}

double QuantumState::norm() const {
  double s = 0.0;
  for (const auto &a : amps_)
    s += std::norm(a);
  return std::sqrt(s);
}

void QuantumState::apply(const Gate &gate) {
  std::size_t ctrl_mask = 0;
  std::vector<std::size_t> holes;
  for (int q : gate.controls()) {
    if (q >= n_qubits_)
      throw std::out_of_range("control qubit out of range");
    ctrl_mask |= bit_of(n_qubits_, q);
  }
  for (int q : gate.targets()) {
    if (q >= n_qubits_)
      throw std::out_of_range("target qubit out of range");
    holes.push_back(bit_of(n_qubits_, q));
  }
  std::vector<std::size_t> sorted_holes = holes;
  std::sort(sorted_holes.begin(), sorted_holes.end());
  const std::size_t outer = amps_.size() >> holes.size();
  const auto &m = gate.matrix();

  if (holes.size() == 1) {
    const std::size_t t = holes[0];
    for (std::size_t c = 0; c < outer; ++c) {
      const std::size_t i0 = deposit(c, sorted_holes);
      if ((i0 & ctrl_mask) != ctrl_mask)
        continue;
      const std::size_t i1 = i0 | t;
      const Complex a0 = amps_[i0], a1 = amps_[i1];
      amps_[i0] = m[0] * a0 + m[1] * a1;
      amps_[i1] = m[2] * a0 + m[3] * a1;
    }
    return;
  }

  const std::size_t hi = holes[0], lo = holes[1];
  for (std::size_t c = 0; c < outer; ++c) {
    const std::size_t i00 = deposit(c, sorted_holes);
    if ((i00 & ctrl_mask) != ctrl_mask)
      continue;
    const std::size_t idx[4] = {i00, i00 | lo, i00 | hi, i00 | hi | lo};
    Complex in[4];
    for (int k = 0; k < 4; ++k)
      in[k] = amps_[idx[k]];
    for (int r = 0; r < 4; ++r) {
      Complex s = 0.0;
      for (int k = 0; k < 4; ++k)
        s += m[r * 4 + k] * in[k];
      amps_[idx[r]] = s;
    }
  }
}

void QuantumState::apply_on_register(int first, int count, const std::vector<int> &controls,
                                     const std::function<void(std::vector<Complex> &)> &map) {
  if (first < 0 || count < 1 || first + count > n_qubits_)
    throw std::out_of_range("register out of range");
  std::size_t ctrl_mask = 0;
  for (int q : controls) {
    if (q < 0 || q >= n_qubits_ || (q >= first && q < first + count))
      throw std::out_of_range("register control out of range or overlapping");
    ctrl_mask |= bit_of(n_qubits_, q);
  }
  // Register bits are contiguous: the register index occupies bits
  // [shift, shift+count) of the global index.
  const int shift = n_qubits_ - first - count;
  const std::size_t reg_size = std::size_t{1} << count;
  const std::size_t low_size = std::size_t{1} << shift;
  const std::size_t high_size = amps_.size() >> (count + shift);
  std::vector<Complex> sub(reg_size);
  for (std::size_t hi = 0; hi < high_size; ++hi) {
    for (std::size_t lo = 0; lo < low_size; ++lo) {
      const std::size_t base = (hi << (count + shift)) | lo;
      if ((base & ctrl_mask) != ctrl_mask)
        continue;
      for (std::size_t r = 0; r < reg_size; ++r)
        sub[r] = amps_[base | (r << shift)];
      map(sub);
      if (sub.size() != reg_size)
        throw std::logic_error("register map changed the register size");
      for (std::size_t r = 0; r < reg_size; ++r)
        amps_[base | (r << shift)] = sub[r];
    }
  }
}

QuantumState init_zero_state(int n_qubits) { return QuantumState(n_qubits); }

QuantumState apply_gate(QuantumState state, const Gate &gate) {
  state.apply(gate);
  return state;
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("inner_product: register size mismatch");
  Complex s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    s += std::conj(a[j]) * b[j];
  return s;
}

Complex inner_product(const QuantumState &a, const QuantumState &b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("inner_product: register size mismatch");
  return inner_product(a.view(), b.view());
}

double expectation_z(const QuantumState &state, int qubit) {
  if (qubit < 0 || qubit >= state.n_qubits())
    throw std::out_of_range("qubit out of range");
  const std::size_t b = bit_of(state.n_qubits(), qubit);
  double z = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j)
    z += (j & b) ? -std::norm(state[j]) : std::norm(state[j]);
  return z;
}

std::string amplitudes_csv(const QuantumState &state) {
  std::string out = "index,re,im\n";
  for (std::size_t j = 0; j < state.size(); ++j) {
    out += std::to_string(j);
    out += ',';
    out += detail::fmt_double(state[j].real());
    out += ',';
    out += detail::fmt_double(state[j].imag());
    out += '\n';
  }
  return out;
}

} // namespace vqcfd
