#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vqcfd {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/// Largest register the emulator will allocate (2^24 amplitudes).
inline constexpr int kMaxQubits = 24;

/// Gate acting on one or two target qubits, optionally conditioned on a set of
/// control qubits all being |1>. Matrices are row-major; for two-qubit gates
/// the first target is the more significant index bit of the 4x4 matrix.
class Gate {
public:
  Gate(std::string name, std::vector<int> targets, std::vector<Complex> matrix,
       std::optional<double> angle = std::nullopt);

  const std::string &name() const { return name_; }
  const std::vector<int> &targets() const { return targets_; }
  const std::vector<int> &controls() const { return controls_; }
  const std::vector<Complex> &matrix() const { return matrix_; }
  std::optional<double> angle() const { return angle_; }
  int arity() const { return static_cast<int>(targets_.size()); }

  /// Copy of this gate additionally conditioned on `qubits` being |1>.
  Gate controlled_by(std::vector<int> qubits) const;
  /// Copy with every target and control index moved up by `offset`.
  Gate shifted(int offset) const;

private:
  std::string name_;
  std::vector<int> targets_;
  std::vector<int> controls_;
  std::vector<Complex> matrix_;
  std::optional<double> angle_;
};

namespace gates {
Gate x(int q);
Gate y(int q);
Gate z(int q);
Gate h(int q);
/// Ry(theta) = exp(-i theta Y / 2).
Gate ry(int q, double theta);
Gate cz(int a, int b);
Gate cnot(int control, int target);
/// X on `target` conditioned on every qubit in `controls` being |1>.
Gate mcx(std::vector<int> controls, int target);
} // namespace gates

/// Dense amplitude vector over N qubits. Qubit 0 is the most significant bit
/// of the basis index, i.e. the coarsest length scale.
class QuantumState {
public:
  explicit QuantumState(int n_qubits);
  /// Takes ownership of `amplitudes`; rejects vectors that are not 2^N long
  /// or whose norm deviates from 1 by more than `tol`.
  QuantumState(int n_qubits, Amplitudes amplitudes, double tol = 1e-10);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  const Amplitudes &amplitudes() const { return amps_; }
  std::span<const Complex> view() const { return amps_; }
  const Complex &operator[](std::size_t j) const { return amps_[j]; }
  double norm() const;

  void apply(const Gate &gate);

  /// Applies `map` to each 2^count sub-vector of qubits [first, first+count)
  /// for every basis assignment of the remaining qubits that satisfies the
  /// controls. The map must be unitary; it is the emulator's hook for
  /// directly constructed (controlled) register unitaries.
  void apply_on_register(int first, int count, const std::vector<int> &controls,
                         const std::function<void(std::vector<Complex> &)> &map);

  /// Raw mutable access for emulator internals. Callers own normalization.
  Amplitudes &mutable_amplitudes() { return amps_; }

private:
  int n_qubits_;
  Amplitudes amps_;
};

QuantumState init_zero_state(int n_qubits);
QuantumState apply_gate(QuantumState state, const Gate &gate);
Complex inner_product(const QuantumState &a, const QuantumState &b);
Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);

/// Probability that `qubit` is measured in |0> minus that of |1>.
double expectation_z(const QuantumState &state, int qubit);

std::string amplitudes_csv(const QuantumState &state);

inline std::size_t bit_of(int n_qubits, int qubit) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

} // namespace vqcfd
