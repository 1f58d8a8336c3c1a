#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vqcfd/encoding.hpp"
#include "vqcfd/grid.hpp"
#include "vqcfd/statevector.hpp"

namespace vqcfd {

/// Convention used throughout: S+|k> = |k+1 mod 2^N>, so on amplitudes
/// (S+ a)_k = a_{k-1}. S+^p for negative p is the inverse power.
struct ShiftTerm {
  int power;
  double coeff;
};

struct ShiftComposition {
  std::vector<ShiftTerm> terms;
};

struct PauliTerm {
  Complex coeff;
  /// One letter from IXYZ per qubit; letter q acts on qubit q (MSB first).
  std::string letters;
};

struct PauliSum {
  std::vector<PauliTerm> terms;
};

struct Diagonal {
  std::vector<double> values;
};

struct Dense {
  Eigen::MatrixXcd matrix;
};

/// Largest register for which a Dense representation is built.
inline constexpr int kMaxDenseQubits = 8;
/// Largest register for brute-force Pauli decomposition.
inline constexpr int kMaxPauliQubits = 6;

/// A linear operator on N qubits: `scale` times the represented matrix.
class OperatorSpec {
public:
  using Representation = std::variant<ShiftComposition, PauliSum, Diagonal, Dense>;

  OperatorSpec(int n_qubits, Representation rep, double scale = 1.0);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }
  double scale() const { return scale_; }
  const Representation &rep() const { return rep_; }

  bool is_shift() const { return std::holds_alternative<ShiftComposition>(rep_); }
  bool is_pauli() const { return std::holds_alternative<PauliSum>(rep_); }
  bool is_diagonal() const { return std::holds_alternative<Diagonal>(rep_); }
  bool is_dense() const { return std::holds_alternative<Dense>(rep_); }

private:
  int n_qubits_;
  Representation rep_;
  double scale_;
};

OperatorSpec identity_op(int n_qubits);
OperatorSpec shift_plus(int n_qubits);
/// (S+^dagger - S+) / (2h): (grad f)_k = (f_{k+1} - f_{k-1}) / (2h).
OperatorSpec nabla(int n_qubits, double h);
/// (S+^dagger - 2 I + S+) / h^2.
OperatorSpec laplacian(int n_qubits, double h);
OperatorSpec diagonal_of(const GridFunction &f);
/// Entries lambda0 * Re(psi_k).
OperatorSpec diagonal_of(const EncodedField &e);

/// Coefficients Tr(P_s^dagger M) / 2^N over all 4^N strings, dropping those
/// with magnitude <= 1e-12. Scale is folded into the coefficients.
OperatorSpec pauli_decompose(const OperatorSpec &op);

Eigen::MatrixXcd to_dense(const OperatorSpec &op);
OperatorSpec adjoint(const OperatorSpec &op);

/// Applies the operator in its native representation.
Amplitudes apply(const OperatorSpec &op, std::span<const Complex> v);
Amplitudes apply(const OperatorSpec &op, const QuantumState &state);
std::vector<double> apply_real(const OperatorSpec &op, std::span<const double> v);

/// A unitary building block of a sum-of-unitaries decomposition.
struct UnitaryTerm {
  Complex coeff;
  std::variant<int, std::string> unitary; ///< shift power, or Pauli string
};

/// Expands shift compositions and Pauli sums into weighted unitaries with the
/// scale folded in. Diagonal and Dense operators are rejected.
std::vector<UnitaryTerm> unitary_terms(const OperatorSpec &op);

/// Cyclic increment on qubits [offset, offset+N) as a cascade of
/// multi-controlled X gates, most significant target first.
std::vector<Gate> shift_plus_gates(int n_qubits, int offset = 0);
/// S+^power as repeated increments (power > 0) or decrements (power < 0).
std::vector<Gate> shift_power_gates(int n_qubits, int power, int offset = 0);
/// Single-qubit Pauli gates for `letters` on qubits starting at `offset`.
std::vector<Gate> pauli_string_gates(const std::string &letters, int offset = 0);

/// Lines `coeff_re coeff_im STRING`, scale folded into the coefficients.
std::string pauli_sum_text(const OperatorSpec &op);
OperatorSpec parse_pauli_sum(const std::string &text);

} // namespace vqcfd
